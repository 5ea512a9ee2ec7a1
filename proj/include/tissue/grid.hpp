/// @file grid.hpp
/// @brief Uniform rectangular grid with MAC (staggered) field placement.
///
/// Scalars live at cell centres, the x-velocity on vertical faces and the
/// y-velocity on horizontal faces:
///
///         v(i,j+1)
///            |
///   u(i,j) --s(i,j)-- u(i+1,j)
///            |
///          v(i,j)
///
/// All operators are pure functions of their inputs.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tissue {

struct GridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;
    int nx = 64;
    int ny = 64;

    /// Throws std::invalid_argument unless the box is non-degenerate and nx, ny >= 4.
    void validate() const;

    [[nodiscard]] double hx() const { return (x_max - x_min) / nx; }
    [[nodiscard]] double hy() const { return (y_max - y_min) / ny; }
    [[nodiscard]] double cell_area() const { return hx() * hy(); }

    [[nodiscard]] double xc(int i) const { return x_min + (i + 0.5) * hx(); }
    [[nodiscard]] double yc(int j) const { return y_min + (j + 0.5) * hy(); }
    [[nodiscard]] double xf(int i) const { return x_min + i * hx(); }
    [[nodiscard]] double yf(int j) const { return y_min + j * hy(); }

    [[nodiscard]] std::size_t cell_count() const { return std::size_t(nx) * std::size_t(ny); }

    /// Same box, different resolution.
    [[nodiscard]] GridSpec refined(int new_nx, int new_ny) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Cell-centred grid function, x index fastest.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& spec, double fill = 0.0);

    [[nodiscard]] const GridSpec& spec() const { return spec_; }
    [[nodiscard]] int nx() const { return spec_.nx; }
    [[nodiscard]] int ny() const { return spec_.ny; }

    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }

    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    [[nodiscard]] std::size_t index(int i, int j) const {
        return std::size_t(j) * std::size_t(spec_.nx) + std::size_t(i);
    }

    /// Sum of values times cell area.
    [[nodiscard]] double integral() const;
    [[nodiscard]] double max() const;
    [[nodiscard]] double min() const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double a);

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    GridSpec spec_{};
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Face-centred velocity. `u` has (nx+1) x ny entries, `v` has nx x (ny+1).
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const GridSpec& spec);

    [[nodiscard]] const GridSpec& spec() const { return spec_; }

    double& u(int i, int j) { return u_[u_index(i, j)]; }
    double u(int i, int j) const { return u_[u_index(i, j)]; }
    double& v(int i, int j) { return v_[v_index(i, j)]; }
    double v(int i, int j) const { return v_[v_index(i, j)]; }

    [[nodiscard]] std::span<double> u_values() { return u_; }
    [[nodiscard]] std::span<const double> u_values() const { return u_; }
    [[nodiscard]] std::span<double> v_values() { return v_; }
    [[nodiscard]] std::span<const double> v_values() const { return v_; }

    [[nodiscard]] std::size_t u_index(int i, int j) const {
        return std::size_t(j) * std::size_t(spec_.nx + 1) + std::size_t(i);
    }
    [[nodiscard]] std::size_t v_index(int i, int j) const {
        return std::size_t(j) * std::size_t(spec_.nx) + std::size_t(i);
    }

    /// Largest |component| over all faces.
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] bool all_finite() const;
    /// True when every boundary-normal face value is exactly zero.
    [[nodiscard]] bool boundary_is_zero() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double a);

    friend bool operator==(const VectorField&, const VectorField&) = default;

private:
    GridSpec spec_{};
    std::vector<double> u_;
    std::vector<double> v_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

enum class BoundaryKind { ZeroFlux, ZeroValue };

[[nodiscard]] ScalarField divergence(const VectorField& v);

/// Face differences of adjacent cells; boundary-normal faces are set to zero.
[[nodiscard]] VectorField gradient(const ScalarField& s);

/// 5-point Laplacian with ghost cells: mirror for ZeroFlux, odd reflection for ZeroValue.
[[nodiscard]] ScalarField laplacian(const ScalarField& s, BoundaryKind bc);

/// dv/dx - du/dy, computed on grid nodes and averaged to cell centres.
/// Nodes on the boundary are filled by linear extrapolation from the interior.
[[nodiscard]] ScalarField curl2d(const VectorField& v);

/// Cell-centred average of the face velocity, one field per component.
struct CellVelocity {
    ScalarField x;
    ScalarField y;
};
[[nodiscard]] CellVelocity to_cell_centres(const VectorField& v);

/// Discrete L2 inner products (area weighted).
[[nodiscard]] double inner(const ScalarField& a, const ScalarField& b);
[[nodiscard]] double inner(const VectorField& a, const VectorField& b);
[[nodiscard]] double l2_norm(const ScalarField& a);
[[nodiscard]] double l2_norm(const VectorField& a);

}  // namespace tissue
