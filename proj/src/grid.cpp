#include "tissue/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tissue {

void GridSpec::validate() const {
    if (!(x_max > x_min) || !(y_max > y_min)) {
        throw std::invalid_argument("GridSpec: degenerate domain box");
    }
    if (nx < 4 || ny < 4) {
        throw std::invalid_argument("GridSpec: nx and ny must be at least 4 (got " +
                                    std::to_string(nx) + "x" + std::to_string(ny) + ")");
    }
}

GridSpec GridSpec::refined(int new_nx, int new_ny) const {
    GridSpec g = *this;
    g.nx = new_nx;
    g.ny = new_ny;
    g.validate();
    return g;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const GridSpec& spec, double fill)
    : spec_(spec), values_(spec.cell_count(), fill) {
    spec_.validate();
}

double ScalarField::integral() const {
    double s = 0.0;
    for (double x : values_) s += x;
    return s * spec_.cell_area();
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

static void require_same(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw std::invalid_argument("field grid mismatch");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same(spec_, o.spec_);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same(spec_, o.spec_);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double a) {
    for (double& x : values_) x *= a;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(const GridSpec& spec)
    : spec_(spec),
      u_(std::size_t(spec.nx + 1) * std::size_t(spec.ny), 0.0),
      v_(std::size_t(spec.nx) * std::size_t(spec.ny + 1), 0.0) {
    spec_.validate();
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (double x : u_) m = std::max(m, std::abs(x));
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

bool VectorField::all_finite() const {
    auto finite = [](double x) { return std::isfinite(x); };
    return std::all_of(u_.begin(), u_.end(), finite) && std::all_of(v_.begin(), v_.end(), finite);
}

bool VectorField::boundary_is_zero() const {
    const int nx = spec_.nx, ny = spec_.ny;
    for (int j = 0; j < ny; ++j) {
        if (u(0, j) != 0.0 || u(nx, j) != 0.0) return false;
    }
    for (int i = 0; i < nx; ++i) {
        if (v(i, 0) != 0.0 || v(i, ny) != 0.0) return false;
    }
    return true;
}

VectorField& VectorField::operator+=(const VectorField& o) {
    require_same(spec_, o.spec_);
    for (std::size_t k = 0; k < u_.size(); ++k) u_[k] += o.u_[k];
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    require_same(spec_, o.spec_);
    for (std::size_t k = 0; k < u_.size(); ++k) u_[k] -= o.u_[k];
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
}

VectorField& VectorField::operator*=(double a) {
    for (double& x : u_) x *= a;
    for (double& x : v_) x *= a;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------------------------------------------------------------------
// Operators

ScalarField divergence(const VectorField& v) {
    const GridSpec& g = v.spec();
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    ScalarField d(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            d(i, j) = (v.u(i + 1, j) - v.u(i, j)) * ihx + (v.v(i, j + 1) - v.v(i, j)) * ihy;
        }
    }
    return d;
}

VectorField gradient(const ScalarField& s) {
    const GridSpec& g = s.spec();
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    VectorField grad(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) grad.u(i, j) = (s(i, j) - s(i - 1, j)) * ihx;
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) grad.v(i, j) = (s(i, j) - s(i, j - 1)) * ihy;
    }
    return grad;
}

ScalarField laplacian(const ScalarField& s, BoundaryKind bc) {
    const GridSpec& g = s.spec();
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    const double sign = bc == BoundaryKind::ZeroFlux ? 1.0 : -1.0;
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double c = s(i, j);
            const double w = i > 0 ? s(i - 1, j) : sign * c;
            const double e = i < g.nx - 1 ? s(i + 1, j) : sign * c;
            const double so = j > 0 ? s(i, j - 1) : sign * c;
            const double n = j < g.ny - 1 ? s(i, j + 1) : sign * c;
            out(i, j) = (w - 2.0 * c + e) * ihx2 + (so - 2.0 * c + n) * ihy2;
        }
    }
    return out;
}

ScalarField curl2d(const VectorField& v) {
    const GridSpec& g = v.spec();
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    // Node (i,j) sits at (xf(i), yf(j)), i in [0,nx], j in [0,ny].
    std::vector<double> w(std::size_t(nx + 1) * std::size_t(ny + 1), 0.0);
    auto at = [&](int i, int j) -> double& { return w[std::size_t(j) * std::size_t(nx + 1) + std::size_t(i)]; };
    for (int j = 1; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            at(i, j) = (v.v(i, j) - v.v(i - 1, j)) * ihx - (v.u(i, j) - v.u(i, j - 1)) * ihy;
        }
    }
    for (int i = 1; i < nx; ++i) {
        at(i, 0) = 2.0 * at(i, 1) - at(i, 2);
        at(i, ny) = 2.0 * at(i, ny - 1) - at(i, ny - 2);
    }
    for (int j = 0; j <= ny; ++j) {
        at(0, j) = 2.0 * at(1, j) - at(2, j);
        at(nx, j) = 2.0 * at(nx - 1, j) - at(nx - 2, j);
    }
    ScalarField c(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            c(i, j) = 0.25 * (at(i, j) + at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1));
        }
    }
    return c;
}

CellVelocity to_cell_centres(const VectorField& v) {
    const GridSpec& g = v.spec();
    CellVelocity c{ScalarField(g), ScalarField(g)};
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            c.x(i, j) = 0.5 * (v.u(i, j) + v.u(i + 1, j));
            c.y(i, j) = 0.5 * (v.v(i, j) + v.v(i, j + 1));
        }
    }
    return c;
}

double inner(const ScalarField& a, const ScalarField& b) {
    require_same(a.spec(), b.spec());
    double s = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
    return s * a.spec().cell_area();
}

double inner(const VectorField& a, const VectorField& b) {
    require_same(a.spec(), b.spec());
    double s = 0.0;
    auto au = a.u_values();
    auto bu = b.u_values();
    for (std::size_t k = 0; k < au.size(); ++k) s += au[k] * bu[k];
    auto av = a.v_values();
    auto bv = b.v_values();
    for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
    return s * a.spec().cell_area();
}

double l2_norm(const ScalarField& a) { return std::sqrt(inner(a, a)); }
double l2_norm(const VectorField& a) { return std::sqrt(inner(a, a)); }

}  // namespace tissue
