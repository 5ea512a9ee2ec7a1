/// @file stationary.hpp
/// @brief Stationary sharp-interface velocity system on a fixed partition.
///
/// Unknowns are the face velocities v1, v2 on the whole box (Dirichlet walls).
/// With chi_i the indicators of the tissue regions and P_1 = p1* chi1 + (p2* + q) chi2,
/// P_2 = p2* chi2 + (p1* + q) chi1, the discrete system is
///
///   beta1 K v1 + v1 + D^T (chi1/g1) D v1 + D^T (chi2/g2) D v2 = -grad P_1
///   beta2 K v2 + v2 + D^T (chi2/g2) D v2 + D^T (chi1/g1) D v1 = -grad P_2
///
/// with K the face -Laplacian and D the cell divergence. The pressure is then
/// p = (p1* - div v1 / g1) chi1 + (p2* - div v2 / g2) chi2, and 0 outside.
#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tissue/assembly.hpp"
#include "tissue/constitutive.hpp"
#include "tissue/grid.hpp"
#include "tissue/solver.hpp"

namespace tissue {

enum class Region { Outside = 0, One = 1, Two = 2 };

/// Staircase interface classes. The normal of a face points from the first named
/// region to the second: tissue 1 -> tissue 2, tissue 1 -> outside, tissue 2 -> outside.
enum class InterfaceClass { OneTwo, OneOutside, TwoOutside };

[[nodiscard]] const char* interface_name(InterfaceClass c);

struct InterfaceFace {
    InterfaceClass cls = InterfaceClass::OneTwo;
    FaceComponent component = FaceComponent::U;
    int i = 0, j = 0;           ///< face indices in the VectorField layout
    std::size_t index = 0;      ///< position in the packed [u | v] face vector
    int a_i = 0, a_j = 0;       ///< cell on the side the normal leaves
    int b_i = 0, b_j = 0;       ///< cell on the side the normal enters
    double nx = 0.0, ny = 0.0;  ///< unit normal, axis aligned
    /// Estimated normal of the underlying curved interface: minus the gradient of the
    /// 3x3-averaged origin-region indicator, averaged over the two adjacent cells.
    double gx = 0.0, gy = 0.0;
    double x = 0.0, y = 0.0;    ///< face midpoint
};

class InvalidPartition : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two disjoint 0/1 indicator fields and the faces separating their regions.
class DomainPartition {
public:
    DomainPartition() = default;
    /// Throws InvalidPartition when an indicator is not 0/1, the regions overlap, or
    /// (with `require_margin`) a region comes within 2 cells of the box boundary.
    DomainPartition(ScalarField chi1, ScalarField chi2, bool require_margin = true);

    [[nodiscard]] const GridSpec& spec() const { return chi1_.spec(); }
    [[nodiscard]] const ScalarField& chi1() const { return chi1_; }
    [[nodiscard]] const ScalarField& chi2() const { return chi2_; }
    [[nodiscard]] Region region(int i, int j) const;
    [[nodiscard]] bool single_species() const { return cells2_ == 0; }
    [[nodiscard]] std::size_t cell_count(Region r) const;

    [[nodiscard]] const std::vector<InterfaceFace>& faces() const { return faces_; }
    [[nodiscard]] std::vector<InterfaceFace> faces(InterfaceClass c) const;

    /// Same partition with the tissue labels exchanged.
    [[nodiscard]] DomainPartition swapped() const;

private:
    ScalarField chi1_, chi2_;
    std::size_t cells1_ = 0, cells2_ = 0;
    std::vector<InterfaceFace> faces_;
};

/// Partition from density-like fields: a cell belongs to tissue i when its value is above 1/2.
[[nodiscard]] DomainPartition partition_from_levels(const ScalarField& level1, const ScalarField& level2,
                                                    bool require_margin = true);

struct StationarySystem {
    SparseMatrix matrix;       ///< 2N x 2N (N faces per velocity), or N x N for one species
    Vector rhs;
    std::size_t faces_per_field = 0;
    bool single_species = false;
};

/// Assembles the system above; `q` is read on tissue cells only.
/// With `single_species` only the v1 block is kept (chi2 must vanish).
[[nodiscard]] StationarySystem assemble_weak_form(const DomainPartition& part, const ModelParams& params,
                                                  const ScalarField& q, bool single_species = false);

/// B((v1, v2), (v1, v2)) of the weak form on `part`.
[[nodiscard]] double form_value(const DomainPartition& part, const ModelParams& params, const VectorField& v1,
                                const VectorField& v2);

/// <K v, v>: the discrete squared H1 seminorm of a face velocity with zero walls.
[[nodiscard]] double gradient_energy(const VectorField& v);

struct StationarySolution {
    VectorField v1, v2;
    ScalarField p;  ///< pressure, 0 outside the tissues
    ScalarField q;  ///< repulsion pressure as supplied, zeroed outside the tissues
    CoercivityReport coercivity;
    double residual = 0.0;  ///< relative residual of the linear solve
    bool single_species = false;
};

/// Solves the two-species system. A failed coercivity check does not stop the solve;
/// it is reported in the solution.
[[nodiscard]] StationarySolution solve_stationary(const DomainPartition& part, const ModelParams& params,
                                                  const ScalarField& q, const SolverConfig& cfg = {});

/// Tissue 1 alone (chi2 must vanish): v2 = 0 and no condition on beta, g.
[[nodiscard]] StationarySolution solve_stationary_single(const DomainPartition& part, const ModelParams& params,
                                                         const SolverConfig& cfg = {});

enum class JumpQuantity { Pressure, VelocityV1, VelocityV2, NormalGradientV1, NormalGradientV2 };
enum class TraceOrder { Linear, Quadratic };

[[nodiscard]] const char* quantity_name(JumpQuantity q);

/// One interface face. Scalars use component 0 only. Traces are taken along the
/// axis normal e of the face; n is the estimated interface normal. Since the
/// velocity gradient jumps only across the interface, [beta_i d v_i / d e] = [P_i] n (n . e),
/// which is the prediction for the normal-gradient quantities. For the pressure the
/// prediction is beta_t [d v_t / d e] . n / (n . e) plus the repulsion correction, with t
/// the tissue on the normal's origin side.
struct JumpRecord {
    InterfaceClass cls = InterfaceClass::OneTwo;
    JumpQuantity quantity = JumpQuantity::Pressure;
    std::size_t face_index = 0;
    double x = 0.0, y = 0.0, nx = 0.0, ny = 0.0;
    int components = 1;
    bool traceable = false;  ///< false when a side has too few cells of its region
    std::array<double, 2> left{}, right{}, jump{}, predicted{}, residual{};

    [[nodiscard]] double jump_norm() const;
    [[nodiscard]] double residual_norm() const;
};

struct JumpSummary {
    std::size_t faces = 0;
    std::size_t traced = 0;
    double mean_abs_jump = 0.0;  ///< mean over traced faces of |jump| (Euclidean for vectors)
    double max_abs_jump = 0.0;
    double mean_abs_residual = 0.0;
    double max_abs_residual = 0.0;
};

struct JumpTable {
    std::vector<JumpRecord> records;
    [[nodiscard]] JumpSummary summary(InterfaceClass c) const;
};

/// One-sided traces by extrapolation from the nearest same-region cells on each side.
[[nodiscard]] JumpTable measure_jump(const StationarySolution& sol, const DomainPartition& part,
                                     const ModelParams& params, JumpQuantity quantity,
                                     TraceOrder order = TraceOrder::Linear);

/// Columns: interface, face_index, x, y, nx, ny, quantity, left_trace, right_trace,
/// jump, predicted_jump, residual. Vector quantities give one row per component
/// (quantity suffixed _x / _y); untraceable faces are written with empty values.
void write_jump_csv(std::ostream& os, const JumpTable& table);

struct TransmissionResidual {
    InterfaceClass cls = InterfaceClass::OneTwo;
    std::string condition;  ///< flux_v1, flux_v2, continuity_v1, continuity_v2, normal_velocity
    std::size_t faces = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
};

/// Residuals of the interface conditions per class. Single-species solutions report
/// flux_v1 and continuity_v1 only; normal_velocity is reported on the tissue-tissue
/// interface from the face unknowns themselves.
[[nodiscard]] std::vector<TransmissionResidual> verify_transmission(const StationarySolution& sol,
                                                                    const DomainPartition& part,
                                                                    const ModelParams& params,
                                                                    TraceOrder order = TraceOrder::Linear);

void write_transmission_csv(std::ostream& os, const std::vector<TransmissionResidual>& rows);

}  // namespace tissue
