/// @file freeboundary.hpp
/// @brief Sharp-interface evolution of the incompressible-limit models.
///
/// Each tissue region is the set {level_i > 1/2} of a continuous level field. One step:
///   1. stationary solve on the current partition with the current q;
///   2. dt from the CFL condition on the face velocities;
///   3. upwind transport of level_i by v_i in the form d_t l + div(l v) = l div v,
///      which is the advective update l + dt/h sum_in |u| (l_nb - l) and so stays in [0, 1];
///   4. with repulsion, s = log(1 + q) is transported by the other tissue's velocity
///      (d_t s + div(s v_j) = s G_j) on each region;
///   5. where level1 + level2 > 1 the smaller level is cut to the remaining volume fraction;
///   6. rethresholding, contested cells going to the larger level (ties to tissue 1).
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "tissue/constitutive.hpp"
#include "tissue/grid.hpp"
#include "tissue/solver.hpp"
#include "tissue/stationary.hpp"

namespace tissue {

enum class LimitModel { LESVM, LVM };

struct LimitState {
    double t = 0.0;
    ScalarField level1, level2;
    DomainPartition part;
    ScalarField q;  ///< repulsion pressure, 0 outside the tissues
    VectorField v1, v2;  ///< velocities of the last stationary solve
    ScalarField p;       ///< pressure of the last stationary solve
    double closure = 0.0;  ///< max |div v_i - G_i(p)| on Omega_i of the last solve
    std::size_t steps = 0;
    double last_dt = 0.0;

    [[nodiscard]] const GridSpec& spec() const { return level1.spec(); }
};

struct LimitControl {
    /// dt max|face velocity| / min(hx, hy). At most 1/4, so that the outflow through
    /// the four faces of a cell never exceeds its content.
    double cfl_number = 0.25;
    double max_dt = 1e-2;
    double t_end = 0.1;
    LimitModel model = LimitModel::LESVM;
    /// A region that had at least this many cells and falls below it ends the run.
    std::size_t min_cells = 4;

    void validate() const;
};

/// A tissue region vanished or the state cannot be advanced.
class LimitFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// State from indicator-like initial fields (thresholded at 1/2) and a repulsion pressure.
/// Throws std::invalid_argument on negative or non-finite q.
[[nodiscard]] LimitState init_limit_state(const ScalarField& level1, const ScalarField& level2,
                                          const ScalarField& q0);

/// Solves the stationary problem on `state` and stores v1, v2, p.
void solve_limit_velocities(LimitState& state, const ModelParams& params, const SolverConfig& cfg);

/// One step. The L-VM ignores q and keeps it at zero.
[[nodiscard]] LimitState step_limit(const LimitState& state, const LimitControl& ctrl, const ModelParams& params,
                                    const SolverConfig& cfg = {});

/// Advances q = exp(s) - 1 by dt on the current partition using the stored velocities
/// and pressure: upwind transport of s by v_other, then s *= exp(dt G_other).
/// `dt` must satisfy the CFL condition for v1 and v2.
[[nodiscard]] ScalarField transport_q(const LimitState& state, double dt, const ModelParams& params);

/// Lower-level form: s = log(1 + q) restricted to `region` (cells with value > 1/2) is
/// transported by `velocity` and multiplied by exp(dt rate). The result is not masked,
/// so values carried across the region boundary are kept for the caller to reassign.
[[nodiscard]] ScalarField transport_log_q(const ScalarField& q, const ScalarField& region, const VectorField& velocity,
                                          const ScalarField& rate, double dt);

/// Upwind update of a level field in the form d_t l + div(l v) = l div v.
[[nodiscard]] ScalarField advect_level(const ScalarField& level, const VectorField& v, double dt);

/// Largest dt with dt max|face velocity| <= cfl min(hx, hy); infinity for zero velocity.
[[nodiscard]] double limit_cfl_dt(const VectorField& v1, const VectorField& v2, double cfl_number);

struct ClosureResidual {
    ScalarField r1, r2;  ///< div v_i - G_i(p) on Omega_i, 0 elsewhere
    double max1 = 0.0, max2 = 0.0;

    [[nodiscard]] double max() const { return max1 > max2 ? max1 : max2; }
};

/// Residual of div v_i = G_i(p_i) on each region.
[[nodiscard]] ClosureResidual complementarity_closure(const DomainPartition& part, const ModelParams& params,
                                                      const StationarySolution& sol);

/// Region label per cell (0 outside, 1, 2) in the field CSV layout.
void write_mask_csv(std::ostream& os, const DomainPartition& part);

/// Interface faces chained through shared grid vertices, one row per face midpoint:
/// interface,chain,point,x,y.
void write_interface_polylines(std::ostream& os, const DomainPartition& part);

struct LimitRecord {
    double t = 0.0;
    double area1 = 0.0, area2 = 0.0;  ///< cell counts times cell area
    double level_area1 = 0.0, level_area2 = 0.0;  ///< integrals of the level fields
    std::size_t overlap_cells = 0;    ///< cells in both regions
    std::size_t contested_cells = 0;  ///< cells with both levels above 1/2
    double q_max = 0.0;
    double closure = 0.0;
};

[[nodiscard]] LimitRecord make_limit_record(const LimitState& state);

void write_limit_records_csv(std::ostream& os, const std::vector<LimitRecord>& records);

struct LimitRunResult {
    std::vector<LimitRecord> trajectory;
    LimitState final_state;
};

using LimitObserver = std::function<void(const LimitState&, const LimitRecord&)>;

/// Steps until ctrl.t_end, recording after every `record_every` steps and at the end.
/// Records carry the closure residual of the solve that moved the state to them; the
/// initial record has none.
[[nodiscard]] LimitRunResult run_limit(LimitState state, const LimitControl& ctrl, const ModelParams& params,
                                       const SolverConfig& cfg = {}, const std::vector<LimitObserver>& observers = {},
                                       int record_every = 1);

}  // namespace tissue
