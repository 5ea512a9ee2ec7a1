/// @file dynamics.hpp
/// @brief Time stepping of the two-tissue density models.
///
/// One step, from a state whose pressures and velocities match its densities:
///   1. pick dt (CFL on face velocities, explicit-reaction stability, halving);
///   2. donor-cell flux of n_i v_i plus the explicit reaction max(n_i,0) G_i(p_i);
///   3. if alpha > 0, the fourth-order term implicitly:
///        (I + dt alpha D[n_i^k] L) n_i^{k+1} = n_i^*,  w_i = L n_i^{k+1},
///      D[n] = div(n grad .), L the zero-flux Laplacian;
///   4. clamp to [0, 1 - kClampDelta] with a shared scale when n1 + n2 is too large;
///   5. new pressures and Brinkman velocities.
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tissue/constitutive.hpp"
#include "tissue/diagnostics.hpp"
#include "tissue/grid.hpp"
#include "tissue/solver.hpp"

namespace tissue {

class BrinkmanSolver;

enum class Model { ESVM, VM };
enum class VelocityLaw { DirichletWalls, GradientPotential };

struct StepControl {
    double dt = 1e-3;          ///< requested step, reduced by halving when needed
    double cfl_number = 0.4;   ///< dt max|v| / min(hx, hy) must not exceed this
    double t_end = 0.1;
    Model model = Model::ESVM;
    int max_halvings = 20;
    /// dt max(n_i dp_i/dn_i (|G_i'| + 1/beta_i)) must not exceed this: stability of the
    /// explicit reaction and of the pressure-driven compression.
    double reaction_limit = 0.5;

    void validate() const;
};

struct DynamicsOptions {
    bool repulsion = true;  ///< include n_j q_m(n1 n2) in the tissue pressures
    VelocityLaw law = VelocityLaw::DirichletWalls;
    SolverConfig solver{};
};

struct SimState {
    double t = 0.0;
    ScalarField n1, n2;
    ScalarField p1, p2;
    ScalarField w1, w2;  ///< discrete Laplacians of the densities after the last step
    VectorField v1, v2;
    std::size_t steps = 0;
    std::size_t clamp_count = 0;     ///< cumulative cells pulled below 1 - kClampDelta
    std::size_t negative_clips = 0;  ///< cumulative cells lifted back to 0
    std::size_t overflow_count = 0;  ///< cumulative cells where q_m saturated
    double last_dt = 0.0;
    /// Velocity solvers for this grid, shared between copies of the state.
    std::shared_ptr<const BrinkmanSolver> brinkman1, brinkman2;

    [[nodiscard]] const GridSpec& spec() const { return n1.spec(); }
};

/// Rejected initial data; names the first offending cell.
class InitialDataError : public std::invalid_argument {
public:
    InitialDataError(const std::string& what, int i, int j)
        : std::invalid_argument(what + " at cell (" + std::to_string(i) + ", " + std::to_string(j) + ")"),
          i_(i),
          j_(j) {}
    [[nodiscard]] int i() const { return i_; }
    [[nodiscard]] int j() const { return j_; }

private:
    int i_, j_;
};

/// Raised when no admissible dt is found within max_halvings.
class StepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] SimState init_state(const ScalarField& n1, const ScalarField& n2, const ModelParams& params,
                                  const DynamicsOptions& options = {});

[[nodiscard]] SimState step_esvm(const SimState& state, const StepControl& ctrl, const ModelParams& params,
                                 const DynamicsOptions& options = {});

/// The ESVM step with repulsion removed and alpha = 0.
[[nodiscard]] SimState step_vm(const SimState& state, const StepControl& ctrl, const ModelParams& params,
                               const DynamicsOptions& options = {});

/// Recompute pressures and velocities of `state` from its densities.
void refresh_fields(SimState& state, const ModelParams& params, const DynamicsOptions& options);

[[nodiscard]] DiagnosticRecord make_record(const SimState& state, const ModelParams& params);

using Observer = std::function<void(const SimState&, const DiagnosticRecord&)>;

struct RunResult {
    std::vector<DiagnosticRecord> trajectory;
    SimState final_state;
};

/// Steps until ctrl.t_end. A record is taken at the start, every `record_every`
/// steps and at the end; each record is passed to every observer.
/// Returns an empty trajectory when t_end <= state.t.
[[nodiscard]] RunResult run(SimState state, const StepControl& ctrl, const ModelParams& params,
                            const DynamicsOptions& options = {}, const std::vector<Observer>& observers = {},
                            int record_every = 1);

}  // namespace tissue
