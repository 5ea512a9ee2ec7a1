/// @file limit_sweep.hpp
/// @brief Runs of the density model along a sequence of (eps, m, alpha) approaching the
/// incompressible limit, tabulated for monotonicity checks.
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tissue/constitutive.hpp"
#include "tissue/dynamics.hpp"
#include "tissue/grid.hpp"

namespace tissue {

struct SweepTuple {
    double eps = 0.1;
    double m = 30.0;
    double alpha = 1e-3;
    /// Optional overrides of the viscosities and growth slopes.
    std::optional<double> beta1, beta2, g1, g2;

    [[nodiscard]] ModelParams apply(ModelParams p) const;
};

/// Everything but the swept parameters.
struct SweepSetup {
    ModelParams params = tissular_params();
    ScalarField n1, n2;
    StepControl ctrl{};
    DynamicsOptions options{};
};

struct SweepRow {
    SweepTuple tuple;
    ModelParams params;  ///< parameters of the run
    bool ok = false;
    std::string error;  ///< set when the run failed
    double t = 0.0;
    std::size_t steps = 0;
    double overlap = 0.0;          ///< int n1 n2
    double comp_residual = 0.0;    ///< int p_eps(n) (1 - n)
    double binary_distance = 0.0;  ///< int n (1 - n)
    double wall_seconds = 0.0;     ///< run time, not written to the table
};

enum class SweepColumn { Overlap, CompResidual, BinaryDistance };

struct ConvergenceTable {
    std::vector<SweepRow> rows;

    /// True when every row succeeded and the column strictly decreases down the table.
    [[nodiscard]] bool strictly_decreasing(SweepColumn c) const;
};

/// Called from the worker thread with the tuple index, the trajectory and the wall time
/// of a successful run.
using SweepRunCallback = std::function<void(std::size_t, const RunResult&, double)>;

/// Runs the model to setup.ctrl.t_end for each tuple, up to `jobs` runs at a time.
/// Rows are in tuple order and do not depend on `jobs`. A failed run keeps its row
/// with ok = false and the error text. `record_every` sets the trajectory cadence
/// seen by `on_run`.
[[nodiscard]] ConvergenceTable limit_sweep(const SweepSetup& setup, const std::vector<SweepTuple>& tuples,
                                           int jobs = 1, const SweepRunCallback& on_run = {},
                                           int record_every = 1 << 30);

/// Columns: eps,m,alpha,beta1,beta2,g1,g2,status,t,steps,overlap,comp_residual,
/// binary_distance,error. The parameter columns hold the values actually used.
void write_sweep_csv(std::ostream& os, const ConvergenceTable& table);

}  // namespace tissue
