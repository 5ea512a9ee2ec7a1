#include "tissue/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

#include "tissue/brinkman.hpp"
#include "tissue/config.hpp"
#include "tissue/constitutive.hpp"
#include "tissue/diagnostics.hpp"
#include "tissue/freeboundary.hpp"

namespace tissue {

ScalarField random_cells(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ScalarField s(g);
    for (double& x : s.values()) x = d(rng);
    return s;
}

VectorField random_interior_faces(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    VectorField v(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) v.u(i, j) = d(rng);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v.v(i, j) = d(rng);
    return v;
}

DomainPartition random_partition(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    ScalarField a(g), b(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int r = pick(rng);
            if (r == 1) a(i, j) = 1.0;
            if (r == 2) b(i, j) = 1.0;
        }
    return DomainPartition(a, b, false);
}

namespace {

GridSpec box(int nx, int ny) {
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    return g;
}

ModelParams unit_params() {
    ModelParams p = tissular_params();
    p.beta1 = p.beta2 = 1.0;
    p.g1 = p.g2 = 1.0;
    return p;
}

// A trial returns an empty string on success, otherwise what went wrong.
using Trial = std::function<std::string(std::mt19937_64&, int)>;

InvariantResult run_property(const std::string& name, int trials, std::mt19937_64& rng, const Trial& trial) {
    InvariantResult r;
    r.name = name;
    r.trials = trials;
    for (int k = 0; k < trials; ++k) {
        std::string why;
        try {
            why = trial(rng, k);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        if (!why.empty()) {
            if (r.failures == 0) r.first_failure = "trial " + std::to_string(k) + ": " + why;
            ++r.failures;
        }
    }
    return r;
}

std::string compare(const char* what, double lhs, double rhs, double tol) {
    if (std::abs(lhs - rhs) <= tol) return {};
    std::ostringstream os;
    os.precision(17);
    os << what << ": " << lhs << " vs " << rhs << " (tolerance " << tol << ")";
    return os.str();
}

std::string adjoint_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(6 + k, 5 + 2 * k);
    const ScalarField s = random_cells(g, rng);
    const VectorField v = random_interior_faces(g, rng);
    const double scale = l2_norm(s) * (l2_norm(v) + l2_norm(divergence(v)));
    return compare("<grad s, v> + <s, div v>", inner(gradient(s), v), -inner(s, divergence(v)), 1e-12 * scale);
}

std::string curl_gradient_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(8 + k, 8 + (k * 3) % 7);
    const ScalarField c = curl2d(gradient(random_cells(g, rng)));
    double worst = 0.0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) worst = std::max(worst, std::abs(c(i, j)));
    return compare("interior curl of a gradient", worst, 0.0, 1e-10);
}

std::string brinkman_energy_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(10 + 2 * k, 12 + k);
    std::uniform_real_distribution<double> betas(0.05, 2.0);
    const double beta = betas(rng);
    const ScalarField p = random_cells(g, rng);
    SolverConfig cfg;
    cfg.method = SolverMethod::Direct;
    const VectorField v = solve_brinkman(p, beta, cfg);
    const double lhs = beta * gradient_energy(v) + inner(v, v);
    const double rhs = -inner(gradient(p), v);
    return compare("beta |grad v|^2 + |v|^2 = -<grad p, v>", lhs, rhs, 1e-8 * std::abs(rhs));
}

std::string monotone_pressure_trial(std::mt19937_64& rng, int) {
    std::uniform_real_distribution<double> n(0.0, 0.98), r(0.0, 0.25), ms(1.5, 200.0), es(1e-3, 1.0);
    const double eps = es(rng), m = ms(rng);
    const double a = n(rng), b = n(rng);
    if ((congestion_pressure(std::min(a, b), eps) > congestion_pressure(std::max(a, b), eps)))
        return "congestion pressure decreased";
    const double s = r(rng), t = r(rng);
    if (repulsion_pressure(std::min(s, t), m).value > repulsion_pressure(std::max(s, t), m).value)
        return "repulsion pressure decreased";
    if (repulsion_pressure(0.0, m).value != 0.0) return "repulsion pressure nonzero at 0";
    return {};
}

std::string coercivity_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(8 + k % 7, 8 + k % 5);
    const ModelParams p = unit_params();
    const double lambda = coercivity_check(p).lambda;
    const DomainPartition part = random_partition(g, rng);
    const VectorField v1 = random_interior_faces(g, rng), v2 = random_interior_faces(g, rng);
    const double energy = gradient_energy(v1) + gradient_energy(v2);
    const double form = form_value(part, p, v1, v2);
    const double bound = lambda * energy + inner(v1, v1) + inner(v2, v2);
    if (form >= bound - 1e-12 * energy) return {};
    return compare("form below the coercivity bound", form, bound, 1e-12 * energy);
}

std::string level_advection_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(10 + k, 10 + k);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const VectorField v = random_interior_faces(g, rng);
    const double dt = limit_cfl_dt(v, v, 0.25);
    ScalarField level(g);
    for (double& x : level.values()) x = u01(rng) < 0.5 ? 0.0 : u01(rng);
    const ScalarField out = advect_level(level, v, dt);
    if (out.min() < 0.0 || out.max() > 1.0) return "level left [0, 1]";
    const ScalarField full = advect_level(ScalarField(g, 1.0), v, dt);
    return compare("full level after advection", full.min(), 1.0, 1e-12);
}

std::string q_transport_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(10 + k, 9 + k);
    std::uniform_real_distribution<double> u01(0.0, 1.0), rates(-5.0, 5.0);
    const VectorField v = random_interior_faces(g, rng);
    const double dt = limit_cfl_dt(v, v, 0.25);
    ScalarField q(g), region(g), rate(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        region.values()[c] = u01(rng) < 0.6 ? 1.0 : 0.0;
        q.values()[c] = region.values()[c] * 3.0 * u01(rng);
        rate.values()[c] = rates(rng);
    }
    const ScalarField out = transport_log_q(q, region, v, rate, dt);
    if (!out.all_finite()) return "non-finite q";
    return out.min() >= 0.0 ? std::string{} : "negative q";
}

std::string swap_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(10 + k, 10 + k);
    std::uniform_real_distribution<double> coef(0.5, 2.0);
    ModelParams p = unit_params();
    p.beta1 = coef(rng);
    p.beta2 = coef(rng);
    p.g1 = coef(rng);
    p.g2 = coef(rng);
    const DomainPartition part = random_partition(g, rng);
    SolverConfig cfg;
    cfg.method = SolverMethod::Direct;
    cfg.rel_tol = 1e-12;
    const ScalarField q(g);
    const StationarySolution a = solve_stationary(part, p, q, cfg);
    const StationarySolution b = solve_stationary(part.swapped(), p.swapped(), q, cfg);
    const double scale = std::max(a.v1.max_abs(), a.v2.max_abs());
    const double diff = std::max((a.v1 - b.v2).max_abs(), (a.v2 - b.v1).max_abs());
    return compare("velocities under tissue exchange", diff, 0.0, 1e-8 * scale);
}

std::string disjoint_overlap_trial(std::mt19937_64& rng, int k) {
    const GridSpec g = box(6 + k, 7 + k);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    ScalarField a(g), b(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c) (u01(rng) < 0.5 ? a : b).values()[c] = u01(rng);
    return compare("overlap of disjoint supports", segregation_metric(a, b), 0.0, 0.0);
}

std::string config_round_trip_trial(std::mt19937_64&, int k) {
    const auto names = preset_names();
    const RunConfig a = preset_config(names[std::size_t(k) % names.size()]);
    const std::string text = serialize_config(a);
    if (serialize_config(parse_config(text)) != text) return "serialization of " + a.preset + " is not a fixed point";
    return {};
}

}  // namespace

std::vector<InvariantResult> run_invariant_battery(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<InvariantResult> out;
    out.push_back(run_property("gradient is minus the adjoint of divergence", 20, rng, adjoint_trial));
    out.push_back(run_property("curl of a gradient vanishes", 20, rng, curl_gradient_trial));
    out.push_back(run_property("Brinkman energy identity", 5, rng, brinkman_energy_trial));
    out.push_back(run_property("pressure laws are monotone", 200, rng, monotone_pressure_trial));
    out.push_back(run_property("stationary form is coercive", 50, rng, coercivity_trial));
    out.push_back(run_property("level advection stays in [0, 1]", 20, rng, level_advection_trial));
    out.push_back(run_property("repulsion transport keeps q nonnegative", 20, rng, q_transport_trial));
    out.push_back(run_property("stationary solve commutes with tissue exchange", 3, rng, swap_trial));
    out.push_back(run_property("disjoint supports have zero overlap", 20, rng, disjoint_overlap_trial));
    out.push_back(run_property("config serialization is a fixed point", int(preset_names().size()), rng,
                               config_round_trip_trial));
    return out;
}

}  // namespace tissue
