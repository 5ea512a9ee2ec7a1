#include "tissue/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "tissue/assembly.hpp"
#include "tissue/brinkman.hpp"

namespace tissue {

void StepControl::validate() const {
    std::string errors;
    if (!(dt > 0.0)) errors += "dt must be > 0; ";
    if (!(cfl_number > 0.0 && cfl_number <= 1.0)) errors += "cfl_number must lie in (0, 1]; ";
    if (max_halvings < 0) errors += "max_halvings must be >= 0; ";
    if (!(reaction_limit > 0.0)) errors += "reaction_limit must be > 0; ";
    if (!errors.empty()) throw std::invalid_argument("StepControl: " + errors.substr(0, errors.size() - 2));
}

namespace {

double growth_slope(double p, Tissue which, const ModelParams& params) {
    const double h = 1e-6 * std::max(1.0, std::abs(p));
    return (growth_rate(p + h, which, params) - growth_rate(p - h, which, params)) / (2 * h);
}

// Largest relaxation rate n_i dp_i/dn_i (|G_i'(p_i)| + 1/beta_i) over all cells: the
// reaction part and the pressure-driven compression through the Brinkman law.
double reaction_stiffness(const SimState& s, const ModelParams& params, bool repulsion) {
    double worst = 0.0;
    const auto a = s.n1.values();
    const auto b = s.n2.values();
    const auto p1 = s.p1.values();
    const auto p2 = s.p2.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double pe = congestion_pressure_slope(a[k] + b[k], params.eps);
        double d1 = pe, d2 = pe;
        if (repulsion) {
            const double qs = repulsion_slope(a[k] * b[k], params.m);
            d1 += b[k] * b[k] * qs;
            d2 += a[k] * a[k] * qs;
        }
        const double r1 = std::abs(growth_slope(p1[k], Tissue::One, params)) + 1.0 / params.beta1;
        const double r2 = std::abs(growth_slope(p2[k], Tissue::Two, params)) + 1.0 / params.beta2;
        worst = std::max(worst, std::max(a[k], 0.0) * r1 * d1);
        worst = std::max(worst, std::max(b[k], 0.0) * r2 * d2);
    }
    return worst;
}

double choose_dt(const SimState& s, const StepControl& ctrl, const ModelParams& params, bool repulsion) {
    double dt = ctrl.dt;
    if (ctrl.t_end > s.t) dt = std::min(dt, ctrl.t_end - s.t);
    const GridSpec& g = s.spec();
    const double speed = std::max(s.v1.max_abs(), s.v2.max_abs()) / std::min(g.hx(), g.hy());
    const double stiff = reaction_stiffness(s, params, repulsion);
    int halvings = 0;
    while (dt * speed > ctrl.cfl_number || dt * stiff > ctrl.reaction_limit) {
        if (halvings == ctrl.max_halvings) {
            throw StepFailure("no admissible time step after " + std::to_string(halvings) +
                              " halvings at t = " + std::to_string(s.t) + " (max speed / h = " +
                              std::to_string(speed) + ", relaxation rate = " + std::to_string(stiff) + ")");
        }
        dt *= 0.5;
        ++halvings;
    }
    return dt;
}

// Donor-cell flux of n v on faces; boundary faces carry no flux.
VectorField upwind_flux(const ScalarField& n, const VectorField& v) {
    const GridSpec& g = n.spec();
    VectorField f(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double u = v.u(i, j);
            f.u(i, j) = u * (u > 0 ? n(i - 1, j) : n(i, j));
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double w = v.v(i, j);
            f.v(i, j) = w * (w > 0 ? n(i, j - 1) : n(i, j));
        }
    }
    return f;
}

ScalarField transport_and_react(const ScalarField& n, const VectorField& v, const ScalarField& p, Tissue which,
                                const ModelParams& params, double dt) {
    const ScalarField div = divergence(upwind_flux(n, v));
    ScalarField out(n.spec());
    const auto nv = n.values();
    const auto dv = div.values();
    const auto pv = p.values();
    auto ov = out.values();
    for (std::size_t k = 0; k < nv.size(); ++k) {
        ov[k] = nv[k] - dt * dv[k] + dt * std::max(nv[k], 0.0) * growth_rate(pv[k], which, params);
    }
    return out;
}

ScalarField fourth_order_stage(const ScalarField& frozen, const ScalarField& rhs, double dt, double alpha,
                               double rel_tol) {
    ScalarField weight = frozen;
    for (double& x : weight.values()) x = std::max(x, 0.0);
    const GridSpec& g = frozen.spec();
    SparseMatrix lap = cell_neg_laplacian(g, BoundaryKind::ZeroFlux) * -1.0;
    SparseMatrix a = (weighted_diffusion(weight) * lap) * (dt * alpha);
    SparseMatrix id(a.rows(), a.cols());
    id.setIdentity();
    a += id;
    a.makeCompressed();
    const Vector b = pack(rhs);
    return unpack_scalar(g, solve_general(a, b, rel_tol, b));
}

void clamp_densities(SimState& s) {
    auto a = s.n1.values();
    auto b = s.n2.values();
    const double cap = 1.0 - kClampDelta;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] < 0.0) {
            a[k] = 0.0;
            ++s.negative_clips;
        }
        if (b[k] < 0.0) {
            b[k] = 0.0;
            ++s.negative_clips;
        }
        const double total = a[k] + b[k];
        if (total > cap) {
            const double scale = cap / total;
            a[k] *= scale;
            b[k] *= scale;
            ++s.clamp_count;
        }
    }
}

void check_initial(const ScalarField& n1, const ScalarField& n2) {
    if (!(n1.spec() == n2.spec())) throw std::invalid_argument("init_state: density grids differ");
    const GridSpec& g = n1.spec();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double a = n1(i, j), b = n2(i, j);
            if (!std::isfinite(a) || !std::isfinite(b)) throw InitialDataError("non-finite initial density", i, j);
            if (a < 0.0 || b < 0.0) throw InitialDataError("negative initial density", i, j);
            if (a + b >= 1.0) throw InitialDataError("initial total density must stay below 1", i, j);
        }
    }
}

SimState step_impl(const SimState& state, const StepControl& ctrl, const ModelParams& params,
                   const DynamicsOptions& options) {
    ctrl.validate();
    const double dt = choose_dt(state, ctrl, params, options.repulsion);
    SimState next = state;
    next.n1 = transport_and_react(state.n1, state.v1, state.p1, Tissue::One, params, dt);
    next.n2 = transport_and_react(state.n2, state.v2, state.p2, Tissue::Two, params, dt);
    if (params.alpha > 0.0) {
        next.n1 = fourth_order_stage(state.n1, next.n1, dt, params.alpha, options.solver.rel_tol);
        next.n2 = fourth_order_stage(state.n2, next.n2, dt, params.alpha, options.solver.rel_tol);
    }
    clamp_densities(next);
    next.t = state.t + dt;
    if (ctrl.t_end > state.t && std::abs(next.t - ctrl.t_end) <= 1e-12 * std::max(1.0, ctrl.t_end)) {
        next.t = ctrl.t_end;
    }
    next.last_dt = dt;
    ++next.steps;
    refresh_fields(next, params, options);
    return next;
}

}  // namespace

void refresh_fields(SimState& s, const ModelParams& params, const DynamicsOptions& options) {
    const TotalPressures tp = total_pressures(s.n1, s.n2, params, options.repulsion);
    s.p1 = tp.p1;
    s.p2 = tp.p2;
    s.overflow_count += tp.overflowed;
    s.w1 = laplacian(s.n1, BoundaryKind::ZeroFlux);
    s.w2 = laplacian(s.n2, BoundaryKind::ZeroFlux);
    if (!s.brinkman1 || !s.brinkman1->matches(s.spec(), params.beta1, options.solver)) {
        s.brinkman1 = std::make_shared<const BrinkmanSolver>(s.spec(), params.beta1, options.solver);
    }
    if (!s.brinkman2 || !s.brinkman2->matches(s.spec(), params.beta2, options.solver)) {
        s.brinkman2 = std::make_shared<const BrinkmanSolver>(s.spec(), params.beta2, options.solver);
    }
    if (options.law == VelocityLaw::GradientPotential) {
        s.v1 = s.brinkman1->gradient_form_velocity(s.p1);
        s.v2 = s.brinkman2->gradient_form_velocity(s.p2);
        return;
    }
    const bool warm = s.v1.spec() == s.spec() && s.v1.u_values().size() == u_face_count(s.spec());
    const VectorField g1 = warm ? s.v1 : VectorField(s.spec());
    const VectorField g2 = warm ? s.v2 : VectorField(s.spec());
    s.v1 = s.brinkman1->velocity(s.p1, &g1);
    s.v2 = s.brinkman2->velocity(s.p2, &g2);
}

SimState init_state(const ScalarField& n1, const ScalarField& n2, const ModelParams& params,
                    const DynamicsOptions& options) {
    params.validate();
    check_initial(n1, n2);
    SimState s;
    s.n1 = n1;
    s.n2 = n2;
    refresh_fields(s, params, options);
    return s;
}

SimState step_esvm(const SimState& state, const StepControl& ctrl, const ModelParams& params,
                   const DynamicsOptions& options) {
    return step_impl(state, ctrl, params, options);
}

SimState step_vm(const SimState& state, const StepControl& ctrl, const ModelParams& params,
                 const DynamicsOptions& options) {
    ModelParams vm = params;
    vm.alpha = 0.0;
    DynamicsOptions opts = options;
    opts.repulsion = false;
    return step_impl(state, ctrl, vm, opts);
}

DiagnosticRecord make_record(const SimState& s, const ModelParams& params) {
    DiagnosticRecord r;
    r.t = s.t;
    r.mass1 = s.n1.integral();
    r.mass2 = s.n2.integral();
    r.overlap = segregation_metric(s.n1, s.n2);
    r.comp_residual = complementarity_residual(s.n1 + s.n2, params.eps);
    // Curl statistics over the tissue-2 region (density above 0.1).
    const ScalarField c = curl2d(s.v2);
    double mx = 0.0, mn = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < c.values().size(); ++k) {
        if (s.n2.values()[k] <= 0.1) continue;
        const double x = c.values()[k];
        mx = any ? std::max(mx, std::abs(x)) : std::abs(x);
        mn = any ? std::min(mn, x) : x;
        any = true;
    }
    r.curl2_max_abs = mx;
    r.curl2_min = mn;
    auto masked_l2 = [](const ScalarField& curl, const ScalarField& n) {
        double sum = 0.0;
        for (std::size_t k = 0; k < curl.values().size(); ++k)
            if (n.values()[k] > 0.1) sum += curl.values()[k] * curl.values()[k];
        return std::sqrt(sum * n.spec().cell_area());
    };
    r.curl1_l2 = masked_l2(curl2d(s.v1), s.n1);
    r.curl2_l2 = masked_l2(c, s.n2);
    r.binary_distance = binary_distance(s.n1 + s.n2);
    r.clamp_count = s.clamp_count;
    return r;
}

RunResult run(SimState state, const StepControl& ctrl, const ModelParams& params, const DynamicsOptions& options,
              const std::vector<Observer>& observers, int record_every) {
    RunResult out;
    if (!(ctrl.t_end > state.t)) {
        out.final_state = std::move(state);
        return out;
    }
    record_every = std::max(record_every, 1);
    auto record = [&](const SimState& s) {
        out.trajectory.push_back(make_record(s, params));
        for (const auto& obs : observers) obs(s, out.trajectory.back());
    };
    record(state);
    std::size_t since = 0;
    while (state.t < ctrl.t_end) {
        state = ctrl.model == Model::VM ? step_vm(state, ctrl, params, options) : step_esvm(state, ctrl, params, options);
        if (++since == std::size_t(record_every) || state.t >= ctrl.t_end) {
            record(state);
            since = 0;
        }
    }
    out.final_state = std::move(state);
    return out;
}

}  // namespace tissue
