#include "tissue/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "tissue/field_io.hpp"

namespace tissue {

void LimitControl::validate() const {
    std::string errors;
    if (!(cfl_number > 0.0 && cfl_number <= 0.25)) errors += " cfl_number must be in (0, 0.25];";
    if (!(max_dt > 0.0) || !std::isfinite(max_dt)) errors += " max_dt must be > 0;";
    if (!std::isfinite(t_end)) errors += " t_end must be finite;";
    if (!errors.empty()) throw std::invalid_argument("LimitControl:" + errors);
}

namespace {

ScalarField masked(const ScalarField& f, const ScalarField& mask) {
    ScalarField out(f.spec());
    for (std::size_t k = 0; k < out.values().size(); ++k)
        if (mask.values()[k] > 0.5) out.values()[k] = f.values()[k];
    return out;
}

double total(const ScalarField& f) { return std::accumulate(f.values().begin(), f.values().end(), 0.0); }

// Upwind flux divergence of c v, per unit area.
ScalarField upwind_flux_divergence(const ScalarField& c, const VectorField& v) {
    const GridSpec& g = c.spec();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double u = v.u(i, j);
            const double flux = u * (u > 0.0 ? c(i - 1, j) : c(i, j)) / g.hx();
            out(i - 1, j) += flux;
            out(i, j) -= flux;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double w = v.v(i, j);
            const double flux = w * (w > 0.0 ? c(i, j - 1) : c(i, j)) / g.hy();
            out(i, j - 1) += flux;
            out(i, j) -= flux;
        }
    }
    return out;
}

// Where the levels sum to more than 1 the tissue that keeps the cell (larger level,
// ties to tissue 1) keeps its level and the other is reduced to the remaining fraction.
void limit_volume_fractions(ScalarField& level1, ScalarField& level2) {
    for (std::size_t k = 0; k < level1.values().size(); ++k) {
        double& a = level1.values()[k];
        double& b = level2.values()[k];
        if (a + b <= 1.0) continue;
        if (a >= b) {
            b = 1.0 - a;
        } else {
            a = 1.0 - b;
        }
    }
}

}  // namespace

double limit_cfl_dt(const VectorField& v1, const VectorField& v2, double cfl_number) {
    const GridSpec& g = v1.spec();
    const double speed = std::max(v1.max_abs(), v2.max_abs());
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return cfl_number * std::min(g.hx(), g.hy()) / speed;
}

ScalarField advect_level(const ScalarField& level, const VectorField& v, double dt) {
    const ScalarField flux = upwind_flux_divergence(level, v);
    const ScalarField div = divergence(v);
    ScalarField out(level.spec());
    for (std::size_t k = 0; k < out.values().size(); ++k) {
        const double l = level.values()[k];
        out.values()[k] = std::clamp(l - dt * flux.values()[k] + dt * l * div.values()[k], 0.0, 1.0);
    }
    return out;
}

ScalarField transport_log_q(const ScalarField& q, const ScalarField& region, const VectorField& velocity,
                            const ScalarField& rate, double dt) {
    ScalarField s(q.spec());
    for (std::size_t k = 0; k < s.values().size(); ++k)
        if (region.values()[k] > 0.5) s.values()[k] = std::log1p(q.values()[k]);
    const ScalarField flux = upwind_flux_divergence(s, velocity);
    ScalarField out(q.spec());
    for (std::size_t k = 0; k < out.values().size(); ++k) {
        const double r = region.values()[k] > 0.5 ? rate.values()[k] : 0.0;
        const double moved = std::max(0.0, s.values()[k] - dt * flux.values()[k]);
        out.values()[k] = std::expm1(moved * std::exp(dt * r));
    }
    return out;
}

ScalarField transport_q(const LimitState& state, double dt, const ModelParams& params) {
    const GridSpec& g = state.spec();
    const DomainPartition& part = state.part;
    // On Omega_1 the tissue-2 pressure is p + q, and symmetrically on Omega_2.
    ScalarField rate1(g), rate2(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double other = state.p(i, j) + state.q(i, j);
            const Region r = part.region(i, j);
            if (r == Region::One) rate1(i, j) = growth_rate(other, Tissue::Two, params);
            if (r == Region::Two) rate2(i, j) = growth_rate(other, Tissue::One, params);
        }
    }
    const ScalarField on1 = transport_log_q(state.q, part.chi1(), state.v2, rate1, dt);
    const ScalarField on2 = transport_log_q(state.q, part.chi2(), state.v1, rate2, dt);
    ScalarField out(g);
    for (std::size_t k = 0; k < out.values().size(); ++k)
        out.values()[k] = part.chi1().values()[k] > 0.5 ? on1.values()[k] : on2.values()[k];
    return out;
}

ClosureResidual complementarity_closure(const DomainPartition& part, const ModelParams& params,
                                        const StationarySolution& sol) {
    const GridSpec& g = part.spec();
    ClosureResidual r{ScalarField(g), ScalarField(g)};
    const ScalarField d1 = divergence(sol.v1), d2 = divergence(sol.v2);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Region reg = part.region(i, j);
            if (reg == Region::One) {
                r.r1(i, j) = d1(i, j) - growth_rate(sol.p(i, j), Tissue::One, params);
                r.max1 = std::max(r.max1, std::abs(r.r1(i, j)));
            } else if (reg == Region::Two) {
                r.r2(i, j) = d2(i, j) - growth_rate(sol.p(i, j), Tissue::Two, params);
                r.max2 = std::max(r.max2, std::abs(r.r2(i, j)));
            }
        }
    }
    return r;
}

LimitState init_limit_state(const ScalarField& level1, const ScalarField& level2, const ScalarField& q0) {
    if (!(level1.spec() == level2.spec()) || !(level1.spec() == q0.spec()))
        throw std::invalid_argument("init_limit_state: field grids differ");
    const GridSpec& g = level1.spec();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::string at = " at cell (" + std::to_string(i) + ", " + std::to_string(j) + ")";
            if (!std::isfinite(level1(i, j)) || !std::isfinite(level2(i, j)))
                throw std::invalid_argument("init_limit_state: non-finite level" + at);
            if (!(q0(i, j) >= 0.0) || !std::isfinite(q0(i, j)))
                throw std::invalid_argument("init_limit_state: q must be finite and >= 0" + at);
        }
    }
    LimitState s;
    s.level1 = level1;
    s.level2 = level2;
    for (double& x : s.level1.values()) x = std::clamp(x, 0.0, 1.0);
    for (double& x : s.level2.values()) x = std::clamp(x, 0.0, 1.0);
    s.part = partition_from_levels(s.level1, s.level2, false);
    s.q = masked(q0, s.part.chi1() + s.part.chi2());
    s.v1 = VectorField(g);
    s.v2 = VectorField(g);
    s.p = ScalarField(g);
    return s;
}

void solve_limit_velocities(LimitState& state, const ModelParams& params, const SolverConfig& cfg) {
    const StationarySolution sol = state.part.single_species()
                                       ? solve_stationary_single(state.part, params, cfg)
                                       : solve_stationary(state.part, params, state.q, cfg);
    state.closure = complementarity_closure(state.part, params, sol).max();
    state.v1 = sol.v1;
    state.v2 = sol.v2;
    state.p = sol.p;
}

LimitState step_limit(const LimitState& state, const LimitControl& ctrl, const ModelParams& params,
                      const SolverConfig& cfg) {
    ctrl.validate();
    LimitState next = state;
    if (ctrl.model == LimitModel::LVM) next.q = ScalarField(state.spec());
    solve_limit_velocities(next, params, cfg);

    double dt = std::min({ctrl.max_dt, limit_cfl_dt(next.v1, next.v2, ctrl.cfl_number), ctrl.t_end - state.t});
    if (!(dt > 0.0)) throw LimitFailure("step_limit: no positive time step (t = " + std::to_string(state.t) + ")");

    next.level1 = advect_level(state.level1, next.v1, dt);
    next.level2 = advect_level(state.level2, next.v2, dt);
    limit_volume_fractions(next.level1, next.level2);
    const ScalarField q = ctrl.model == LimitModel::LESVM ? transport_q(next, dt, params) : ScalarField(state.spec());

    next.part = partition_from_levels(next.level1, next.level2, false);
    next.q = masked(q, next.part.chi1() + next.part.chi2());
    next.t = state.t + dt;
    next.last_dt = dt;
    next.steps = state.steps + 1;

    const Region regions[] = {Region::One, Region::Two};
    for (Region r : regions) {
        const std::size_t before = state.part.cell_count(r), after = next.part.cell_count(r);
        if (before >= ctrl.min_cells && after < ctrl.min_cells) {
            throw LimitFailure("step_limit: tissue " + std::to_string(int(r)) + " vanished at t = " +
                               std::to_string(next.t) + " (" + std::to_string(after) + " cells)");
        }
    }
    return next;
}

LimitRecord make_limit_record(const LimitState& state) {
    const GridSpec& g = state.spec();
    LimitRecord r;
    r.t = state.t;
    r.area1 = double(state.part.cell_count(Region::One)) * g.cell_area();
    r.area2 = double(state.part.cell_count(Region::Two)) * g.cell_area();
    r.level_area1 = total(state.level1) * g.cell_area();
    r.level_area2 = total(state.level2) * g.cell_area();
    for (std::size_t k = 0; k < state.level1.values().size(); ++k) {
        if (state.part.chi1().values()[k] * state.part.chi2().values()[k] != 0.0) ++r.overlap_cells;
        if (state.level1.values()[k] > 0.5 && state.level2.values()[k] > 0.5) ++r.contested_cells;
    }
    r.q_max = state.q.max_abs();
    r.closure = state.closure;
    return r;
}

void write_limit_records_csv(std::ostream& os, const std::vector<LimitRecord>& records) {
    using io::format_double;
    os << "t,area1,area2,level_area1,level_area2,overlap_cells,contested_cells,q_max,closure\n";
    for (const auto& r : records) {
        os << format_double(r.t) << ',' << format_double(r.area1) << ',' << format_double(r.area2) << ','
           << format_double(r.level_area1) << ',' << format_double(r.level_area2) << ',' << r.overlap_cells << ','
           << r.contested_cells << ',' << format_double(r.q_max) << ',' << format_double(r.closure) << '\n';
    }
}

LimitRunResult run_limit(LimitState state, const LimitControl& ctrl, const ModelParams& params,
                         const SolverConfig& cfg, const std::vector<LimitObserver>& observers, int record_every) {
    ctrl.validate();
    if (record_every < 1) throw std::invalid_argument("run_limit: record_every must be >= 1");
    LimitRunResult result;
    if (ctrl.t_end <= state.t) {
        result.final_state = std::move(state);
        return result;
    }
    auto record = [&](const LimitState& s) {
        result.trajectory.push_back(make_limit_record(s));
        for (const auto& obs : observers) obs(s, result.trajectory.back());
    };
    state.closure = 0.0;
    record(state);
    while (state.t < ctrl.t_end) {
        state = step_limit(state, ctrl, params, cfg);
        if (state.steps % std::size_t(record_every) == 0 || state.t >= ctrl.t_end) record(state);
    }
    result.final_state = std::move(state);
    return result;
}

void write_mask_csv(std::ostream& os, const DomainPartition& part) {
    ScalarField labels = part.chi1() + 2.0 * part.chi2();
    io::write_csv(os, labels);
}

namespace {

using Vertex = std::pair<int, int>;

// Grid vertices at the two ends of an interface face.
std::pair<Vertex, Vertex> face_ends(const InterfaceFace& f) {
    if (f.component == FaceComponent::U) return {{f.i, f.j}, {f.i, f.j + 1}};
    return {{f.i, f.j}, {f.i + 1, f.j}};
}

}  // namespace

void write_interface_polylines(std::ostream& os, const DomainPartition& part) {
    using io::format_double;
    os << "interface,chain,point,x,y\n";
    for (InterfaceClass c : {InterfaceClass::OneTwo, InterfaceClass::OneOutside, InterfaceClass::TwoOutside}) {
        const std::vector<InterfaceFace> faces = part.faces(c);
        std::multimap<Vertex, std::size_t> at;
        for (std::size_t k = 0; k < faces.size(); ++k) {
            const auto [a, b] = face_ends(faces[k]);
            at.emplace(a, k);
            at.emplace(b, k);
        }
        std::vector<bool> used(faces.size(), false);
        auto next_face = [&](const Vertex& v) -> std::optional<std::size_t> {
            const auto range = at.equal_range(v);
            for (auto it = range.first; it != range.second; ++it)
                if (!used[it->second]) return it->second;
            return std::nullopt;
        };
        // Start chains at vertices of odd degree first so open curves are not split.
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < faces.size(); ++k) {
            const auto [a, b] = face_ends(faces[k]);
            if (at.count(a) % 2 == 1 || at.count(b) % 2 == 1) order.push_back(k);
        }
        for (std::size_t k = 0; k < faces.size(); ++k) order.push_back(k);

        auto odd = [&](const Vertex& v) { return at.count(v) % 2 == 1; };
        int chain = 0;
        for (std::size_t start : order) {
            if (used[start]) continue;
            const auto [a, b] = face_ends(faces[start]);
            Vertex from = odd(b) && !odd(a) ? b : a;
            std::optional<std::size_t> cur = start;
            int point = 0;
            while (cur) {
                used[*cur] = true;
                const InterfaceFace& f = faces[*cur];
                os << interface_name(c) << ',' << chain << ',' << point++ << ',' << format_double(f.x) << ','
                   << format_double(f.y) << '\n';
                const auto [e0, e1] = face_ends(f);
                from = e0 == from ? e1 : e0;
                cur = next_face(from);
            }
            ++chain;
        }
    }
}

}  // namespace tissue
