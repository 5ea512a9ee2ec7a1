#include "tissue/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tissue/diagnostics.hpp"
#include "tissue/dynamics.hpp"
#include "tissue/field_io.hpp"
#include "tissue/freeboundary.hpp"
#include "tissue/initial_data.hpp"
#include "tissue/invariants.hpp"
#include "tissue/limit_sweep.hpp"
#include "tissue/solver.hpp"
#include "tissue/stationary.hpp"

namespace tissue {

namespace fs = std::filesystem;
using io::format_double;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(os);
    if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

void write_manifest(const fs::path& dir, const Manifest& rows) {
    write_file(dir / "manifest.csv", [&](std::ostream& os) {
        os << "key,value\n";
        for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
    });
}

void prepare_dir(const fs::path& dir, const RunConfig& cfg) {
    fs::create_directories(dir);
    write_file(dir / "config.txt", [&](std::ostream& os) { os << serialize_config(cfg); });
}

Manifest base_manifest(const RunConfig& cfg) {
    const GridSpec& g = cfg.grid;
    return {
        {"config_hash", config_hash(cfg)},
        {"preset", cfg.preset},
        {"model", run_model_name(cfg.model)},
        {"grid", std::to_string(g.nx) + "x" + std::to_string(g.ny)},
        {"box", format_double(g.x_min) + " " + format_double(g.x_max) + " " + format_double(g.y_min) + " " +
                    format_double(g.y_max)},
    };
}

void add(Manifest& m, const std::string& key, double value) { m.emplace_back(key, format_double(value)); }
void add(Manifest& m, const std::string& key, std::size_t value) { m.emplace_back(key, std::to_string(value)); }

ScalarField load_q(const RunConfig& cfg) {
    switch (cfg.q.kind) {
        case QSource::Kind::Zero: return ScalarField(cfg.grid);
        case QSource::Kind::Uniform: return ScalarField(cfg.grid, cfg.q.value);
        case QSource::Kind::File: break;
    }
    ScalarField q;
    try {
        q = io::read_csv(cfg.q.path);
    } catch (const std::exception& e) {
        throw ConfigError({"q.path: " + std::string(e.what())});
    }
    if (q.nx() != cfg.grid.nx || q.ny() != cfg.grid.ny)
        throw ConfigError({"q.path: field is " + std::to_string(q.nx()) + "x" + std::to_string(q.ny()) +
                           ", the grid is " + std::to_string(cfg.grid.nx) + "x" + std::to_string(cfg.grid.ny)});
    return q;
}

InitialDensities initial_densities(const RunConfig& cfg) { return paint(cfg.grid, cfg.initial_shapes()); }

void write_dynamics_outputs(const fs::path& dir, const RunResult& r) {
    const SimState& s = r.final_state;
    write_file(dir / "diagnostics.csv", [&](std::ostream& os) { write_records_csv(os, r.trajectory); });
    const ScalarField c1 = curl2d(s.v1), c2 = curl2d(s.v2);
    const std::vector<io::NamedScalar> fields{{"n1", &s.n1}, {"n2", &s.n2}, {"p1", &s.p1},
                                              {"p2", &s.p2}, {"curl_v1", &c1}, {"curl_v2", &c2}};
    for (const auto& f : fields) io::write_csv((dir / (f.name + ".csv")).string(), *f.field);
    const CellVelocity v1 = to_cell_centres(s.v1);
    std::vector<io::NamedScalar> vtk = fields;
    vtk.push_back({"v1_x", &v1.x});
    vtk.push_back({"v1_y", &v1.y});
    io::write_vtk((dir / "final.vtk").string(), vtk, &s.v2, "v2");
}

void add_dynamics_summary(Manifest& m, const RunResult& r) {
    const SimState& s = r.final_state;
    add(m, "t", s.t);
    add(m, "steps", s.steps);
    if (!r.trajectory.empty()) {
        const DiagnosticRecord& d = r.trajectory.back();
        add(m, "final_mass1", d.mass1);
        add(m, "final_mass2", d.mass2);
        add(m, "final_overlap", d.overlap);
        add(m, "final_comp_residual", d.comp_residual);
        add(m, "final_binary_distance", d.binary_distance);
        add(m, "final_curl2_max_abs", d.curl2_max_abs);
        add(m, "final_curl1_l2", d.curl1_l2);
        add(m, "final_curl2_l2", d.curl2_l2);
    }
    add(m, "clamp_count", s.clamp_count);
    add(m, "negative_clips", s.negative_clips);
    add(m, "overflow_count", s.overflow_count);
}

Manifest run_dynamics(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    const auto start = Clock::now();
    const InitialDensities d = initial_densities(cfg);
    const DynamicsOptions opts = cfg.dynamics_options();
    const SimState s0 = init_state(d.n1, d.n2, cfg.params, opts);
    const RunResult r = run(s0, cfg.step_control(), cfg.params, opts, {}, cfg.record_every);
    write_dynamics_outputs(dir, r);
    Manifest m = base_manifest(cfg);
    add_dynamics_summary(m, r);
    add(m, "wall_time_s", seconds_since(start));
    log << run_model_name(cfg.model) << ": t = " << format_double(r.final_state.t) << " after "
        << r.final_state.steps << " steps\n";
    return m;
}

Manifest run_free_boundary(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    const auto start = Clock::now();
    LimitControl ctrl;
    ctrl.cfl_number = cfg.cfl;
    ctrl.max_dt = cfg.dt;
    ctrl.t_end = cfg.t_end;
    ctrl.model = cfg.model == RunModel::LVM ? LimitModel::LVM : LimitModel::LESVM;
    const InitialDensities d = initial_densities(cfg);
    const ScalarField q0 = ctrl.model == LimitModel::LVM ? ScalarField(cfg.grid) : load_q(cfg);
    const LimitState s0 = init_limit_state(d.n1, d.n2, q0);
    const LimitRunResult r = run_limit(s0, ctrl, cfg.params, cfg.solver, {}, cfg.record_every);
    const LimitState& s = r.final_state;

    write_file(dir / "limit.csv", [&](std::ostream& os) { write_limit_records_csv(os, r.trajectory); });
    write_file(dir / "mask.csv", [&](std::ostream& os) { write_mask_csv(os, s.part); });
    write_file(dir / "interfaces.csv", [&](std::ostream& os) { write_interface_polylines(os, s.part); });
    const ScalarField c1 = curl2d(s.v1), c2 = curl2d(s.v2);
    const std::vector<io::NamedScalar> fields{{"level1", &s.level1}, {"level2", &s.level2}, {"q", &s.q},
                                              {"pressure", &s.p},    {"curl_v1", &c1},      {"curl_v2", &c2}};
    for (const auto& f : fields) io::write_csv((dir / (f.name + ".csv")).string(), *f.field);
    std::vector<io::NamedScalar> vtk = fields;
    vtk.push_back({"chi1", &s.part.chi1()});
    vtk.push_back({"chi2", &s.part.chi2()});
    io::write_vtk((dir / "final.vtk").string(), vtk, &s.v2, "v2");

    Manifest m = base_manifest(cfg);
    add(m, "t", s.t);
    add(m, "steps", s.steps);
    std::size_t overlap = 0, contested = 0;
    double closure = 0.0;
    for (const LimitRecord& rec : r.trajectory) {
        overlap = std::max(overlap, rec.overlap_cells);
        contested = std::max(contested, rec.contested_cells);
        closure = std::max(closure, rec.closure);
    }
    if (!r.trajectory.empty()) {
        add(m, "initial_area1", r.trajectory.front().area1);
        add(m, "initial_area2", r.trajectory.front().area2);
        add(m, "final_area1", r.trajectory.back().area1);
        add(m, "final_area2", r.trajectory.back().area2);
        add(m, "final_q_max", r.trajectory.back().q_max);
    }
    add(m, "max_overlap_cells", overlap);
    add(m, "max_contested_cells", contested);
    add(m, "max_closure", closure);
    const CurlSignature sig = curl_signature(s.v2);
    add(m, "curl_v2_posterior_left", sig.posterior_left_mean);
    add(m, "curl_v2_posterior_right", sig.posterior_right_mean);
    add(m, "wall_time_s", seconds_since(start));
    log << run_model_name(cfg.model) << ": t = " << format_double(s.t) << " after " << s.steps << " steps\n";
    return m;
}

JumpTable all_jumps(const StationarySolution& sol, const DomainPartition& part, const ModelParams& params) {
    std::vector<JumpQuantity> quantities{JumpQuantity::Pressure, JumpQuantity::VelocityV1,
                                         JumpQuantity::NormalGradientV1};
    if (!sol.single_species) {
        quantities.push_back(JumpQuantity::VelocityV2);
        quantities.push_back(JumpQuantity::NormalGradientV2);
    }
    JumpTable all;
    for (JumpQuantity q : quantities) {
        JumpTable t = measure_jump(sol, part, params, q);
        all.records.insert(all.records.end(), t.records.begin(), t.records.end());
    }
    return all;
}

}  // namespace

RunConfig load_config(const std::string& arg) {
    std::error_code ec;
    if (fs::is_regular_file(arg, ec)) {
        std::ifstream is(arg, std::ios::binary);
        if (!is) throw ConfigError({"cannot read " + arg});
        std::ostringstream text;
        text << is.rdbuf();
        return parse_config(text.str());
    }
    return preset_config(arg);
}

std::pair<int, int> parse_grid_size(const std::string& text) {
    int nx = 0, ny = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%dx%d%c", &nx, &ny, &tail) != 2 || nx < 4 || ny < 4)
        throw ConfigError({"--grid: expected NXxNY with NX, NY >= 4, got '" + text + "'"});
    return {nx, ny};
}

Manifest execute_stationary(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    const auto start = Clock::now();
    prepare_dir(dir, cfg);
    const bool single = cfg.model == RunModel::StationarySingle;
    const InitialDensities d = initial_densities(cfg);
    const DomainPartition part = partition_from_levels(d.n1, d.n2, is_stationary_model(cfg.model));
    if (single && !part.single_species())
        throw ConfigError({"initial: model STATIONARY-1SPECIES needs an empty tissue 2"});
    const ScalarField q = is_limit_model(cfg.model) || is_stationary_model(cfg.model) ? load_q(cfg)
                                                                                      : ScalarField(cfg.grid);

    const CoercivityReport coercivity = coercivity_check(cfg.params);
    if (!single && !coercivity.holds)
        log << "warning: coercivity condition fails: beta1 g2 - 1/4 = " << coercivity.margin1
            << ", beta2 g1 - 1/4 = " << coercivity.margin2 << '\n';
    const StationarySolution sol = single ? solve_stationary_single(part, cfg.params, cfg.solver)
                                          : solve_stationary(part, cfg.params, q, cfg.solver);
    const ClosureResidual closure = complementarity_closure(part, cfg.params, sol);
    const JumpTable jumps = all_jumps(sol, part, cfg.params);
    const std::vector<TransmissionResidual> transmission = verify_transmission(sol, part, cfg.params);

    write_file(dir / "mask.csv", [&](std::ostream& os) { write_mask_csv(os, part); });
    write_file(dir / "interfaces.csv", [&](std::ostream& os) { write_interface_polylines(os, part); });
    write_file(dir / "jumps.csv", [&](std::ostream& os) { write_jump_csv(os, jumps); });
    write_file(dir / "transmission.csv", [&](std::ostream& os) { write_transmission_csv(os, transmission); });
    io::write_csv((dir / "pressure.csv").string(), sol.p);
    io::write_csv((dir / "q.csv").string(), sol.q);
    const CellVelocity v1 = to_cell_centres(sol.v1);
    io::write_vtk((dir / "final.vtk").string(),
                  {{"pressure", &sol.p}, {"q", &sol.q}, {"chi1", &part.chi1()}, {"chi2", &part.chi2()},
                   {"v1_x", &v1.x}, {"v1_y", &v1.y}},
                  &sol.v2, "v2");

    Manifest m = base_manifest(cfg);
    add(m, "cells1", part.cell_count(Region::One));
    add(m, "cells2", part.cell_count(Region::Two));
    add(m, "coercivity_margin1", coercivity.margin1);
    add(m, "coercivity_margin2", coercivity.margin2);
    m.emplace_back("coercivity_holds", coercivity.holds ? "true" : "false");
    add(m, "solve_residual", sol.residual);
    add(m, "closure_max1", closure.max1);
    add(m, "closure_max2", closure.max2);
    for (InterfaceClass c : {InterfaceClass::OneTwo, InterfaceClass::OneOutside, InterfaceClass::TwoOutside}) {
        JumpTable pressure;
        for (const JumpRecord& r : jumps.records)
            if (r.quantity == JumpQuantity::Pressure) pressure.records.push_back(r);
        const JumpSummary s = pressure.summary(c);
        add(m, std::string("faces_") + interface_name(c), s.faces);
        if (s.traced > 0) add(m, std::string("mean_abs_pressure_jump_") + interface_name(c), s.mean_abs_jump);
    }
    add(m, "wall_time_s", seconds_since(start));
    log << run_model_name(cfg.model) << ": stationary solve, closure residual "
        << format_double(closure.max()) << '\n';
    write_manifest(dir, m);
    return m;
}

Manifest execute_run(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    if (is_stationary_model(cfg.model)) return execute_stationary(cfg, dir, log);
    prepare_dir(dir, cfg);
    Manifest m = is_limit_model(cfg.model) ? run_free_boundary(cfg, dir, log) : run_dynamics(cfg, dir, log);
    write_manifest(dir, m);
    return m;
}

bool execute_sweep(const RunConfig& cfg, const fs::path& dir, int jobs, std::ostream& log) {
    if (cfg.sweep.empty()) throw ConfigError({"sweep: the config has no [sweep] block"});
    if (cfg.model != RunModel::ESVM && cfg.model != RunModel::VM)
        throw ConfigError({"sweep: model " + std::string(run_model_name(cfg.model)) + " cannot be swept"});
    if (jobs < 1) throw ConfigError({"--jobs must be >= 1"});
    const auto start = Clock::now();
    prepare_dir(dir, cfg);

    const SweepBlock& b = cfg.sweep;
    auto pick = [](const std::vector<double>& list, std::size_t k, double fallback) {
        return list.empty() ? fallback : list[k];
    };
    auto pick_opt = [](const std::vector<double>& list, std::size_t k) {
        return list.empty() ? std::optional<double>{} : std::optional<double>{list[k]};
    };
    std::vector<SweepTuple> tuples(b.rows());
    for (std::size_t k = 0; k < tuples.size(); ++k) {
        SweepTuple& t = tuples[k];
        t.eps = pick(b.eps, k, cfg.params.eps);
        t.m = pick(b.m, k, cfg.params.m);
        t.alpha = pick(b.alpha, k, cfg.params.alpha);
        t.beta1 = pick_opt(b.beta1, k);
        t.beta2 = pick_opt(b.beta2, k);
        t.g1 = pick_opt(b.g1, k);
        t.g2 = pick_opt(b.g2, k);
    }

    const InitialDensities d = initial_densities(cfg);
    SweepSetup setup;
    setup.params = cfg.params;
    setup.n1 = d.n1;
    setup.n2 = d.n2;
    setup.ctrl = cfg.step_control();
    setup.options = cfg.dynamics_options();

    auto run_dir = [&](std::size_t k) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu", k);
        return dir / name;
    };
    std::mutex log_mutex;
    auto on_run = [&](std::size_t k, const RunResult& r, double wall) {
        RunConfig rc = cfg;
        rc.params = tuples[k].apply(cfg.params);
        rc.sweep = {};
        rc.out_dir = run_dir(k).string();
        prepare_dir(run_dir(k), rc);
        write_dynamics_outputs(run_dir(k), r);
        Manifest m = base_manifest(rc);
        add_dynamics_summary(m, r);
        add(m, "wall_time_s", wall);
        write_manifest(run_dir(k), m);
        const std::lock_guard<std::mutex> lock(log_mutex);
        log << "sweep row " << k << ": t = " << format_double(r.final_state.t) << " after " << r.final_state.steps
            << " steps\n";
    };
    const ConvergenceTable table = limit_sweep(setup, tuples, jobs, on_run, cfg.record_every);
    write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, table); });

    std::size_t failed = 0;
    for (std::size_t k = 0; k < table.rows.size(); ++k)
        if (!table.rows[k].ok) {
            ++failed;
            log << "sweep row " << k << " failed: " << table.rows[k].error << '\n';
        }
    Manifest m = base_manifest(cfg);
    add(m, "rows", table.rows.size());
    add(m, "failed_rows", failed);
    m.emplace_back("overlap_decreasing", table.strictly_decreasing(SweepColumn::Overlap) ? "true" : "false");
    m.emplace_back("comp_residual_decreasing",
                   table.strictly_decreasing(SweepColumn::CompResidual) ? "true" : "false");
    m.emplace_back("binary_distance_decreasing",
                   table.strictly_decreasing(SweepColumn::BinaryDistance) ? "true" : "false");
    add(m, "wall_time_s", seconds_since(start));
    write_manifest(dir, m);
    return failed == 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-tissue growth simulator", "tissue_sim"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir, grid;
    std::uint64_t seed = 1;
    int jobs = 1;
    app.add_option("--out", out_dir, "Output directory (overrides the config)");
    app.add_option("--seed", seed, "Seed of the randomized checks");
    app.add_option("--grid", grid, "Grid override, NXxNY");
    app.add_option("--jobs", jobs, "Concurrent sweep runs")->check(CLI::PositiveNumber);

    std::string config_arg;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a configuration or preset");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run the [sweep] block of a configuration");
    CLI::App* stat_cmd = app.add_subcommand("stationary", "Solve the stationary problem on the initial partition");
    CLI::App* check_cmd = app.add_subcommand("check", "Run the invariant self-test battery");
    for (CLI::App* c : {run_cmd, sweep_cmd, stat_cmd})
        c->add_option("config", config_arg, "Config file or preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (check_cmd->parsed()) {
        const std::vector<InvariantResult> results = run_invariant_battery(seed);
        int failed = 0, trials = 0;
        for (const InvariantResult& r : results) {
            trials += r.trials;
            out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.trials - r.failures << "/" << r.trials
                << ")\n";
            if (!r.passed()) {
                ++failed;
                out << "  " << r.first_failure << '\n';
            }
        }
        out << "invariants: " << int(results.size()) - failed << " passed, " << failed << " failed, " << trials
            << " trials, seed " << seed << '\n';
        return failed == 0 ? kExitOk : kExitInvariantViolation;
    }

    try {
        RunConfig cfg = load_config(config_arg);
        if (!grid.empty()) {
            const auto [nx, ny] = parse_grid_size(grid);
            cfg.grid = cfg.grid.refined(nx, ny);
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const fs::path dir = cfg.out_dir;
        if (sweep_cmd->parsed()) {
            const bool ok = execute_sweep(cfg, dir, jobs, out);
            out << "outputs in " << dir.string() << '\n';
            return ok ? kExitOk : kExitSolverFailure;
        }
        if (stat_cmd->parsed())
            (void)execute_stationary(cfg, dir, out);
        else
            (void)execute_run(cfg, dir, out);
        out << "outputs in " << dir.string() << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        for (const auto& msg : e.errors()) err << "config error: " << msg << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolverFailure;
    }
}

}  // namespace tissue
