#include "tissue/limit_sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "tissue/diagnostics.hpp"
#include "tissue/field_io.hpp"

namespace tissue {

namespace {

double column(const SweepRow& r, SweepColumn c) {
    switch (c) {
        case SweepColumn::Overlap: return r.overlap;
        case SweepColumn::CompResidual: return r.comp_residual;
        case SweepColumn::BinaryDistance: return r.binary_distance;
    }
    return 0.0;
}

SweepRow run_tuple(const SweepSetup& setup, const SweepTuple& tuple, std::size_t index,
                   const SweepRunCallback& on_run, int record_every) {
    SweepRow row;
    row.tuple = tuple;
    row.params = tuple.apply(setup.params);
    try {
        const ModelParams& p = row.params;
        p.validate();
        const auto start = std::chrono::steady_clock::now();
        const SimState s0 = init_state(setup.n1, setup.n2, p, setup.options);
        const RunResult r = run(s0, setup.ctrl, p, setup.options, {}, record_every);
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (on_run) on_run(index, r, row.wall_seconds);
        const SimState& s = r.final_state;
        const ScalarField n = s.n1 + s.n2;
        row.t = s.t;
        row.steps = s.steps;
        row.overlap = segregation_metric(s.n1, s.n2);
        row.comp_residual = complementarity_residual(n, p.eps);
        row.binary_distance = binary_distance(n);
        row.ok = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

ModelParams SweepTuple::apply(ModelParams p) const {
    p.eps = eps;
    p.m = m;
    p.alpha = alpha;
    if (beta1) p.beta1 = *beta1;
    if (beta2) p.beta2 = *beta2;
    if (g1) p.g1 = *g1;
    if (g2) p.g2 = *g2;
    return p;
}

bool ConvergenceTable::strictly_decreasing(SweepColumn c) const {
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!rows[k].ok) return false;
        if (k > 0 && !(column(rows[k], c) < column(rows[k - 1], c))) return false;
    }
    return true;
}

ConvergenceTable limit_sweep(const SweepSetup& setup, const std::vector<SweepTuple>& tuples, int jobs,
                             const SweepRunCallback& on_run, int record_every) {
    if (jobs < 1) throw std::invalid_argument("limit_sweep: jobs must be >= 1");
    ConvergenceTable table;
    table.rows.resize(tuples.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tuples.size(); k = next++) table.rows[k] = run_tuple(setup, tuples[k], k, on_run, record_every);
    };
    const std::size_t threads = std::min<std::size_t>(std::size_t(jobs), tuples.size());
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return table;
}

void write_sweep_csv(std::ostream& os, const ConvergenceTable& table) {
    using io::format_double;
    os << "eps,m,alpha,beta1,beta2,g1,g2,status,t,steps,overlap,comp_residual,binary_distance,error\n";
    for (const auto& r : table.rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        const ModelParams& p = r.params;
        os << format_double(p.eps) << ',' << format_double(p.m) << ',' << format_double(p.alpha) << ','
           << format_double(p.beta1) << ',' << format_double(p.beta2) << ',' << format_double(p.g1) << ','
           << format_double(p.g2) << ',' << (r.ok ? "ok" : "failed") << ',' << format_double(r.t) << ',' << r.steps << ','
           << format_double(r.overlap) << ',' << format_double(r.comp_residual) << ','
           << format_double(r.binary_distance) << ',' << err << '\n';
    }
}

}  // namespace tissue
