#include <doctest.h>

#include <sstream>
#include <string>

#include "tissue/diagnostics.hpp"
#include "tissue/initial_data.hpp"
#include "tissue/limit_sweep.hpp"

using namespace tissue;

namespace {

SweepSetup small_setup(double t_end) {
    SweepSetup s;
    GridSpec g;
    g.nx = g.ny = 16;
    const InitialDensities d = paint(g, initial_preset("fig3"));
    s.n1 = d.n1;
    s.n2 = d.n2;
    s.ctrl.t_end = t_end;
    s.ctrl.dt = 1e-3;
    s.options.solver.method = SolverMethod::Direct;
    return s;
}

bool same_row(const SweepRow& a, const SweepRow& b) {
    return a.ok == b.ok && a.t == b.t && a.steps == b.steps && a.overlap == b.overlap &&
           a.comp_residual == b.comp_residual && a.binary_distance == b.binary_distance && a.error == b.error;
}

}  // namespace

TEST_CASE("a single tuple gives a single row") {
    const ConvergenceTable t = limit_sweep(small_setup(0.002), {{0.1, 30, 1e-3}});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].ok);
    CHECK(t.rows[0].t == doctest::Approx(0.002));
    CHECK(t.rows[0].steps >= 2);
    CHECK(t.strictly_decreasing(SweepColumn::Overlap));
}

TEST_CASE("frozen density: complementarity residual is linear in eps") {
    // t_end = 0 runs no step, so every row sees the initial density.
    const ConvergenceTable t = limit_sweep(small_setup(0.0), {{0.1, 30, 1e-3}, {0.05, 60, 5e-4}, {0.01, 120, 2e-4}});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].comp_residual == doctest::Approx(10.0 * t.rows[2].comp_residual).epsilon(1e-12));
    CHECK(t.rows[1].comp_residual == doctest::Approx(5.0 * t.rows[2].comp_residual).epsilon(1e-12));
    CHECK(t.strictly_decreasing(SweepColumn::CompResidual));
    CHECK_FALSE(t.strictly_decreasing(SweepColumn::Overlap));  // equal, not decreasing
    CHECK(t.rows[0].binary_distance == t.rows[2].binary_distance);
}

TEST_CASE("a failed run annotates its row") {
    const ConvergenceTable t = limit_sweep(small_setup(0.001), {{0.1, 30, 1e-3}, {0.1, 0.5, 1e-3}});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].ok);
    CHECK_FALSE(t.rows[1].ok);
    CHECK(t.rows[1].error.find("m must") != std::string::npos);
    CHECK_FALSE(t.strictly_decreasing(SweepColumn::Overlap));
    std::ostringstream os;
    write_sweep_csv(os, t);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "eps,m,alpha,beta1,beta2,g1,g2,status,t,steps,overlap,comp_residual,binary_distance,error");
    std::getline(is, line);
    CHECK(line.find(",ok,") != std::string::npos);
    std::getline(is, line);
    CHECK(line.find(",failed,") != std::string::npos);
}

TEST_CASE("rows do not depend on the number of jobs") {
    const std::vector<SweepTuple> tuples{{0.1, 30, 1e-3}, {0.05, 60, 5e-4}, {0.02, 120, 2e-4}};
    const ConvergenceTable a = limit_sweep(small_setup(0.002), tuples, 1);
    const ConvergenceTable b = limit_sweep(small_setup(0.002), tuples, 3);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(same_row(a.rows[k], b.rows[k]));
    CHECK_THROWS_AS((void)limit_sweep(small_setup(0.0), tuples, 0), std::invalid_argument);
}

TEST_CASE("viscosity overrides reach the run") {
    SweepTuple a{0.1, 30, 1e-3};
    SweepTuple b = a;
    b.beta2 = 0.3;
    b.g1 = 2.0;
    const ModelParams pa = a.apply(tissular_params()), pb = b.apply(tissular_params());
    CHECK(pa.beta2 == 0.1);
    CHECK(pb.beta2 == 0.3);
    CHECK(pb.g1 == 2.0);
    CHECK(pb.beta1 == pa.beta1);
    std::size_t calls = 0;
    const ConvergenceTable t = limit_sweep(small_setup(0.002), {a, b}, 1, [&](std::size_t, const RunResult& r, double) {
        ++calls;
        CHECK(r.trajectory.size() >= 2);
    }, 1);
    CHECK(calls == 2);
    CHECK(t.rows[1].params.beta2 == 0.3);
    CHECK(t.rows[0].overlap != t.rows[1].overlap);
}
