#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "tissue/constitutive.hpp"

using namespace tissue;

namespace {

GridSpec tiny() {
    GridSpec g;
    g.nx = 4;
    g.ny = 4;
    return g;
}

// Independent evaluation of q_m through long double pow, valid away from overflow.
double repulsion_oracle(double r, double m) {
    const long double lm = m;
    return double(lm / (lm - 1) * (std::pow(1.0L + r, lm - 1) - 1.0L));
}

}  // namespace

TEST_CASE("congestion pressure values") {
    CHECK(congestion_pressure(0.0, 0.1) == 0.0);
    CHECK(congestion_pressure(0.5, 0.1) == doctest::Approx(0.1));
    CHECK(congestion_pressure(0.9, 0.1) == doctest::Approx(0.9));
    CHECK(std::isfinite(congestion_pressure(1.0, 0.1)));
    CHECK(congestion_pressure(-0.2, 0.1) == 0.0);
}

TEST_CASE("congestion pressure field counts saturated cells") {
    ScalarField n(tiny(), 0.5);
    n(1, 1) = 1.0;
    n(2, 3) = 1.2;
    const PressureField p = pressure_congestion(n, 0.1);
    CHECK(p.saturated == 2);
    CHECK(p.p.all_finite());
    CHECK(p.p(1, 1) == doctest::Approx(0.1 * (1 - kClampDelta) / kClampDelta));
}

TEST_CASE("repulsion pressure values") {
    CHECK(repulsion_pressure(0.0, 30).value == 0.0);
    CHECK(repulsion_pressure(0.0, 1e6).value == 0.0);
    for (double r : {0.01, 0.3, 1.7}) CHECK(repulsion_pressure(r, 2.0).value == doctest::Approx(2 * r).epsilon(1e-14));
    for (double r : {0.01, 0.1, 0.25})
        for (double m : {3.0, 30.0, 120.0})
            CHECK(repulsion_pressure(r, m).value == doctest::Approx(repulsion_oracle(r, m)).epsilon(1e-12));
}

TEST_CASE("repulsion pressure saturates instead of overflowing") {
    const RepulsionValue q = repulsion_pressure(0.5, 1e6);
    CHECK(q.overflow);
    CHECK(q.value == std::numeric_limits<double>::max());
    ScalarField r(tiny(), 0.0);
    r(0, 0) = 0.9;
    const PressureField f = pressure_repulsion(r, 1e5);
    CHECK(f.overflowed == 1);
    CHECK(f.p.all_finite());
}

TEST_CASE("ghost limit of the repulsion pressure") {
    // q_m(c/m) -> e^c - 1. The error bound 2 c^2 e^c / m is checked at three c values.
    for (double c : {0.5, 1.0, 2.0}) {
        double previous = std::numeric_limits<double>::infinity();
        for (double m : {1e2, 1e3, 1e4, 1e5, 1e6}) {
            const double err = std::abs(repulsion_pressure(c / m, m).value - std::expm1(c));
            CHECK(err < previous);
            CHECK(err < 2 * c * c * std::exp(c) / m);
            previous = err;
        }
    }
    CHECK(std::abs(repulsion_pressure(1e-6, 1e6).value - (std::exp(1.0) - 1.0)) < 1e-5);
}

TEST_CASE("total pressures") {
    ModelParams params;
    params.eps = 0.1;
    params.m = 2.0;
    ScalarField n1(tiny(), 0.3), n2(tiny(), 0.3);
    TotalPressures tp = total_pressures(n1, n2, params);
    // p_eps(0.6) = 0.15, q_2(0.09) = 0.18, p = 0.15 + 0.3 * 0.18.
    CHECK(tp.p1(0, 0) == doctest::Approx(0.204).epsilon(1e-13));
    CHECK(tp.p2(3, 3) == doctest::Approx(0.204).epsilon(1e-13));

    n1 = ScalarField(tiny(), 0.5);
    n2 = ScalarField(tiny(), 0.0);
    tp = total_pressures(n1, n2, params);
    CHECK(tp.p1(1, 2) == congestion_pressure(0.5, 0.1));
    CHECK(tp.p2(1, 2) == congestion_pressure(0.5, 0.1));

    tp = total_pressures(ScalarField(tiny()), ScalarField(tiny()), params);
    CHECK(tp.p1.max() == 0.0);
    CHECK(tp.p2.max() == 0.0);
}

TEST_CASE("segregated densities collapse both pressures onto the congestion law") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> d(0.0, 0.95);
    const ModelParams params = tissular_params();
    ScalarField n1(tiny()), n2(tiny());
    for (std::size_t k = 0; k < n1.values().size(); ++k) {
        if (k % 2) {
            n1.values()[k] = d(rng);
        } else {
            n2.values()[k] = d(rng);
        }
    }
    const TotalPressures tp = total_pressures(n1, n2, params);
    for (std::size_t k = 0; k < n1.values().size(); ++k) {
        const double pe = congestion_pressure(n1.values()[k] + n2.values()[k], params.eps);
        CHECK(tp.p1.values()[k] == pe);
        CHECK(tp.p2.values()[k] == pe);
    }
}

TEST_CASE("pressure laws are monotone in each density") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(0.0, 0.49);
    std::uniform_real_distribution<double> bump(0.0, 0.01);
    ModelParams params = tissular_params();
    for (int trial = 0; trial < 500; ++trial) {
        const double a = d(rng), b = d(rng), da = bump(rng);
        ScalarField n1(tiny(), a), n2(tiny(), b), n1b(tiny(), a + da);
        const TotalPressures lo = total_pressures(n1, n2, params);
        const TotalPressures hi = total_pressures(n1b, n2, params);
        CHECK(hi.p1(0, 0) >= lo.p1(0, 0));
        CHECK(hi.p2(0, 0) >= lo.p2(0, 0));
        CHECK(congestion_pressure(a + da, 0.1) >= congestion_pressure(a, 0.1));
        CHECK(repulsion_pressure(a + da, params.m).value >= repulsion_pressure(a, params.m).value);
    }
}

TEST_CASE("derivatives match finite differences") {
    for (double n : {0.1, 0.5, 0.9}) {
        const double h = 1e-6;
        const double fd = (congestion_pressure(n + h, 0.1) - congestion_pressure(n - h, 0.1)) / (2 * h);
        CHECK(congestion_pressure_slope(n, 0.1) == doctest::Approx(fd).epsilon(1e-6));
    }
    for (double r : {0.0, 0.05, 0.2}) {
        const double h = 1e-6;
        const double lo = repulsion_pressure(std::max(r - h, 0.0), 30).value;
        const double fd = (repulsion_pressure(r + h, 30).value - lo) / (r + h - std::max(r - h, 0.0));
        CHECK(repulsion_slope(r, 30) == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("growth laws") {
    const ModelParams params = tissular_params();
    CHECK(growth_rate(params.p1_star, Tissue::One, params) == 0.0);
    CHECK(growth_rate(0.0, Tissue::One, params) == 5.0);
    CHECK(growth_rate(0.0, Tissue::Two, params) == 10.0);
    const ScalarField g = growth(ScalarField(tiny(), params.p1_star), Tissue::One, params);
    CHECK(g.max() == 0.0);
    CHECK(g.min() == 0.0);
    CHECK(growth_rate(1.0, Tissue::Two, params) > growth_rate(2.0, Tissue::Two, params));

    ModelParams custom = params;
    custom.growth1 = [](double p) { return 1.0 / (1.0 + p); };
    CHECK(growth_rate(1.0, Tissue::One, custom) == 0.5);
}

TEST_CASE("coercivity check") {
    ModelParams p;
    p.beta1 = p.beta2 = 1.0;
    p.g1 = p.g2 = 1.0;
    CoercivityReport r = coercivity_check(p);
    CHECK(r.holds);
    CHECK(r.margin1 == doctest::Approx(0.75));
    CHECK(r.margin2 == doctest::Approx(0.75));
    CHECK(r.lambda == doctest::Approx(0.75));

    r = coercivity_check(tissular_params());
    CHECK_FALSE(r.holds);
    CHECK(r.margin1 == doctest::Approx(0.25));
    CHECK(r.margin2 == doctest::Approx(-0.15));

    p.beta1 = 0.25;
    CHECK_FALSE(coercivity_check(p).holds);
}

TEST_CASE("parameter validation lists every violation") {
    ModelParams p;
    p.m = 1.0;
    p.eps = 0.0;
    try {
        p.validate();
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("m must") != std::string::npos);
        CHECK(what.find("eps must") != std::string::npos);
    }
    CHECK_NOTHROW(tissular_params().validate());
}
