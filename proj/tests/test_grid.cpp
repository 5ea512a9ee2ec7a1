#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tissue/field_io.hpp"
#include "tissue/grid.hpp"

using namespace tissue;

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec square(int n) {
    GridSpec g;
    g.nx = n;
    g.ny = n;
    return g;
}

template <class F>
VectorField sample_faces(const GridSpec& g, F fx, F fy) {
    VectorField v(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) v.u(i, j) = fx(g.xf(i), g.yc(j));
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v.v(i, j) = fy(g.xc(i), g.yf(j));
    return v;
}

template <class F>
ScalarField sample_cells(const GridSpec& g, F f) {
    ScalarField s(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s(i, j) = f(g.xc(i), g.yc(j));
    return s;
}

ScalarField random_scalar(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ScalarField s(g);
    for (double& x : s.values()) x = d(rng);
    return s;
}

VectorField random_interior_vector(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    VectorField v(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) v.u(i, j) = d(rng);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v.v(i, j) = d(rng);
    return v;
}

}  // namespace

TEST_CASE("grid spec validation") {
    GridSpec g = square(3);
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = square(8);
    g.x_max = g.x_min;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = square(8);
    CHECK(g.hx() == doctest::Approx(0.25));
    CHECK(g.xc(0) == doctest::Approx(-0.875));
}

TEST_CASE("divergence of constant and linear fields") {
    const GridSpec g = square(16);
    auto c1 = [](double, double) { return 0.7; };
    auto c2 = [](double, double) { return -1.3; };
    ScalarField d = divergence(sample_faces(g, +c1, +c2));
    for (double x : d.values()) CHECK(std::abs(x) < 1e-13);

    auto lin = [](double x, double) { return x; };
    auto zero = [](double, double) { return 0.0; };
    d = divergence(sample_faces(g, +lin, +zero));
    for (double x : d.values()) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("divergence converges at second order for a smooth field") {
    auto err = [](int n) {
        const GridSpec g = square(n);
        auto fx = [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); };
        auto zero = [](double, double) { return 0.0; };
        const ScalarField d = divergence(sample_faces(g, +fx, +zero));
        double e = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double exact = kPi * std::cos(kPi * g.xc(i)) * std::sin(kPi * g.yc(j));
                e = std::max(e, std::abs(d(i, j) - exact));
            }
        return e;
    };
    const double ratio = err(32) / err(64);
    CHECK(ratio > 3.8);
    CHECK(ratio < 4.2);
}

TEST_CASE("gradient of constant and linear fields") {
    const GridSpec g = square(12);
    VectorField gr = gradient(ScalarField(g, 3.0));
    CHECK(gr.max_abs() == 0.0);

    gr = gradient(sample_cells(g, [](double x, double) { return x; }));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) CHECK(gr.u(i, j) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gr.boundary_is_zero());
}

TEST_CASE("gradient is minus the adjoint of divergence") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        GridSpec g = square(8 + trial);
        g.ny = 6 + 2 * trial;
        const ScalarField s = random_scalar(g, rng);
        const VectorField v = random_interior_vector(g, rng);
        const double lhs = inner(gradient(s), v);
        const double rhs = inner(s, divergence(v));
        // Oracle: direct double summation over faces, independent of inner().
        double direct = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) direct += (s(i, j) - s(i - 1, j)) / g.hx() * v.u(i, j);
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) direct += (s(i, j) - s(i, j - 1)) / g.hy() * v.v(i, j);
        direct *= g.cell_area();
        const double scale = l2_norm(s) * (l2_norm(v) + l2_norm(divergence(v)));
        CHECK(std::abs(lhs - direct) <= 1e-12 * scale);
        CHECK(std::abs(lhs + rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("laplacian stencils") {
    const GridSpec g = square(32);
    ScalarField l = laplacian(ScalarField(g, 2.5), BoundaryKind::ZeroFlux);
    for (double x : l.values()) CHECK(x == 0.0);

    const ScalarField q = sample_cells(g, [](double x, double y) { return x * x + y * y; });
    l = laplacian(q, BoundaryKind::ZeroFlux);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) CHECK(l(i, j) == doctest::Approx(4.0).epsilon(1e-10));

    // Zero-flux rows sum to zero: the Laplacian of every unit vector sums to zero.
    std::mt19937_64 rng(3);
    const ScalarField r = random_scalar(g, rng);
    double total = 0.0;
    for (double x : laplacian(r, BoundaryKind::ZeroFlux).values()) total += x;
    CHECK(std::abs(total) < 1e-9);
}

TEST_CASE("divergence of gradient is the zero-value laplacian on interior cells") {
    std::mt19937_64 rng(11);
    const GridSpec g = square(20);
    const ScalarField s = random_scalar(g, rng);
    const ScalarField a = divergence(gradient(s));
    const ScalarField b = laplacian(s, BoundaryKind::ZeroValue);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) CHECK(a(i, j) == doctest::Approx(b(i, j)).epsilon(1e-13));
}

TEST_CASE("curl of rigid rotation, constants and gradients") {
    const GridSpec g = square(16);
    auto rx = [](double, double y) { return -y; };
    auto ry = [](double x, double) { return x; };
    ScalarField c = curl2d(sample_faces(g, +rx, +ry));
    for (double x : c.values()) CHECK(x == doctest::Approx(2.0).epsilon(1e-12));

    auto k1 = [](double, double) { return 1.5; };
    auto k2 = [](double, double) { return -0.5; };
    c = curl2d(sample_faces(g, +k1, +k2));
    for (double x : c.values()) CHECK(x == 0.0);

    auto curl_of_grad = [](int n) {
        const GridSpec gg = square(n);
        // Analytic gradient of sin(pi x) sin(2y) / pi, sampled on faces.
        auto gx = [](double x, double y) { return std::cos(kPi * x) * std::sin(2 * y); };
        auto gy = [](double x, double y) { return std::sin(kPi * x) * std::cos(2 * y) * 2.0 / kPi; };
        return curl2d(sample_faces(gg, +gx, +gy));
    };
    auto max_abs = [](const ScalarField& f) { return std::max(f.max(), -f.min()); };
    const double e1 = max_abs(curl_of_grad(32));
    const double e2 = max_abs(curl_of_grad(64));
    CHECK(e1 / e2 > 3.5);
}

TEST_CASE("discrete gradient has zero curl at interior nodes") {
    std::mt19937_64 rng(5);
    const GridSpec g = square(16);
    const ScalarField s = sample_cells(g, [](double x, double y) { return std::exp(x) * std::cos(3 * y); });
    const ScalarField c = curl2d(gradient(s));
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) CHECK(std::abs(c(i, j)) < 1e-10);
}

TEST_CASE("operators are linear") {
    std::mt19937_64 rng(13);
    const GridSpec g = square(10);
    const ScalarField f = random_scalar(g, rng), h = random_scalar(g, rng);
    const VectorField v = random_interior_vector(g, rng), w = random_interior_vector(g, rng);
    const double a = 0.37, b = -2.1;
    auto close = [](std::span<const double> x, std::span<const double> y) {
        for (std::size_t k = 0; k < x.size(); ++k)
            if (std::abs(x[k] - y[k]) > 1e-11 * (1 + std::abs(x[k]))) return false;
        return true;
    };
    CHECK(close(divergence(a * v + b * w).values(), (a * divergence(v) + b * divergence(w)).values()));
    CHECK(close(laplacian(a * f + b * h, BoundaryKind::ZeroFlux).values(),
                (a * laplacian(f, BoundaryKind::ZeroFlux) + b * laplacian(h, BoundaryKind::ZeroFlux)).values()));
    CHECK(close(curl2d(a * v + b * w).values(), (a * curl2d(v) + b * curl2d(w)).values()));
    const VectorField lhs = gradient(a * f + b * h), rhs = a * gradient(f) + b * gradient(h);
    CHECK(close(lhs.u_values(), rhs.u_values()));
    CHECK(close(lhs.v_values(), rhs.v_values()));
}

TEST_CASE("field csv round trip is bit exact") {
    std::mt19937_64 rng(17);
    GridSpec g = square(9);
    g.ny = 5;
    ScalarField s = random_scalar(g, rng);
    s(0, 0) = 1e-300;
    s(1, 0) = -0.1;
    std::stringstream ss;
    io::write_csv(ss, s);
    const ScalarField r = io::read_csv(ss);
    CHECK(r.nx() == 9);
    CHECK(r.ny() == 5);
    for (std::size_t k = 0; k < s.values().size(); ++k) CHECK(r.values()[k] == s.values()[k]);

    std::stringstream bad("# nx ny\n# 3 x\n");
    CHECK_THROWS(io::read_csv(bad));
}

TEST_CASE("vtk writer emits one value per cell") {
    const GridSpec g = square(4);
    const ScalarField s(g, 1.0);
    std::stringstream ss;
    io::write_vtk(ss, {{"n1", &s}});
    const std::string text = ss.str();
    CHECK(text.find("DIMENSIONS 4 4 1") != std::string::npos);
    CHECK(text.find("POINT_DATA 16") != std::string::npos);
}
