#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "tissue/brinkman.hpp"

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
ScalarField sample_cells(const GridSpec& g, F f) {
    ScalarField s(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s(i, j) = f(g.xc(i), g.yc(j));
    return s;
}

double mms_error(int n, double beta, SolverMethod method) {
    const GridSpec g = square(n);
    auto vstar = [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); };
    const double factor = 2.0 * beta * kPi * kPi + 1.0;
    VectorField f(g), exact(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            exact.u(i, j) = vstar(g.xf(i), g.yc(j));
            f.u(i, j) = factor * exact.u(i, j);
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            exact.v(i, j) = vstar(g.xc(i), g.yf(j));
            f.v(i, j) = factor * exact.v(i, j);
        }
    SolverConfig cfg;
    cfg.method = method;
    const VectorField v = solve_brinkman_with_rhs(f, beta, cfg);
    return l2_norm(v - exact);
}

ScalarField smooth_pressure(const GridSpec& g) {
    return sample_cells(g, [](double x, double y) { return std::exp(-4 * ((x - 0.2) * (x - 0.2) + y * y)) + 0.3 * x * y; });
}

double residual_ratio(const ScalarField& p, double beta, const VectorField& v) {
    const HelmholtzOperator op(p.spec(), beta);
    const VectorField gp = gradient(p);
    return l2_norm(op.apply(v) + gp) / l2_norm(gp);
}

}  // namespace

TEST_CASE("constant pressure gives exactly zero velocity") {
    const VectorField v = solve_brinkman(ScalarField(square(16), 4.2), 0.5, SolverConfig{});
    CHECK(v.max_abs() == 0.0);
    SolverConfig direct;
    direct.method = SolverMethod::Direct;
    const ScalarField k = solve_screened_potential(ScalarField(square(16), 4.2), 0.5, direct);
    CHECK(k.min() == doctest::Approx(4.2).epsilon(1e-13));
    CHECK(k.max() == doctest::Approx(4.2).epsilon(1e-13));
    const VectorField w = solve_brinkman_gradient_form(ScalarField(square(16), 4.2), 0.5, direct);
    CHECK(w.max_abs() < 1e-11);
}

TEST_CASE("manufactured solution converges at second order") {
    for (SolverMethod method : {SolverMethod::ConjugateGradient, SolverMethod::Direct}) {
        const double e32 = mms_error(32, 0.5, method);
        const double e64 = mms_error(64, 0.5, method);
        CHECK(e32 / e64 > 3.5);
        CHECK(e32 / e64 < 4.5);
    }
}

TEST_CASE("residual and boundary contract") {
    const GridSpec g = square(24);
    const ScalarField p = smooth_pressure(g);
    SolverConfig cfg;
    for (SolverMethod method : {SolverMethod::ConjugateGradient, SolverMethod::Direct}) {
        cfg.method = method;
        const VectorField v = solve_brinkman(p, 0.5, cfg);
        CHECK(v.boundary_is_zero());
        CHECK(residual_ratio(p, 0.5, v) <= 1.0001e-10);
    }
}

TEST_CASE("iteration cap produces an explicit failure") {
    SolverConfig cfg;
    cfg.max_iter = 2;
    CHECK_THROWS_AS((void)solve_brinkman(smooth_pressure(square(32)), 0.5, cfg), SolverFailure);
}

TEST_CASE("operator is symmetric, diagonally dominant and positive") {
    const HelmholtzOperator op(square(12), 0.7);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> d;
    for (FaceComponent c : {FaceComponent::U, FaceComponent::V}) {
        const SparseMatrix& a = op.matrix(c);
        const Eigen::MatrixXd dense = Eigen::MatrixXd(a);
        CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
        for (Eigen::Index r = 0; r < dense.rows(); ++r) {
            const double off = dense.row(r).cwiseAbs().sum() - std::abs(dense(r, r));
            CHECK(dense(r, r) > off);
        }
        for (int trial = 0; trial < 50; ++trial) {
            Vector x(dense.rows());
            for (auto& e : x) e = d(rng);
            CHECK(x.dot(dense * x) > 0.0);
        }
    }
}

TEST_CASE("viscous damping is bounded by the smallest eigenvalue") {
    // Oracle: ||v|| <= ||grad p|| / (1 + beta lambda_min) with lambda_min of the
    // Dirichlet -Laplacian computed by a dense eigen-decomposition.
    const GridSpec g = square(16);
    const ScalarField p = smooth_pressure(g);
    double lambda_min = std::numeric_limits<double>::infinity();
    for (FaceComponent c : {FaceComponent::U, FaceComponent::V}) {
        Eigen::MatrixXd k = Eigen::MatrixXd(face_neg_laplacian(g, c));
        // Drop the empty boundary rows before taking the spectrum.
        std::vector<int> keep;
        for (int r = 0; r < k.rows(); ++r)
            if (k(r, r) != 0.0) keep.push_back(r);
        Eigen::MatrixXd sub(keep.size(), keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a)
            for (std::size_t b = 0; b < keep.size(); ++b) sub(a, b) = k(keep[a], keep[b]);
        lambda_min = std::min(lambda_min, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sub).eigenvalues().minCoeff());
    }
    const double gp = l2_norm(gradient(p));
    double previous = std::numeric_limits<double>::infinity();
    for (double beta : {1.0, 10.0, 100.0, 1000.0}) {
        const double nv = l2_norm(solve_brinkman(p, beta, SolverConfig{}));
        CHECK(nv <= gp / (1.0 + beta * lambda_min) * (1 + 1e-8));
        CHECK(nv < previous);
        previous = nv;
    }
    const double v100 = l2_norm(solve_brinkman(p, 100.0, SolverConfig{}));
    const double v1000 = l2_norm(solve_brinkman(p, 1000.0, SolverConfig{}));
    CHECK(v100 / v1000 == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("solution is linear in the pressure") {
    const GridSpec g = square(20);
    const ScalarField p1 = smooth_pressure(g);
    const ScalarField p2 = sample_cells(g, [](double x, double y) { return std::cos(2 * x) * y * y; });
    const double a = 1.7, b = -0.4;
    const SolverConfig cfg;
    const VectorField lhs = solve_brinkman(a * p1 + b * p2, 0.3, cfg);
    const VectorField rhs = a * solve_brinkman(p1, 0.3, cfg) + b * solve_brinkman(p2, 0.3, cfg);
    CHECK(l2_norm(lhs - rhs) <= 1e-8 * l2_norm(lhs));
}

TEST_CASE("energy identity") {
    const GridSpec g = square(32);
    const ScalarField p = smooth_pressure(g);
    const double beta = 0.5;
    const VectorField v = solve_brinkman(p, beta, SolverConfig{});
    const Vector xu = pack(v).head(Eigen::Index(u_face_count(g)));
    const Vector xv = pack(v).tail(Eigen::Index(v_face_count(g)));
    const double dirichlet = (xu.dot(face_neg_laplacian(g, FaceComponent::U) * xu) +
                              xv.dot(face_neg_laplacian(g, FaceComponent::V) * xv)) *
                             g.cell_area();
    const double lhs = beta * dirichlet + inner(v, v);
    const double rhs = -inner(gradient(p), v);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("gradient form recovers a manufactured potential") {
    auto err = [](int n) {
        const GridSpec g = square(n);
        const double beta = 0.5;
        auto kstar = [](double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); };
        const ScalarField p = sample_cells(g, [&](double x, double y) { return (2 * beta * kPi * kPi + 1) * kstar(x, y); });
        const VectorField v = solve_brinkman_gradient_form(p, beta, SolverConfig{});
        VectorField exact(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i)
                exact.u(i, j) = kPi * std::sin(kPi * g.xf(i)) * std::cos(kPi * g.yc(j));
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                exact.v(i, j) = kPi * std::cos(kPi * g.xc(i)) * std::sin(kPi * g.yf(j));
        return l2_norm(v - exact);
    };
    const double ratio = err(32) / err(64);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("gradient form is curl free while the wall law is not") {
    const GridSpec g = square(32);
    const ScalarField p = sample_cells(g, [](double x, double y) { return (y < 0 ? 5.0 : 0.0) * (1 + 0.5 * x); });
    const double dirichlet = l2_norm(curl2d(solve_brinkman(p, 0.1, SolverConfig{})));
    const ScalarField c = curl2d(solve_brinkman_gradient_form(p, 0.1, SolverConfig{}));
    double interior = 0.0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) interior = std::max(interior, std::abs(c(i, j)));
    CHECK(interior < 1e-7);
    CHECK(dirichlet > 10 * l2_norm(c));
}
