#include "tissue/brinkman.hpp"

#include <stdexcept>

namespace tissue {

namespace {

SparseMatrix helmholtz(const GridSpec& g, double beta, FaceComponent c) {
    SparseMatrix m = face_neg_laplacian(g, c) * beta;
    SparseMatrix id(m.rows(), m.cols());
    id.setIdentity();
    m += id;
    m.makeCompressed();
    return m;
}

// Copy one component out of / into a VectorField.
Vector component(const VectorField& v, FaceComponent c) {
    const auto vals = c == FaceComponent::U ? v.u_values() : v.v_values();
    Vector x(Eigen::Index(vals.size()));
    for (std::size_t k = 0; k < vals.size(); ++k) x[Eigen::Index(k)] = vals[k];
    return x;
}

void zero_boundary(Vector& x, const GridSpec& g, FaceComponent c) {
    if (c == FaceComponent::U) {
        for (int j = 0; j < g.ny; ++j) {
            x[j * (g.nx + 1)] = 0.0;
            x[j * (g.nx + 1) + g.nx] = 0.0;
        }
    } else {
        for (int i = 0; i < g.nx; ++i) {
            x[i] = 0.0;
            x[g.ny * g.nx + i] = 0.0;
        }
    }
}

void check_beta(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("Brinkman solve: beta must be > 0");
}

SparseMatrix screened_matrix(const GridSpec& g, double beta) {
    SparseMatrix a = cell_neg_laplacian(g, BoundaryKind::ZeroFlux) * beta;
    SparseMatrix id(a.rows(), a.cols());
    id.setIdentity();
    a += id;
    a.makeCompressed();
    return a;
}

void store(VectorField& out, FaceComponent c, const Vector& x) {
    auto dst = c == FaceComponent::U ? out.u_values() : out.v_values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = x[Eigen::Index(k)];
}

}  // namespace

HelmholtzOperator::HelmholtzOperator(const GridSpec& spec, double beta)
    : spec_(spec), beta_(beta) {
    spec_.validate();
    check_beta(beta);
    u_ = helmholtz(spec_, beta_, FaceComponent::U);
    v_ = helmholtz(spec_, beta_, FaceComponent::V);
}

VectorField HelmholtzOperator::apply(const VectorField& v) const {
    VectorField out(spec_);
    const Vector au = u_ * component(v, FaceComponent::U);
    const Vector av = v_ * component(v, FaceComponent::V);
    auto ou = out.u_values();
    auto ov = out.v_values();
    for (std::size_t k = 0; k < ou.size(); ++k) ou[k] = au[Eigen::Index(k)];
    for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = av[Eigen::Index(k)];
    return out;
}

VectorField HelmholtzOperator::solve(const VectorField& rhs, const SolverConfig& cfg, const VectorField* guess) const {
    if (!(rhs.spec() == spec_)) throw std::invalid_argument("HelmholtzOperator::solve: grid mismatch");
    VectorField out(spec_);
    const int limit = cfg.iteration_limit(spec_);
    for (FaceComponent c : {FaceComponent::U, FaceComponent::V}) {
        Vector b = component(rhs, c);
        zero_boundary(b, spec_, c);
        Vector x0;
        if (guess) {
            x0 = component(*guess, c);
            zero_boundary(x0, spec_, c);
        }
        Vector x = solve_spd(matrix(c), b, cfg, limit, x0);
        zero_boundary(x, spec_, c);
        store(out, c, x);
    }
    return out;
}

BrinkmanSolver::BrinkmanSolver(const GridSpec& spec, double beta, const SolverConfig& cfg)
    : op_(spec, beta), screened_(screened_matrix(spec, beta)), cfg_(cfg) {
    cfg_.validate();
    if (cfg_.method == SolverMethod::Direct) {
        fu_.emplace(op_.matrix(FaceComponent::U));
        fv_.emplace(op_.matrix(FaceComponent::V));
        fk_.emplace(screened_);
    }
}

bool BrinkmanSolver::matches(const GridSpec& spec, double beta, const SolverConfig& cfg) const {
    return spec == op_.spec() && beta == op_.beta() && cfg.method == cfg_.method && cfg.rel_tol == cfg_.rel_tol &&
           cfg.max_iter == cfg_.max_iter;
}

VectorField BrinkmanSolver::velocity(const ScalarField& p, const VectorField* guess) const {
    if (!(p.spec() == op_.spec())) throw std::invalid_argument("BrinkmanSolver: grid mismatch");
    VectorField rhs = gradient(p);
    rhs *= -1.0;
    if (!fu_) return op_.solve(rhs, cfg_, guess);
    VectorField out(op_.spec());
    for (FaceComponent c : {FaceComponent::U, FaceComponent::V}) {
        Vector b = component(rhs, c);
        zero_boundary(b, op_.spec(), c);
        Vector x = (c == FaceComponent::U ? *fu_ : *fv_).solve(b, cfg_.rel_tol);
        zero_boundary(x, op_.spec(), c);
        store(out, c, x);
    }
    return out;
}

VectorField BrinkmanSolver::gradient_form_velocity(const ScalarField& p) const {
    if (!(p.spec() == op_.spec())) throw std::invalid_argument("BrinkmanSolver: grid mismatch");
    const GridSpec& g = op_.spec();
    const Vector k = fk_ ? fk_->solve(pack(p), cfg_.rel_tol)
                         : solve_spd(screened_, pack(p), cfg_, cfg_.iteration_limit(g));
    VectorField v = gradient(unpack_scalar(g, k));
    v *= -1.0;
    return v;
}

VectorField solve_brinkman(const ScalarField& p, double beta, const SolverConfig& cfg, const VectorField* guess) {
    check_beta(beta);
    VectorField rhs = gradient(p);
    rhs *= -1.0;
    return HelmholtzOperator(p.spec(), beta).solve(rhs, cfg, guess);
}

VectorField solve_brinkman_with_rhs(const VectorField& rhs, double beta, const SolverConfig& cfg) {
    check_beta(beta);
    return HelmholtzOperator(rhs.spec(), beta).solve(rhs, cfg);
}

ScalarField solve_screened_potential(const ScalarField& p, double beta, const SolverConfig& cfg) {
    check_beta(beta);
    const GridSpec& g = p.spec();
    const Vector k = solve_spd(screened_matrix(g, beta), pack(p), cfg, cfg.iteration_limit(g));
    return unpack_scalar(g, k);
}

VectorField solve_brinkman_gradient_form(const ScalarField& p, double beta, const SolverConfig& cfg) {
    VectorField v = gradient(solve_screened_potential(p, beta, cfg));
    v *= -1.0;
    return v;
}

}  // namespace tissue
