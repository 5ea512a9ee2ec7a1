#include "tissue/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace tissue {

void SolverConfig::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("SolverConfig: rel_tol must be > 0");
    if (max_iter < 0) throw std::invalid_argument("SolverConfig: max_iter must be >= 0");
}

int SolverConfig::iteration_limit(const GridSpec& g) const {
    return max_iter > 0 ? max_iter : 10 * (g.nx + g.ny);
}

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
    const double bn = b.norm();
    const double rn = (a * x - b).norm();
    if (bn == 0.0) return rn;
    return rn / bn;
}

Vector solve_spd(const SparseMatrix& a, const Vector& b, const SolverConfig& cfg, int max_iter,
                 const Vector& guess) {
    cfg.validate();
    if (b.squaredNorm() == 0.0) return Vector::Zero(b.size());
    if (cfg.method == SolverMethod::Direct) {
        return SpdFactorization(a).solve(b, cfg.rel_tol);
    }
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(cfg.rel_tol);
    cg.setMaxIterations(max_iter);
    cg.compute(a);
    Vector x = guess.size() == b.size() ? Vector(cg.solveWithGuess(b, guess)) : Vector(cg.solve(b));
    const double res = relative_residual(a, x, b);
    if (cg.info() != Eigen::Success || !(res <= cfg.rel_tol)) {
        throw SolverFailure("conjugate gradient did not converge", res, int(cg.iterations()));
    }
    return x;
}

struct SpdFactorization::Impl {
    SparseMatrix a;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

SpdFactorization::SpdFactorization(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
    impl_->a = a;
    impl_->llt.compute(Eigen::SparseMatrix<double>(a));
    if (impl_->llt.info() != Eigen::Success) throw SolverFailure("sparse Cholesky factorization failed", 1.0, 0);
}

SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization&&) noexcept = default;
SpdFactorization& SpdFactorization::operator=(SpdFactorization&&) noexcept = default;

Vector SpdFactorization::solve(const Vector& b, double rel_tol) const {
    if (b.squaredNorm() == 0.0) return Vector::Zero(b.size());
    Vector x = impl_->llt.solve(b);
    const double res = relative_residual(impl_->a, x, b);
    if (!(res <= rel_tol)) throw SolverFailure("direct SPD solve above tolerance", res, 0);
    return x;
}

Vector solve_general(const SparseMatrix& a, const Vector& b, double rel_tol, const Vector& guess) {
    if (b.squaredNorm() == 0.0) return Vector::Zero(b.size());
    {
        // Near-identity systems converge in a few iterations; sparse LU is the fallback.
        Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> it;
        it.setTolerance(rel_tol * 0.1);
        it.setMaxIterations(200);
        it.compute(a);
        Vector x = guess.size() == b.size() ? Vector(it.solveWithGuess(b, guess)) : Vector(it.solve(b));
        if (it.info() == Eigen::Success && relative_residual(a, x, b) <= rel_tol) return x;
    }
    return solve_lu(a, b, rel_tol);
}

Vector solve_lu(const SparseMatrix& a, const Vector& b, double rel_tol) {
    if (b.squaredNorm() == 0.0) return Vector::Zero(b.size());
    Eigen::SparseMatrix<double> col = a;
    col.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(col);
    if (lu.info() != Eigen::Success) throw SolverFailure("sparse LU factorization failed: " + lu.lastErrorMessage(), 1.0, 0);
    Vector x = lu.solve(b);
    const double res = relative_residual(a, x, b);
    if (!(res <= rel_tol)) throw SolverFailure("sparse LU solve above tolerance", res, 0);
    return x;
}

}  // namespace tissue
