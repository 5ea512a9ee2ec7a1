/// @file solver.hpp
/// @brief Sparse linear-solve configuration and thin wrappers over Eigen.
#pragma once

#include <stdexcept>
#include <string>

#include <memory>

#include <Eigen/SparseCore>

#include "tissue/grid.hpp"

namespace tissue {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class SolverMethod {
    ConjugateGradient,  ///< Jacobi-preconditioned CG (SPD systems)
    Direct,             ///< sparse Cholesky for SPD systems, sparse LU otherwise
};

struct SolverConfig {
    double rel_tol = 1e-10;
    int max_iter = 0;  ///< 0 selects 10 (nx + ny)
    SolverMethod method = SolverMethod::ConjugateGradient;

    void validate() const;
    [[nodiscard]] int iteration_limit(const GridSpec& g) const;
};

/// Thrown when a solve does not reach its tolerance. Never returns partial data.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what + " (relative residual " + std::to_string(residual) + " after " +
                             std::to_string(iterations) + " iterations)"),
          residual_(residual),
          iterations_(iterations) {}

    [[nodiscard]] double residual() const { return residual_; }
    [[nodiscard]] int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Solve an SPD system. `guess` (may be empty) seeds CG.
[[nodiscard]] Vector solve_spd(const SparseMatrix& a, const Vector& b, const SolverConfig& cfg, int max_iter,
                               const Vector& guess = Vector());

/// Solve a general square system: BiCGSTAB seeded with `guess` (may be empty), then
/// sparse LU when that does not reach `rel_tol`. The residual is checked on the result.
[[nodiscard]] Vector solve_general(const SparseMatrix& a, const Vector& b, double rel_tol,
                                   const Vector& guess = Vector());

/// Sparse LU (COLAMD ordering); the residual is checked on the result.
[[nodiscard]] Vector solve_lu(const SparseMatrix& a, const Vector& b, double rel_tol);

/// Sparse Cholesky factorization of an SPD matrix, reusable across right-hand sides.
class SpdFactorization {
public:
    explicit SpdFactorization(const SparseMatrix& a);
    ~SpdFactorization();
    SpdFactorization(SpdFactorization&&) noexcept;
    SpdFactorization& operator=(SpdFactorization&&) noexcept;

    /// Throws SolverFailure when the residual exceeds rel_tol.
    [[nodiscard]] Vector solve(const Vector& b, double rel_tol) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// ||a x - b|| / ||b|| (0 when b vanishes and x solves exactly).
[[nodiscard]] double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b);

}  // namespace tissue
