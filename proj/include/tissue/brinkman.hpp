/// @file brinkman.hpp
/// @brief Brinkman velocity law -beta Lap v + v = -grad p on a walled box.
#pragma once

#include <optional>

#include "tissue/assembly.hpp"
#include "tissue/grid.hpp"
#include "tissue/solver.hpp"

namespace tissue {

/// (-beta Lap_h + I) acting on each velocity component, Dirichlet walls.
/// Boundary-normal faces carry identity rows, so the systems stay SPD.
class HelmholtzOperator {
public:
    HelmholtzOperator(const GridSpec& spec, double beta);

    [[nodiscard]] const GridSpec& spec() const { return spec_; }
    [[nodiscard]] double beta() const { return beta_; }
    [[nodiscard]] const SparseMatrix& matrix(FaceComponent c) const {
        return c == FaceComponent::U ? u_ : v_;
    }

    [[nodiscard]] VectorField apply(const VectorField& v) const;

    /// Solve for the velocity given face forcing `rhs` (boundary entries ignored).
    /// `guess`, when non-null, warm-starts the iterative solver.
    [[nodiscard]] VectorField solve(const VectorField& rhs, const SolverConfig& cfg,
                                    const VectorField* guess = nullptr) const;

private:
    GridSpec spec_;
    double beta_;
    SparseMatrix u_;
    SparseMatrix v_;
};

/// Brinkman solves on a fixed grid and beta. With SolverMethod::Direct the
/// factorizations are computed once in the constructor and reused by every solve.
class BrinkmanSolver {
public:
    BrinkmanSolver(const GridSpec& spec, double beta, const SolverConfig& cfg);

    [[nodiscard]] bool matches(const GridSpec& spec, double beta, const SolverConfig& cfg) const;

    /// Dirichlet-wall velocity for pressure p; `guess` seeds CG.
    [[nodiscard]] VectorField velocity(const ScalarField& p, const VectorField* guess = nullptr) const;
    /// v = -grad K with -beta Lap K + K = p, zero-flux walls.
    [[nodiscard]] VectorField gradient_form_velocity(const ScalarField& p) const;

private:
    HelmholtzOperator op_;
    SparseMatrix screened_;
    SolverConfig cfg_;
    std::optional<SpdFactorization> fu_, fv_, fk_;
};

/// Dirichlet-wall Brinkman velocity for pressure p.
[[nodiscard]] VectorField solve_brinkman(const ScalarField& p, double beta, const SolverConfig& cfg,
                                         const VectorField* guess = nullptr);

/// Same operator with an arbitrary face right-hand side (manufactured solutions).
[[nodiscard]] VectorField solve_brinkman_with_rhs(const VectorField& rhs, double beta, const SolverConfig& cfg);

/// Potential form: -beta Lap K + K = p with zero-flux walls, returns v = -grad K.
[[nodiscard]] VectorField solve_brinkman_gradient_form(const ScalarField& p, double beta, const SolverConfig& cfg);

/// The screened potential K itself.
[[nodiscard]] ScalarField solve_screened_potential(const ScalarField& p, double beta, const SolverConfig& cfg);

}  // namespace tissue
