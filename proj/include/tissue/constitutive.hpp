/// @file constitutive.hpp
/// @brief Pressure laws, repulsion law and growth functions.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "tissue/grid.hpp"

namespace tissue {

/// Densities are clamped to n <= 1 - kClampDelta before the congestion law is evaluated.
inline constexpr double kClampDelta = 1e-8;

enum class Tissue { One = 1, Two = 2 };

struct ModelParams {
    double beta1 = 0.5;   ///< viscosity of tissue 1
    double beta2 = 0.1;   ///< viscosity of tissue 2
    double eps = 0.1;     ///< congestion stiffness
    double m = 30.0;      ///< repulsion exponent, must exceed 1
    double alpha = 1e-3;  ///< fourth-order coefficient
    double g1 = 1.0;
    double g2 = 1.0;
    double p1_star = 5.0;  ///< homeostatic pressure of tissue 1
    double p2_star = 10.0;

    /// Optional non-linear growth law G_i(p). When unset the linear law
    /// g_i (p_i* - p) is used.
    std::function<double(double)> growth1{};
    std::function<double(double)> growth2{};

    /// Throws std::invalid_argument listing every violated positivity constraint.
    void validate() const;

    [[nodiscard]] double beta(Tissue t) const { return t == Tissue::One ? beta1 : beta2; }
    [[nodiscard]] double g(Tissue t) const { return t == Tissue::One ? g1 : g2; }
    [[nodiscard]] double p_star(Tissue t) const { return t == Tissue::One ? p1_star : p2_star; }

    /// Tissue-swapped copy (1 <-> 2).
    [[nodiscard]] ModelParams swapped() const;
};

/// Reference tissue parameters: G1 = 5 - s, G2 = 10 - s, beta1 = 0.5, beta2 = 0.1,
/// eps = 0.1, m = 30, alpha = 1e-3.
[[nodiscard]] ModelParams tissular_params();

// Scalar laws ---------------------------------------------------------------

/// eps * n / (1 - n), with n clamped into [0, 1 - kClampDelta].
[[nodiscard]] double congestion_pressure(double n, double eps);
/// d/dn of the congestion law at the clamped density.
[[nodiscard]] double congestion_pressure_slope(double n, double eps);

struct RepulsionValue {
    double value = 0.0;
    bool overflow = false;
};
/// q_m(r) = m/(m-1) ((1+r)^(m-1) - 1), evaluated as m/(m-1) expm1((m-1) log1p(r)).
/// Saturates at the largest finite double on overflow.
[[nodiscard]] RepulsionValue repulsion_pressure(double r, double m);
/// q_m'(r) = m (1+r)^(m-2), saturating like repulsion_pressure.
[[nodiscard]] double repulsion_slope(double r, double m);

[[nodiscard]] double growth_rate(double p, Tissue which, const ModelParams& params);

// Field laws ----------------------------------------------------------------

struct PressureField {
    ScalarField p;
    std::size_t saturated = 0;  ///< cells clamped below 1 - kClampDelta
    std::size_t overflowed = 0; ///< cells where q_m saturated
};

[[nodiscard]] PressureField pressure_congestion(const ScalarField& n, double eps);
[[nodiscard]] PressureField pressure_repulsion(const ScalarField& r, double m);

struct TotalPressures {
    ScalarField p1;
    ScalarField p2;
    std::size_t saturated = 0;
    std::size_t overflowed = 0;
};

/// p1 = p_eps(n1+n2) + n2 q_m(n1 n2), p2 = p_eps(n1+n2) + n1 q_m(n1 n2).
/// With `repulsion` false the q_m contribution is omitted entirely.
[[nodiscard]] TotalPressures total_pressures(const ScalarField& n1, const ScalarField& n2,
                                             const ModelParams& params, bool repulsion = true);

[[nodiscard]] ScalarField growth(const ScalarField& p, Tissue which, const ModelParams& params);

struct CoercivityReport {
    bool holds = false;
    double margin1 = 0.0;  ///< beta1 g2 - 1/4
    double margin2 = 0.0;  ///< beta2 g1 - 1/4
    /// min(beta1 - 1/(4 g2), beta2 - 1/(4 g1)): the coercivity constant of the stationary form.
    double lambda = 0.0;
};

[[nodiscard]] CoercivityReport coercivity_check(const ModelParams& params);

}  // namespace tissue
