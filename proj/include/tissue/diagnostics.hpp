/// @file diagnostics.hpp
/// @brief Segregation, complementarity and curl-structure metrics.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "tissue/grid.hpp"

namespace tissue {

/// Cells with congestion pressure above this value count as pressurized.
inline constexpr double kPressurizedThreshold = 1e-10;

/// sum n1 n2 * cell area.
[[nodiscard]] double segregation_metric(const ScalarField& n1, const ScalarField& n2);

/// sum p_eps(n) (1 - n) * cell area over pressurized cells.
[[nodiscard]] double complementarity_residual(const ScalarField& n, double eps);

/// sum n (1 - n) * cell area: distance of the density from {0, 1} values.
[[nodiscard]] double binary_distance(const ScalarField& n);

struct DiagnosticRecord {
    double t = 0.0;
    double mass1 = 0.0;
    double mass2 = 0.0;
    double overlap = 0.0;
    double comp_residual = 0.0;
    double curl2_max_abs = 0.0;
    double curl2_min = 0.0;
    double curl1_l2 = 0.0;  ///< L2 norm of curl v_i over cells with n_i > 0.1
    double curl2_l2 = 0.0;
    double binary_distance = 0.0;  ///< of the total density
    std::size_t clamp_count = 0;
};

/// Header plus one row per record, full precision.
void write_records_csv(std::ostream& os, const std::vector<DiagnosticRecord>& records);

struct CurlWindow {
    /// Posterior is the lower half of the box (y below its midpoint).
    double posterior_fraction = 0.5;
    /// Width of the left / right wall bands as a fraction of the box width.
    double wall_fraction = 0.25;
    /// Horizontal probe line for the sign-change count.
    double probe_y = -0.25;
    /// Cells on each side of an interface crossing inspected by the probe.
    int probe_halfwidth = 3;
    /// Read the box rotated by 180 degrees: posterior is the upper part, left is the
    /// x_max side and the probe line is reflected. Curl values are unchanged.
    bool rotated = false;
};

struct CurlSignature {
    double posterior_left_mean = 0.0;
    double posterior_right_mean = 0.0;
    int sign_changes = 0;  ///< curl sign flips near mask boundaries on the probe line
    std::size_t left_cells = 0;
    std::size_t right_cells = 0;
};

/// Mean curl of v over the posterior wall bands. When `mask` is given only cells
/// with mask > 0.1 contribute, and the probe counts sign flips within
/// `probe_halfwidth` cells of each mask boundary; otherwise the probe scans the full line.
[[nodiscard]] CurlSignature curl_signature(const VectorField& v, const ScalarField* mask = nullptr,
                                           const CurlWindow& window = {});

}  // namespace tissue
