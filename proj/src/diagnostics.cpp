#include "tissue/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tissue/constitutive.hpp"
#include "tissue/field_io.hpp"

namespace tissue {

double segregation_metric(const ScalarField& n1, const ScalarField& n2) {
    if (!(n1.spec() == n2.spec())) throw std::invalid_argument("segregation_metric: grid mismatch");
    const auto a = n1.values();
    const auto b = n2.values();
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s * n1.spec().cell_area();
}

double complementarity_residual(const ScalarField& n, double eps) {
    double s = 0.0;
    for (double x : n.values()) {
        const double p = congestion_pressure(x, eps);
        if (p > kPressurizedThreshold) s += p * (1.0 - std::min(x, 1.0 - kClampDelta));
    }
    return s * n.spec().cell_area();
}

double binary_distance(const ScalarField& n) {
    double s = 0.0;
    for (double x : n.values()) s += x * (1.0 - x);
    return s * n.spec().cell_area();
}

void write_records_csv(std::ostream& os, const std::vector<DiagnosticRecord>& records) {
    using io::format_double;
    os << "t,mass1,mass2,overlap,comp_residual,max_abs_curl_v2,min_curl_v2,l2_curl_v1,l2_curl_v2,binary_distance,clamp_count\n";
    for (const auto& r : records) {
        os << format_double(r.t) << ',' << format_double(r.mass1) << ',' << format_double(r.mass2) << ','
           << format_double(r.overlap) << ',' << format_double(r.comp_residual) << ','
           << format_double(r.curl2_max_abs) << ',' << format_double(r.curl2_min) << ','
           << format_double(r.curl1_l2) << ',' << format_double(r.curl2_l2) << ','
           << format_double(r.binary_distance) << ',' << r.clamp_count << '\n';
    }
}

CurlSignature curl_signature(const VectorField& v, const ScalarField* mask, const CurlWindow& window) {
    const GridSpec& g = v.spec();
    if (mask && !(mask->spec() == g)) throw std::invalid_argument("curl_signature: mask grid mismatch");
    const ScalarField c = curl2d(v);
    auto inside = [&](int i, int j) { return !mask || (*mask)(i, j) > 0.1; };

    // Coordinates in the viewing frame.
    const double sign = window.rotated ? -1.0 : 1.0;
    const double xmid = 0.5 * (g.x_min + g.x_max), ymid = 0.5 * (g.y_min + g.y_max);
    auto vx = [&](int i) { return xmid + sign * (g.xc(i) - xmid); };
    auto vy = [&](int j) { return ymid + sign * (g.yc(j) - ymid); };

    const double y_cut = g.y_min + window.posterior_fraction * (g.y_max - g.y_min);
    const double band = window.wall_fraction * (g.x_max - g.x_min);
    CurlSignature out;
    double left = 0.0, right = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        if (vy(j) >= y_cut) continue;
        for (int i = 0; i < g.nx; ++i) {
            if (!inside(i, j)) continue;
            if (vx(i) < g.x_min + band) {
                left += c(i, j);
                ++out.left_cells;
            } else if (vx(i) > g.x_max - band) {
                right += c(i, j);
                ++out.right_cells;
            }
        }
    }
    if (out.left_cells) out.posterior_left_mean = left / double(out.left_cells);
    if (out.right_cells) out.posterior_right_mean = right / double(out.right_cells);

    const double probe = ymid + sign * (window.probe_y - ymid);
    if (probe <= g.y_min || probe >= g.y_max) return out;
    const int j = std::clamp(int((probe - g.y_min) / g.hy()), 0, g.ny - 1);
    std::vector<bool> near(std::size_t(g.nx), mask == nullptr);
    if (mask) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            if (inside(i, j) == inside(i + 1, j)) continue;
            for (int k = i - window.probe_halfwidth + 1; k <= i + window.probe_halfwidth; ++k) {
                if (k >= 0 && k < g.nx) near[std::size_t(k)] = true;
            }
        }
    }
    for (int i = 0; i + 1 < g.nx; ++i) {
        if (!near[std::size_t(i)] || !near[std::size_t(i + 1)]) continue;
        const double a = c(i, j), b = c(i + 1, j);
        if ((a > 0 && b < 0) || (a < 0 && b > 0)) ++out.sign_changes;
    }
    return out;
}

}  // namespace tissue
