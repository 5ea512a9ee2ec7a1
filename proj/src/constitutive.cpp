#include "tissue/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tissue {

namespace {

constexpr double kMaxFinite = std::numeric_limits<double>::max();
// log of the largest finite double, with some head-room for the m/(m-1) factor.
const double kLogMax = std::log(kMaxFinite) - 1.0;

double clamp_density(double n) { return std::clamp(n, 0.0, 1.0 - kClampDelta); }

}  // namespace

void ModelParams::validate() const {
    std::string errors;
    auto need = [&](bool ok, const char* what) {
        if (!ok) {
            if (!errors.empty()) errors += "; ";
            errors += what;
        }
    };
    need(beta1 > 0, "beta1 must be > 0");
    need(beta2 > 0, "beta2 must be > 0");
    need(eps > 0, "eps must be > 0");
    need(m > 1, "m must be > 1");
    need(alpha >= 0, "alpha must be >= 0");
    need(g1 > 0, "g1 must be > 0");
    need(g2 > 0, "g2 must be > 0");
    need(p1_star >= 0, "p1_star must be >= 0");
    need(p2_star >= 0, "p2_star must be >= 0");
    if (!errors.empty()) throw std::invalid_argument("ModelParams: " + errors);
}

ModelParams ModelParams::swapped() const {
    ModelParams s = *this;
    std::swap(s.beta1, s.beta2);
    std::swap(s.g1, s.g2);
    std::swap(s.p1_star, s.p2_star);
    std::swap(s.growth1, s.growth2);
    return s;
}

ModelParams tissular_params() {
    ModelParams p;
    p.beta1 = 0.5;
    p.beta2 = 0.1;
    p.eps = 0.1;
    p.m = 30.0;
    p.alpha = 1e-3;
    p.g1 = 1.0;
    p.p1_star = 5.0;
    p.g2 = 1.0;
    p.p2_star = 10.0;
    return p;
}

double congestion_pressure(double n, double eps) {
    const double c = clamp_density(n);
    return eps * c / (1.0 - c);
}

double congestion_pressure_slope(double n, double eps) {
    const double c = clamp_density(n);
    return eps / ((1.0 - c) * (1.0 - c));
}

RepulsionValue repulsion_pressure(double r, double m) {
    if (r <= 0.0) return {};
    const double exponent = (m - 1.0) * std::log1p(r);
    if (exponent > kLogMax) return {kMaxFinite, true};
    return {m / (m - 1.0) * std::expm1(exponent), false};
}

double repulsion_slope(double r, double m) {
    const double exponent = (m - 2.0) * std::log1p(std::max(r, 0.0));
    if (exponent > kLogMax - std::log(m)) return kMaxFinite;
    return m * std::exp(exponent);
}

double growth_rate(double p, Tissue which, const ModelParams& params) {
    const auto& custom = which == Tissue::One ? params.growth1 : params.growth2;
    if (custom) return custom(p);
    return params.g(which) * (params.p_star(which) - p);
}

PressureField pressure_congestion(const ScalarField& n, double eps) {
    PressureField out{ScalarField(n.spec()), 0, 0};
    auto src = n.values();
    auto dst = out.p.values();
    for (std::size_t k = 0; k < src.size(); ++k) {
        if (src[k] > 1.0 - kClampDelta) ++out.saturated;
        dst[k] = congestion_pressure(src[k], eps);
    }
    return out;
}

PressureField pressure_repulsion(const ScalarField& r, double m) {
    PressureField out{ScalarField(r.spec()), 0, 0};
    auto src = r.values();
    auto dst = out.p.values();
    for (std::size_t k = 0; k < src.size(); ++k) {
        const RepulsionValue q = repulsion_pressure(src[k], m);
        dst[k] = q.value;
        if (q.overflow) ++out.overflowed;
    }
    return out;
}

TotalPressures total_pressures(const ScalarField& n1, const ScalarField& n2, const ModelParams& params,
                               bool repulsion) {
    if (!(n1.spec() == n2.spec())) throw std::invalid_argument("total_pressures: grid mismatch");
    TotalPressures out{ScalarField(n1.spec()), ScalarField(n1.spec()), 0, 0};
    auto a = n1.values();
    auto b = n2.values();
    auto p1 = out.p1.values();
    auto p2 = out.p2.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double n = a[k] + b[k];
        if (n > 1.0 - kClampDelta) ++out.saturated;
        const double pe = congestion_pressure(n, params.eps);
        p1[k] = pe;
        p2[k] = pe;
        if (repulsion) {
            const RepulsionValue q = repulsion_pressure(a[k] * b[k], params.m);
            if (q.overflow) ++out.overflowed;
            p1[k] += b[k] * q.value;
            p2[k] += a[k] * q.value;
        }
    }
    return out;
}

ScalarField growth(const ScalarField& p, Tissue which, const ModelParams& params) {
    ScalarField out(p.spec());
    auto src = p.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = growth_rate(src[k], which, params);
    return out;
}

CoercivityReport coercivity_check(const ModelParams& params) {
    CoercivityReport r;
    r.margin1 = params.beta1 * params.g2 - 0.25;
    r.margin2 = params.beta2 * params.g1 - 0.25;
    r.holds = r.margin1 > 0.0 && r.margin2 > 0.0;
    r.lambda = std::min(params.beta1 - 0.25 / params.g2, params.beta2 - 0.25 / params.g1);
    return r;
}

}  // namespace tissue
