#include "udefit/uncertain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "udefit/errors.hpp"

namespace udefit {

namespace {

constexpr double kSqrt3OverPi = std::numbers::sqrt3 / std::numbers::pi;
constexpr double kPiOverSqrt3 = std::numbers::pi / std::numbers::sqrt3;

// Logistic density of u = ln(alpha/(1-alpha)): d(alpha)/du = sech^2(u/2)/4,
// written via e^-|u| so it never overflows.
double logistic_weight(double u) {
    const double t = std::exp(-std::abs(u));
    const double onept = 1.0 + t;
    return t / (onept * onept);
}

} // namespace

NormalUncertain::NormalUncertain(double m, double s) : mean(m), scale(s) {
    if (!std::isfinite(m) || !std::isfinite(s))
        throw ConfigError("normal uncertain parameters must be finite");
    if (!(s > 0.0))
        throw ConfigError("normal uncertain scale must be > 0, got " + std::to_string(s));
}

double std_normal_inverse_cdf(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("inverse cdf needs alpha in (0,1), got " + std::to_string(alpha));
    return kSqrt3OverPi * std::log(alpha / (1.0 - alpha));
}

double normal_cdf(double x, const NormalUncertain& dist) {
    return 1.0 / (1.0 + std::exp(kPiOverSqrt3 * (dist.mean - x) / dist.scale));
}

double normal_inverse_cdf(double alpha, const NormalUncertain& dist) {
    return dist.mean + dist.scale * std_normal_inverse_cdf(alpha);
}

double uncertain_moment(const NormalUncertain& dist, int k, std::size_t quad_points) {
    if (k < 1) throw ConfigError("moment order must be >= 1, got " + std::to_string(k));
    if (quad_points < 2) throw ConfigError("quadrature needs at least 2 points");

    // Truncation at |u| = L leaves a tail below e^-L times a modest polynomial,
    // negligible at L = 45 + 5k for double precision.
    const double half_width = 45.0 + 5.0 * static_cast<double>(k);
    const double h = 2.0 * half_width / static_cast<double>(quad_points);
    const double slope = dist.scale * kSqrt3OverPi;

    double acc = 0.0;
    for (std::size_t i = 0; i < quad_points; ++i) {
        const double u = -half_width + (static_cast<double>(i) + 0.5) * h;
        const double q = dist.mean + slope * u;
        double p = 1.0;
        for (int j = 0; j < k; ++j) p *= q;
        acc += p * logistic_weight(u);
    }
    return acc * h;
}

double liu_increment(double dt, double alpha) {
    if (!(dt > 0.0)) throw ConfigError("step size must be > 0, got " + std::to_string(dt));
    return dt * std_normal_inverse_cdf(alpha);
}

} // namespace udefit
