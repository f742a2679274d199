#pragma once

#include <cstddef>

namespace udefit {

// Normal uncertainty distribution with distribution function
//   Phi(x) = 1 / (1 + exp(pi (mean - x) / (sqrt(3) scale))),  scale > 0.
struct NormalUncertain {
    double mean = 0.0;
    double scale = 1.0;

    NormalUncertain(double m, double s);
};

// Inverse distribution of the standard normal uncertain variable N(0,1):
//   (sqrt(3)/pi) ln(alpha / (1 - alpha)),  alpha in (0,1).
double std_normal_inverse_cdf(double alpha);

double normal_cdf(double x, const NormalUncertain& dist);
double normal_inverse_cdf(double alpha, const NormalUncertain& dist);

// k-th raw moment integral(0,1) of (inverse cdf)^k d(alpha), k >= 1,
// evaluated by a midpoint rule after the substitution u = ln(alpha/(1-alpha))
// so both endpoint singularities vanish.  quad_points is the midpoint count.
double uncertain_moment(const NormalUncertain& dist, int k, std::size_t quad_points = 100000);

// Increment of a Liu process over a step dt at fractile alpha; increments are
// N(0, dt) distributed, so this is dt * std_normal_inverse_cdf(alpha).
double liu_increment(double dt, double alpha);

} // namespace udefit
