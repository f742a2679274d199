#include "kernels_ops.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace udefit::kernels::detail {
namespace {

double sum_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return vaddvq_f64(acc) + tail;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return vaddvq_f64(acc) + tail;
}

double dot3_neon(const double* x, const double* y, const double* z, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xy = vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
        acc = vfmaq_f64(acc, xy, vld1q_f64(z + i));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i] * z[i];
    return vaddvq_f64(acc) + tail;
}

double sum_sq_diff_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        tail += d * d;
    }
    return vaddvq_f64(acc) + tail;
}

double sum_sq_dev_neon(const double* x, std::size_t n, double c) {
    const float64x2_t cc = vdupq_n_f64(c);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(x + i), cc);
        acc = vfmaq_f64(acc, d, d);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - c;
        tail += d * d;
    }
    return vaddvq_f64(acc) + tail;
}

double weighted_pow_sum_neon(const double* v, const double* w, std::size_t n, int k) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vv = vld1q_f64(v + i);
        float64x2_t p = vdupq_n_f64(1.0);
        for (int j = 0; j < k; ++j) p = vmulq_f64(p, vv);
        acc = vfmaq_f64(acc, vld1q_f64(w + i), p);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j < k; ++j) p *= v[i];
        tail += w[i] * p;
    }
    return vaddvq_f64(acc) + tail;
}

constexpr Ops kNeonOps = {
    &sum_neon, &dot_neon, &dot3_neon, &sum_sq_diff_neon, &sum_sq_dev_neon, &weighted_pow_sum_neon,
};

} // namespace

const Ops* neon_ops() noexcept { return &kNeonOps; }

} // namespace udefit::kernels::detail

#else

namespace udefit::kernels::detail {

const Ops* neon_ops() noexcept { return nullptr; }

} // namespace udefit::kernels::detail

#endif
