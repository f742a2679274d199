#include "kernels_ops.hpp"

#if defined(__x86_64__) && defined(__GNUC__)

#include <immintrin.h>

namespace udefit::kernels::detail {
namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sw = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

__attribute__((target("avx2,fma"))) double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return hsum(acc) + tail;
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* x, const double* y,
                                                    std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum(acc) + tail;
}

__attribute__((target("avx2,fma"))) double dot3_avx2(const double* x, const double* y,
                                                     const double* z, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(xy, _mm256_loadu_pd(z + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i] * z[i];
    return hsum(acc) + tail;
}

__attribute__((target("avx2,fma"))) double sum_sq_diff_avx2(const double* x, const double* y,
                                                            std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        tail += d * d;
    }
    return hsum(acc) + tail;
}

__attribute__((target("avx2,fma"))) double sum_sq_dev_avx2(const double* x, std::size_t n,
                                                           double c) {
    const __m256d cc = _mm256_set1_pd(c);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), cc);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - c;
        tail += d * d;
    }
    return hsum(acc) + tail;
}

__attribute__((target("avx2,fma"))) double weighted_pow_sum_avx2(const double* v, const double* w,
                                                                 std::size_t n, int k) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vv = _mm256_loadu_pd(v + i);
        __m256d p = _mm256_set1_pd(1.0);
        for (int j = 0; j < k; ++j) p = _mm256_mul_pd(p, vv);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), p, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j < k; ++j) p *= v[i];
        tail += w[i] * p;
    }
    return hsum(acc) + tail;
}

constexpr Ops kAvx2Ops = {
    &sum_avx2, &dot_avx2, &dot3_avx2, &sum_sq_diff_avx2, &sum_sq_dev_avx2, &weighted_pow_sum_avx2,
};

} // namespace

const Ops* avx2_ops() noexcept {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Ops;
    return nullptr;
}

} // namespace udefit::kernels::detail

#else

namespace udefit::kernels::detail {

const Ops* avx2_ops() noexcept { return nullptr; }

} // namespace udefit::kernels::detail

#endif
