#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Reduction kernels shared by the estimators, the moment quadrature, and the
// regression solvers. Every operation has a scalar reference implementation
// and, where the hardware supports it, a SIMD variant; the active backend is
// chosen once at startup from the CPU's capabilities and can be overridden
// with select() (bit-for-bit run-to-run determinism holds for a fixed
// backend). SIMD variants reassociate the summation, so they match the scalar
// reference to rounding accuracy, not bit-exactly.
namespace udefit::kernels {

enum class Backend { scalar, avx2, neon };

/// Backend currently in use.
Backend active() noexcept;

/// Whether a backend is compiled in and usable on this CPU.
bool available(Backend b) noexcept;

/// Force a specific backend; throws ConfigError if unavailable.
/// Not thread-safe against concurrent kernel calls; switch at startup.
void select(Backend b);

/// Pick the best available backend (the startup default).
void select_best() noexcept;

std::string_view name(Backend b) noexcept;

/// Sum of x[0..n).
double sum(const double* x, std::size_t n) noexcept;

/// Dot product: sum of x[i]*y[i].
double dot(const double* x, const double* y, std::size_t n) noexcept;

/// Triple product sum: sum of x[i]*y[i]*z[i].
double dot3(const double* x, const double* y, const double* z, std::size_t n) noexcept;

/// Sum of (x[i]-y[i])^2.
double sum_sq_diff(const double* x, const double* y, std::size_t n) noexcept;

/// Sum of (x[i]-c)^2.
double sum_sq_dev(const double* x, std::size_t n, double c) noexcept;

/// Sum of w[i]*v[i]^k for integer k >= 0.
double weighted_pow_sum(const double* v, const double* w, std::size_t n, int k) noexcept;

inline double sum(std::span<const double> x) noexcept {
    return sum(x.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) noexcept {
    return dot(x.data(), y.data(), x.size());
}
inline double dot3(std::span<const double> x, std::span<const double> y,
                   std::span<const double> z) noexcept {
    return dot3(x.data(), y.data(), z.data(), x.size());
}
inline double sum_sq_diff(std::span<const double> x, std::span<const double> y) noexcept {
    return sum_sq_diff(x.data(), y.data(), x.size());
}
inline double sum_sq_dev(std::span<const double> x, double c) noexcept {
    return sum_sq_dev(x.data(), x.size(), c);
}
inline double weighted_pow_sum(std::span<const double> v, std::span<const double> w,
                               int k) noexcept {
    return weighted_pow_sum(v.data(), w.data(), v.size(), k);
}

} // namespace udefit::kernels
