#include "udefit/kernels.hpp"

#include <string>

#include "kernels_ops.hpp"
#include "udefit/errors.hpp"

namespace udefit::kernels {

namespace detail {
namespace {

double sum_ref(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_ref(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double dot3_ref(const double* x, const double* y, const double* z, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i] * z[i];
    return acc;
}

double sum_sq_diff_ref(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

double sum_sq_dev_ref(const double* x, std::size_t n, double c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - c;
        acc += d * d;
    }
    return acc;
}

double weighted_pow_sum_ref(const double* v, const double* w, std::size_t n, int k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j < k; ++j) p *= v[i];
        acc += w[i] * p;
    }
    return acc;
}

constexpr Ops kScalarOps = {
    &sum_ref, &dot_ref, &dot3_ref, &sum_sq_diff_ref, &sum_sq_dev_ref, &weighted_pow_sum_ref,
};

} // namespace

const Ops& scalar_ops() noexcept { return kScalarOps; }

} // namespace detail

namespace {

const detail::Ops* g_active = nullptr;
Backend g_backend = Backend::scalar;

void init_once() {
    if (g_active == nullptr) select_best();
}

} // namespace

bool available(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: return detail::avx2_ops() != nullptr;
        case Backend::neon: return detail::neon_ops() != nullptr;
    }
    return false;
}

void select(Backend b) {
    const detail::Ops* ops = nullptr;
    switch (b) {
        case Backend::scalar: ops = &detail::scalar_ops(); break;
        case Backend::avx2: ops = detail::avx2_ops(); break;
        case Backend::neon: ops = detail::neon_ops(); break;
    }
    if (ops == nullptr)
        throw ConfigError("kernel backend '" + std::string(name(b)) +
                          "' is not available on this machine");
    g_active = ops;
    g_backend = b;
}

void select_best() noexcept {
    if (const detail::Ops* ops = detail::avx2_ops()) {
        g_active = ops;
        g_backend = Backend::avx2;
    } else if (const detail::Ops* ops = detail::neon_ops()) {
        g_active = ops;
        g_backend = Backend::neon;
    } else {
        g_active = &detail::scalar_ops();
        g_backend = Backend::scalar;
    }
}

Backend active() noexcept {
    init_once();
    return g_backend;
}

std::string_view name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

double sum(const double* x, std::size_t n) noexcept {
    init_once();
    return g_active->sum(x, n);
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
    init_once();
    return g_active->dot(x, y, n);
}

double dot3(const double* x, const double* y, const double* z, std::size_t n) noexcept {
    init_once();
    return g_active->dot3(x, y, z, n);
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) noexcept {
    init_once();
    return g_active->sum_sq_diff(x, y, n);
}

double sum_sq_dev(const double* x, std::size_t n, double c) noexcept {
    init_once();
    return g_active->sum_sq_dev(x, n, c);
}

double weighted_pow_sum(const double* v, const double* w, std::size_t n, int k) noexcept {
    init_once();
    return g_active->weighted_pow_sum(v, w, n, k);
}

} // namespace udefit::kernels
