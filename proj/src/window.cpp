#include "udefit/window.hpp"

#include <algorithm>
#include <cmath>

#include "linalg.hpp"
#include "udefit/errors.hpp"
#include "udefit/kernels.hpp"

namespace udefit {

namespace {

void check_window(const TimeSeries& data, std::size_t start, std::size_t n,
                  std::size_t drift_arity) {
    const std::size_t min_n = std::max<std::size_t>(3, drift_arity + 2);
    if (n < min_n)
        throw ConfigError("window length must be >= " + std::to_string(min_n) + " for " +
                          std::to_string(drift_arity) + " drift parameter(s), got " +
                          std::to_string(n));
    if (start + n > data.size())
        throw ConfigError("window " + std::to_string(start + 1) + " of length " +
                          std::to_string(n) + " exceeds the " + std::to_string(data.size()) +
                          " observations");
}

// Columns of the drift least-squares problem over window steps
// i = start .. start+n-2: design c_j[i] = phi_j(t_i,x_i) dt_i and response
// r[i] = dx_i - offset(t_i,x_i) dt_i.
struct DriftColumns {
    std::array<std::vector<double>, 2> c;
    std::vector<double> r;
    std::size_t arity = 0;
};

DriftColumns drift_columns(const ModelSpec& model, const TimeSeries& data, std::size_t start,
                           std::size_t n) {
    DriftColumns cols;
    cols.arity = model.drift_arity();
    const std::size_t steps = n - 1;
    for (std::size_t j = 0; j < cols.arity; ++j) cols.c[j].resize(steps);
    cols.r.resize(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const std::size_t k = start + i;
        const double t = data.t(k);
        const double x = data.x(k);
        const double dt = data.grid.dt(k);
        const DriftBasis basis = drift_basis(model, t, x);
        for (std::size_t j = 0; j < cols.arity; ++j) cols.c[j][i] = basis.phi[j] * dt;
        cols.r[i] = (data.x(k + 1) - x) - basis.offset * dt;
    }
    return cols;
}

} // namespace

DriftSolution estimate_drift_window(const ModelSpec& model, const TimeSeries& data,
                                    std::size_t start, std::size_t n) {
    check_window(data, start, n, model.drift_arity());
    const DriftColumns cols = drift_columns(model, data, start, n);
    const std::size_t p = cols.arity;

    std::vector<double> normal(p * p);
    std::vector<double> rhs(p);
    for (std::size_t a = 0; a < p; ++a) {
        rhs[a] = kernels::dot(cols.c[a], cols.r);
        for (std::size_t b = 0; b < p; ++b) normal[a * p + b] = kernels::dot(cols.c[a], cols.c[b]);
    }

    DriftSolution sol;
    try {
        detail::solve_inplace(normal, rhs, sol.mu, p);
    } catch (const NumericalError&) {
        throw NumericalError("singular drift system in window " + std::to_string(start + 1) +
                             " (regressors are linearly dependent)");
    }

    std::vector<double> pred(cols.r.size(), 0.0);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < pred.size(); ++i) pred[i] += cols.c[j][i] * sol.mu[j];
    sol.rss = kernels::sum_sq_diff(cols.r, pred);
    return sol;
}

DiffusionSolution estimate_diffusion_window(const ModelSpec& model, const TimeSeries& data,
                                            std::size_t start, std::size_t n,
                                            std::span<const double> mu) {
    check_window(data, start, n, model.drift_arity());
    const double rss = drift_objective(model, data, start, n, mu);

    const std::size_t steps = n - 1;
    std::vector<double> shape_dt(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const std::size_t k = start + i;
        shape_dt[i] = diffusion_shape(model, data.t(k), data.x(k)) * data.grid.dt(k);
    }
    const double denom = kernels::dot(shape_dt, shape_dt);
    if (!(denom > 0.0))
        throw NumericalError("degenerate diffusion window " + std::to_string(start + 1) +
                             ": sum(g0^2 dt^2) = 0");

    const double moment = rss / denom;
    DiffusionSolution sol;
    sol.clamped = moment < 0.0;
    const double root = std::sqrt(std::max(moment, 0.0));
    if (model.family == ModelFamily::affine_drift_split_diff)
        sol.sigma = {model.split_weights[0] * root, model.split_weights[1] * root};
    else
        sol.sigma = {root};
    return sol;
}

double drift_objective(const ModelSpec& model, const TimeSeries& data, std::size_t start,
                       std::size_t n, std::span<const double> mu) {
    check_window(data, start, n, model.drift_arity());
    double acc = 0.0;
    for (std::size_t k = start; k + 1 < start + n; ++k) {
        const double dt = data.grid.dt(k);
        const double resid =
            (data.x(k + 1) - data.x(k)) - drift_eval(model, data.t(k), data.x(k), mu) * dt;
        acc += resid * resid;
    }
    return acc;
}

SlidingResult sliding_estimates(const ModelSpec& model, const TimeSeries& data,
                                const WindowConfig& cfg) {
    if (cfg.stride < 1) throw ConfigError("window stride must be >= 1");
    if (cfg.n > data.size())
        throw ConfigError("window length " + std::to_string(cfg.n) + " exceeds the " +
                          std::to_string(data.size()) + " observations");
    check_window(data, 0, cfg.n, model.drift_arity());

    SlidingResult result;
    for (std::size_t start = 0; start + cfg.n <= data.size(); start += cfg.stride) {
        try {
            const DriftSolution drift = estimate_drift_window(model, data, start, cfg.n);
            const DiffusionSolution diff =
                estimate_diffusion_window(model, data, start, cfg.n, drift.mu);
            WindowEstimate est;
            est.window_index = start + 1;
            est.anchor_time = cfg.anchor == WindowAnchor::start
                                  ? data.t(start)
                                  : (data.t(start) + data.t(start + cfg.n - 1)) / 2.0;
            est.mu = drift.mu;
            est.sigma = diff.sigma;
            est.rss = drift.rss;
            est.clamped = diff.clamped;
            result.estimates.push_back(std::move(est));
        } catch (const NumericalError& e) {
            if (!cfg.fail_soft) throw;
            result.failures.push_back({start + 1, e.what()});
        }
    }
    return result;
}

double drift_ratio_estimate(const TimeSeries& data, std::size_t start, std::size_t n) {
    check_window(data, start, n, 1);
    const std::size_t steps = n - 1;
    std::vector<double> dx(steps), dt(steps), x(steps), xdt(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const std::size_t k = start + i;
        dx[i] = data.x(k + 1) - data.x(k);
        dt[i] = data.grid.dt(k);
        x[i] = data.x(k);
        xdt[i] = x[i] * dt[i];
    }
    const double denom = kernels::dot(xdt, xdt);
    if (!(std::abs(denom) > 0.0))
        throw NumericalError("degenerate window " + std::to_string(start + 1) +
                             ": sum(x^2 dt^2) = 0");
    return kernels::dot3(dx, dt, x) / denom;
}

std::array<double, 2> drift_affine_estimate(const TimeSeries& data, std::size_t start,
                                            std::size_t n) {
    check_window(data, start, n, 2);
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t k = start; k + 1 < start + n; ++k) {
        const double dt = data.grid.dt(k);
        const double x = data.x(k);
        const double dx = data.x(k + 1) - x;
        a11 += dt * dt;
        a12 += x * dt * dt;
        a22 += x * x * dt * dt;
        b1 += dx * dt;
        b2 += x * dx * dt;
    }
    const double det = a11 * a22 - a12 * a12;
    if (!(std::abs(det) > 1e-13 * std::max(std::abs(a11 * a22), a12 * a12)))
        throw NumericalError("singular drift system in window " + std::to_string(start + 1) +
                             " (regressors are linearly dependent)");
    return {(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
}

double drift_scaled_affine_estimate(const ModelSpec& model, const TimeSeries& data,
                                    std::size_t start, std::size_t n) {
    if (model.family != ModelFamily::scaled_affine)
        throw ConfigError("closed form requires the scaled_affine family");
    check_window(data, start, n, 1);
    double num = 0.0, den = 0.0;
    for (std::size_t k = start; k + 1 < start + n; ++k) {
        const double dt = data.grid.dt(k);
        const double dx = data.x(k + 1) - data.x(k);
        num += (dx + model.k1 * data.x(k) * dt) * dt;
        den += dt * dt;
    }
    if (!(std::abs(model.k0 * den) > 0.0))
        throw NumericalError("singular drift system in window " + std::to_string(start + 1) +
                             " (k0 sum(dt^2) = 0)");
    return num / (model.k0 * den);
}

} // namespace udefit
