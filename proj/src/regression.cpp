#include "udefit/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linalg.hpp"
#include "udefit/errors.hpp"
#include "udefit/kernels.hpp"

namespace udefit {

namespace {

// exp with the argument clamped to the finite range of double; the clamp keeps
// Gauss-Newton trial steps evaluable instead of poisoning residuals with inf.
double safe_exp(double a, bool* saturated) {
    if (a > 350.0) {
        if (saturated) *saturated = true;
        a = 350.0;
    } else if (a < -745.0) {
        if (saturated) *saturated = true;
        a = -745.0;
    }
    return std::exp(a);
}

void check_arity(const RegressionFamily& family, std::size_t got) {
    if (got != family.param_count())
        throw ConfigError(std::string(family.name()) + " family takes " +
                          std::to_string(family.param_count()) + " parameters, got " +
                          std::to_string(got));
}

void check_lengths(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size())
        throw ConfigError("t and y lengths differ: " + std::to_string(t.size()) + " vs " +
                          std::to_string(y.size()));
}

// Least-squares line through (t, z); shared by fit_linear_ols and the
// transform-based initializers.  Throws when all t coincide.
struct Line {
    double intercept;
    double slope;
};

Line ols_line(std::span<const double> t, std::span<const double> z) {
    const std::size_t n = t.size();
    if (n < 2) throw ConfigError("least-squares line needs >= 2 points, got " + std::to_string(n));
    const double nn = static_cast<double>(n);
    const double st = kernels::sum(t);
    const double sz = kernels::sum(z);
    const double stt = kernels::dot(t, t);
    const double stz = kernels::dot(t, z);
    const double denom = nn * stt - st * st;
    const double scale = std::max(nn * stt, st * st);
    if (!(std::abs(denom) > 1e-13 * std::max(scale, 1.0)))
        throw NumericalError("least-squares line is singular: all t values coincide");
    const double slope = (nn * stz - st * sz) / denom;
    const double intercept = sz / nn - slope * st / nn;
    return {intercept, slope};
}

double sse_at(const RegressionFamily& family, std::span<const double> beta,
              std::span<const double> t, std::span<const double> y, bool* finite) {
    double acc = 0.0;
    *finite = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - eval_family(family, beta, t[i]);
        if (!std::isfinite(r)) {
            *finite = false;
            return acc;
        }
        acc += r * r;
    }
    return acc;
}

} // namespace

std::string_view family_kind_name(FamilyKind kind) noexcept {
    switch (kind) {
        case FamilyKind::linear: return "linear";
        case FamilyKind::exponential: return "exponential";
        case FamilyKind::logistic_growth: return "logistic_growth";
        case FamilyKind::logistic_decay: return "logistic_decay";
        case FamilyKind::gaussian: return "gaussian";
    }
    return "unknown";
}

FamilyKind parse_family_kind(std::string_view name) {
    if (name == "linear") return FamilyKind::linear;
    if (name == "exponential") return FamilyKind::exponential;
    if (name == "logistic_growth") return FamilyKind::logistic_growth;
    if (name == "logistic_decay") return FamilyKind::logistic_decay;
    if (name == "gaussian") return FamilyKind::gaussian;
    throw ConfigError("unknown regression family '" + std::string(name) +
                      "' (expected linear, exponential, logistic_growth, logistic_decay, "
                      "or gaussian)");
}

RegressionFamily RegressionFamily::linear() { return {FamilyKind::linear, 0.0}; }

RegressionFamily RegressionFamily::exponential() { return {FamilyKind::exponential, 0.0}; }

RegressionFamily RegressionFamily::logistic_growth(double ceiling) {
    if (!(ceiling > 0.0) || !std::isfinite(ceiling))
        throw ConfigError("logistic growth ceiling must be finite and > 0, got " +
                          std::to_string(ceiling));
    return {FamilyKind::logistic_growth, ceiling};
}

RegressionFamily RegressionFamily::logistic_decay(double numerator) {
    if (!(numerator > 0.0) || !std::isfinite(numerator))
        throw ConfigError("logistic decay numerator must be finite and > 0, got " +
                          std::to_string(numerator));
    return {FamilyKind::logistic_decay, numerator};
}

RegressionFamily RegressionFamily::gaussian() { return {FamilyKind::gaussian, 0.0}; }

std::size_t RegressionFamily::param_count() const noexcept {
    return kind == FamilyKind::gaussian ? 3 : 2;
}

std::string_view RegressionFamily::name() const noexcept {
    switch (kind) {
        case FamilyKind::linear: return "linear";
        case FamilyKind::exponential: return "exponential";
        case FamilyKind::logistic_growth: return "logistic_growth";
        case FamilyKind::logistic_decay: return "logistic_decay";
        case FamilyKind::gaussian: return "gaussian";
    }
    return "unknown";
}

double eval_family(const RegressionFamily& family, std::span<const double> beta, double t,
                   bool* saturated) {
    check_arity(family, beta.size());
    switch (family.kind) {
        case FamilyKind::linear: return beta[0] + beta[1] * t;
        case FamilyKind::exponential: return beta[0] * safe_exp(-beta[1] * t, saturated);
        case FamilyKind::logistic_growth:
            return family.fixed / (1.0 + beta[0] * safe_exp(-beta[1] * t, saturated));
        case FamilyKind::logistic_decay:
            return family.fixed / (1.0 + beta[0] * safe_exp(beta[1] * t, saturated));
        case FamilyKind::gaussian: {
            const double z = (t - beta[1]) / beta[2];
            return beta[0] * safe_exp(-z * z, saturated);
        }
    }
    throw ConfigError("unknown regression family");
}

void family_gradient(const RegressionFamily& family, std::span<const double> beta, double t,
                     std::span<double> out) {
    check_arity(family, beta.size());
    if (out.size() != family.param_count())
        throw ConfigError("gradient output length mismatch");
    switch (family.kind) {
        case FamilyKind::linear:
            out[0] = 1.0;
            out[1] = t;
            return;
        case FamilyKind::exponential: {
            const double e = safe_exp(-beta[1] * t, nullptr);
            out[0] = e;
            out[1] = -beta[0] * t * e;
            return;
        }
        case FamilyKind::logistic_growth: {
            const double e = safe_exp(-beta[1] * t, nullptr);
            const double den = 1.0 + beta[0] * e;
            out[0] = -family.fixed * e / (den * den);
            out[1] = family.fixed * beta[0] * t * e / (den * den);
            return;
        }
        case FamilyKind::logistic_decay: {
            const double e = safe_exp(beta[1] * t, nullptr);
            const double den = 1.0 + beta[0] * e;
            out[0] = -family.fixed * e / (den * den);
            out[1] = -family.fixed * beta[0] * t * e / (den * den);
            return;
        }
        case FamilyKind::gaussian: {
            const double z = (t - beta[1]) / beta[2];
            const double e = safe_exp(-z * z, nullptr);
            out[0] = e;
            out[1] = beta[0] * e * 2.0 * z / beta[2];
            out[2] = beta[0] * e * 2.0 * z * z / beta[2];
            return;
        }
    }
    throw ConfigError("unknown regression family");
}

std::vector<double> default_init(const RegressionFamily& family, std::span<const double> t,
                                 std::span<const double> y) {
    check_lengths(t, y);
    switch (family.kind) {
        case FamilyKind::linear: {
            const Line l = ols_line(t, y);
            return {l.intercept, l.slope};
        }
        case FamilyKind::exponential: {
            // ln y = ln b0 - b1 t on the positive observations
            std::vector<double> tt, z;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] > 0.0) {
                    tt.push_back(t[i]);
                    z.push_back(std::log(y[i]));
                }
            }
            if (tt.size() < 2)
                throw NumericalError("exponential initialization needs >= 2 positive values");
            const Line l = ols_line(tt, z);
            return {std::exp(l.intercept), -l.slope};
        }
        case FamilyKind::logistic_growth: {
            // ln(K/y - 1) = ln b0 - b1 t where 0 < y < K
            std::vector<double> tt, z;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] > 0.0 && y[i] < family.fixed) {
                    tt.push_back(t[i]);
                    z.push_back(std::log(family.fixed / y[i] - 1.0));
                }
            }
            if (tt.size() < 2)
                throw NumericalError("logistic growth initialization needs >= 2 interior values");
            const Line l = ols_line(tt, z);
            return {std::exp(l.intercept), -l.slope};
        }
        case FamilyKind::logistic_decay: {
            // ln(A/y - 1) = ln b0 + b1 t where 0 < y < A
            std::vector<double> tt, z;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] > 0.0 && y[i] < family.fixed) {
                    tt.push_back(t[i]);
                    z.push_back(std::log(family.fixed / y[i] - 1.0));
                }
            }
            if (tt.size() < 2)
                throw NumericalError("logistic decay initialization needs >= 2 interior values");
            const Line l = ols_line(tt, z);
            return {std::exp(l.intercept), l.slope};
        }
        case FamilyKind::gaussian: {
            // peak height, peak location, half width at half maximum to the right
            std::size_t peak = 0;
            for (std::size_t i = 1; i < y.size(); ++i)
                if (y[i] > y[peak]) peak = i;
            const double height = y[peak];
            const double center = t[peak];
            double width = 0.0;
            for (std::size_t j = peak; j < y.size(); ++j) {
                if (y[j] < height / 2.0) {
                    width = t[j] - center;
                    break;
                }
            }
            if (!(width > 0.0)) width = (t[t.size() - 1] - t[0]) / 4.0;
            return {height, center, width};
        }
    }
    throw ConfigError("unknown regression family");
}

RegressionFit fit_linear_ols(std::span<const double> t, std::span<const double> y) {
    check_lengths(t, y);
    const Line l = ols_line(t, y);
    RegressionFit fit;
    fit.family = RegressionFamily::linear();
    fit.beta = {l.intercept, l.slope};
    fit.r_squared = r_squared(t, y, fit.family, fit.beta);
    fit.r_squared_alt = r_squared_residual(t, y, fit.family, fit.beta);
    fit.iterations = 0;
    fit.converged = true;
    fit.final_max_step = 0.0;
    return fit;
}

RegressionFit gauss_newton_fit(const RegressionFamily& family, std::span<const double> t,
                               std::span<const double> y, const GaussNewtonConfig& cfg) {
    check_lengths(t, y);
    const std::size_t p = family.param_count();
    if (t.size() < p + 1)
        throw ConfigError("gauss-newton needs >= " + std::to_string(p + 1) + " points for the " +
                          std::string(family.name()) + " family, got " + std::to_string(t.size()));
    if (!(cfg.epsilon > 0.0))
        throw ConfigError("gauss-newton epsilon must be > 0, got " + std::to_string(cfg.epsilon));
    if (cfg.max_iter < 1)
        throw ConfigError("gauss-newton max_iter must be >= 1, got " +
                          std::to_string(cfg.max_iter));

    std::vector<double> beta = cfg.beta_init.empty() ? default_init(family, t, y) : cfg.beta_init;
    check_arity(family, beta.size());
    for (double b : beta)
        if (!std::isfinite(b)) throw ConfigError("gauss-newton initial beta must be finite");

    const std::size_t npts = t.size();
    std::vector<double> resid(npts), grad(p), normal(p * p), rhs(p), delta(p), trial(p);

    RegressionFit fit;
    fit.family = family;
    fit.converged = false;

    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        double sse0 = 0.0;
        std::fill(normal.begin(), normal.end(), 0.0);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (std::size_t i = 0; i < npts; ++i) {
            resid[i] = y[i] - eval_family(family, beta, t[i]);
            if (!std::isfinite(resid[i]))
                throw NumericalError("gauss-newton residual diverged at iteration " +
                                     std::to_string(it + 1) +
                                     "; try damping or a different initial beta");
            sse0 += resid[i] * resid[i];
            family_gradient(family, beta, t[i], grad);
            for (std::size_t a = 0; a < p; ++a) {
                rhs[a] += grad[a] * resid[i];
                for (std::size_t b = 0; b < p; ++b) normal[a * p + b] += grad[a] * grad[b];
            }
        }
        try {
            detail::solve_inplace(normal, rhs, delta, p);
        } catch (const NumericalError& e) {
            throw NumericalError("gauss-newton normal matrix is singular at iteration " +
                                 std::to_string(it + 1) + ": " + e.what());
        }

        double scale = 1.0;
        if (cfg.damping) {
            for (int halving = 0; halving < 20; ++halving) {
                for (std::size_t a = 0; a < p; ++a) trial[a] = beta[a] + scale * delta[a];
                bool finite = false;
                const double sse = sse_at(family, trial, t, y, &finite);
                if (finite && sse <= sse0) break;
                scale *= 0.5;
            }
        }
        double step = 0.0;
        for (std::size_t a = 0; a < p; ++a) {
            beta[a] += scale * delta[a];
            step = std::max(step, std::abs(scale * delta[a]));
        }
        fit.final_max_step = step;
        if (step < cfg.epsilon) {
            fit.converged = true;
            ++it;
            break;
        }
    }

    fit.beta = beta;
    fit.iterations = it;
    for (double b : beta)
        if (!std::isfinite(b))
            throw NumericalError("gauss-newton diverged to non-finite beta; "
                                 "try damping or a different initial beta");
    fit.r_squared = r_squared(t, y, family, beta);
    fit.r_squared_alt = r_squared_residual(t, y, family, beta);
    return fit;
}

double r_squared(std::span<const double> t, std::span<const double> y,
                 const RegressionFamily& family, std::span<const double> beta) {
    check_lengths(t, y);
    if (t.size() < 2) throw ConfigError("r_squared needs >= 2 points");
    const double ybar = kernels::sum(y) / static_cast<double>(y.size());
    const double sst = kernels::sum_sq_dev(y, ybar);
    if (!(sst > 0.0))
        throw NumericalError("r_squared undefined: observations are constant (SST = 0)");
    std::vector<double> yhat(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) yhat[i] = eval_family(family, beta, t[i]);
    const double ssr = kernels::sum_sq_dev(yhat, ybar);
    return ssr / sst;
}

double r_squared_residual(std::span<const double> t, std::span<const double> y,
                          const RegressionFamily& family, std::span<const double> beta) {
    check_lengths(t, y);
    if (t.size() < 2) throw ConfigError("r_squared needs >= 2 points");
    const double ybar = kernels::sum(y) / static_cast<double>(y.size());
    const double sst = kernels::sum_sq_dev(y, ybar);
    if (!(sst > 0.0))
        throw NumericalError("r_squared undefined: observations are constant (SST = 0)");
    std::vector<double> yhat(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) yhat[i] = eval_family(family, beta, t[i]);
    const double sse = kernels::sum_sq_diff(y, yhat);
    return 1.0 - sse / sst;
}

std::vector<double> finite_difference_jacobian(const RegressionFamily& family,
                                               std::span<const double> beta,
                                               std::span<const double> t, double h) {
    check_arity(family, beta.size());
    if (!(h > 0.0)) throw ConfigError("finite difference step must be > 0");
    const std::size_t p = family.param_count();
    std::vector<double> jac(t.size() * p);
    std::vector<double> plus(beta.begin(), beta.end());
    std::vector<double> minus(beta.begin(), beta.end());
    for (std::size_t a = 0; a < p; ++a) {
        plus[a] = beta[a] + h;
        minus[a] = beta[a] - h;
        for (std::size_t i = 0; i < t.size(); ++i)
            jac[i * p + a] =
                (eval_family(family, plus, t[i]) - eval_family(family, minus, t[i])) / (2.0 * h);
        plus[a] = beta[a];
        minus[a] = beta[a];
    }
    return jac;
}

} // namespace udefit
