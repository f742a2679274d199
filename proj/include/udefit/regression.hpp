#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace udefit {

enum class FamilyKind { linear, exponential, logistic_growth, logistic_decay, gaussian };

std::string_view family_kind_name(FamilyKind kind) noexcept;
FamilyKind parse_family_kind(std::string_view name);

// Parametric trajectory families:
//   linear           beta0 + beta1 t
//   exponential      beta0 exp(-beta1 t)
//   logistic_growth  K / (1 + beta0 exp(-beta1 t)),  ceiling K fixed
//   logistic_decay   A / (1 + beta0 exp(+beta1 t)),  numerator A fixed
//   gaussian         beta0 exp(-((t - beta1)/beta2)^2)
struct RegressionFamily {
    FamilyKind kind = FamilyKind::linear;
    double fixed = 0.0; // K or A for the logistic kinds, unused otherwise

    static RegressionFamily linear();
    static RegressionFamily exponential();
    static RegressionFamily logistic_growth(double ceiling);
    static RegressionFamily logistic_decay(double numerator);
    static RegressionFamily gaussian();

    std::size_t param_count() const noexcept;
    std::string_view name() const noexcept;
};

struct RegressionFit {
    RegressionFamily family;
    std::vector<double> beta;
    double r_squared = 0.0;     // SSR/SST; may exceed 1 for nonlinear fits
    double r_squared_alt = 0.0; // 1 - SSE/SST, secondary diagnostic
    int iterations = 0;
    bool converged = false;
    double final_max_step = 0.0;
};

struct GaussNewtonConfig {
    std::vector<double> beta_init; // empty: default initialization from the data
    double epsilon = 1e-8;         // stop when the max applied step falls below
    int max_iter = 100;
    bool damping = false; // step halving, up to 20 halvings per iteration
};

// Evaluates the family at t.  Exponent arguments are clamped so the result is
// always finite; *saturated (when given) reports whether clamping fired.
double eval_family(const RegressionFamily& family, std::span<const double> beta, double t,
                   bool* saturated = nullptr);

// Analytic partial derivatives with respect to beta, written to out.
void family_gradient(const RegressionFamily& family, std::span<const double> beta, double t,
                     std::span<double> out);

// Data-driven starting point: linear/exponential/logistic kinds from a
// (transformed) least-squares line, gaussian from peak location and width.
std::vector<double> default_init(const RegressionFamily& family, std::span<const double> t,
                                 std::span<const double> y);

RegressionFit fit_linear_ols(std::span<const double> t, std::span<const double> y);

RegressionFit gauss_newton_fit(const RegressionFamily& family, std::span<const double> t,
                               std::span<const double> y, const GaussNewtonConfig& cfg);

// SSR/SST about the mean of y; the residual variant is 1 - SSE/SST.
double r_squared(std::span<const double> t, std::span<const double> y,
                 const RegressionFamily& family, std::span<const double> beta);
double r_squared_residual(std::span<const double> t, std::span<const double> y,
                          const RegressionFamily& family, std::span<const double> beta);

// Central differences, row-major (t.size() rows, param_count columns).
std::vector<double> finite_difference_jacobian(const RegressionFamily& family,
                                               std::span<const double> beta,
                                               std::span<const double> t, double h);

} // namespace udefit
