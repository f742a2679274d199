#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "udefit/errors.hpp"
#include "udefit/regression.hpp"

using udefit::ConfigError;
using udefit::FamilyKind;
using udefit::GaussNewtonConfig;
using udefit::NumericalError;
using udefit::RegressionFamily;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * (double)i / (double)(n - 1);
    return v;
}

std::vector<double> eval_all(const RegressionFamily& family, const std::vector<double>& beta,
                             const std::vector<double>& t) {
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = udefit::eval_family(family, beta, t[i]);
    return y;
}

double sse(const RegressionFamily& family, const std::vector<double>& beta,
           const std::vector<double>& t, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - udefit::eval_family(family, beta, t[i]);
        acc += r * r;
    }
    return acc;
}

} // namespace

TEST_CASE("regression: family metadata") {
    CHECK(RegressionFamily::linear().param_count() == 2);
    CHECK(RegressionFamily::exponential().param_count() == 2);
    CHECK(RegressionFamily::logistic_growth(80.0).param_count() == 2);
    CHECK(RegressionFamily::logistic_decay(0.0198).param_count() == 2);
    CHECK(RegressionFamily::gaussian().param_count() == 3);

    for (FamilyKind k : {FamilyKind::linear, FamilyKind::exponential, FamilyKind::logistic_growth,
                         FamilyKind::logistic_decay, FamilyKind::gaussian}) {
        CHECK(udefit::parse_family_kind(udefit::family_kind_name(k)) == k);
    }
    CHECK_THROWS_AS(udefit::parse_family_kind("spline"), ConfigError);
    CHECK_THROWS_AS(RegressionFamily::logistic_growth(0.0), ConfigError);
    CHECK_THROWS_AS(RegressionFamily::logistic_decay(-2.0), ConfigError);
}

TEST_CASE("regression: family evaluations") {
    CHECK(udefit::eval_family(RegressionFamily::linear(), std::vector<double>{1.0, 2.0}, 3.0) ==
          7.0);
    CHECK(udefit::eval_family(RegressionFamily::gaussian(),
                              std::vector<double>{225.3, 0.1074, 0.1853}, 0.1074) == 225.3);
    CHECK(udefit::eval_family(RegressionFamily::logistic_growth(80.0),
                              std::vector<double>{1.0, 1.0}, 0.0) == 40.0);
    CHECK(udefit::eval_family(RegressionFamily::exponential(), std::vector<double>{2.0, 0.5},
                              2.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));

    // Logistic decay starts at A/(1+b0) and decreases toward zero.
    const RegressionFamily decay = RegressionFamily::logistic_decay(0.0198);
    const std::vector<double> beta = {0.2190, 0.2745};
    double prev = udefit::eval_family(decay, beta, 0.0);
    CHECK(prev == doctest::Approx(0.0198 / 1.2190).epsilon(1e-12));
    for (double t = 5.0; t <= 40.0; t += 5.0) {
        const double v = udefit::eval_family(decay, beta, t);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }

    CHECK_THROWS_AS(
        udefit::eval_family(RegressionFamily::linear(), std::vector<double>{1.0, 2.0, 3.0}, 0.0),
        ConfigError);
}

TEST_CASE("regression: exponent clamping keeps evaluations finite") {
    bool saturated = false;
    const double big = udefit::eval_family(RegressionFamily::exponential(),
                                           std::vector<double>{1.0, -10.0}, 100.0, &saturated);
    CHECK(std::isfinite(big));
    CHECK(saturated);

    saturated = false;
    const double tiny = udefit::eval_family(RegressionFamily::gaussian(),
                                            std::vector<double>{1.0, 0.0, 1e-4}, 50.0, &saturated);
    CHECK(std::isfinite(tiny));
    CHECK(tiny >= 0.0);
    CHECK(saturated);

    saturated = false;
    udefit::eval_family(RegressionFamily::linear(), std::vector<double>{1.0, 2.0}, 1e300,
                        &saturated);
    CHECK(!saturated); // no exponential involved
}

TEST_CASE("regression: ordinary least squares") {
    const std::vector<double> t = {0.0, 1.0, 2.0};
    const std::vector<double> y = {0.0, 1.0, 0.0};
    const auto fit = udefit::fit_linear_ols(t, y);
    CHECK(fit.beta[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(fit.beta[1] == doctest::Approx(0.0).epsilon(1e-15));
    // The fitted line is the mean, so the regression sum of squares vanishes.
    CHECK(fit.r_squared == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fit.r_squared_alt == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.converged);

    const std::vector<double> t2 = linspace(-1.0, 4.0, 12);
    std::vector<double> y2(t2.size());
    for (std::size_t i = 0; i < t2.size(); ++i) y2[i] = 1.0 + 2.0 * t2[i];
    const auto exact = udefit::fit_linear_ols(t2, y2);
    CHECK(exact.beta[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact.beta[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact.r_squared_alt == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(udefit::fit_linear_ols(std::vector<double>{1.0, 1.0, 1.0},
                                           std::vector<double>{1.0, 2.0, 3.0}),
                    NumericalError);
    CHECK_THROWS_AS(
        udefit::fit_linear_ols(std::vector<double>{1.0}, std::vector<double>{1.0}),
        ConfigError);
}

TEST_CASE("regression: gauss-newton on a linear family reproduces OLS") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> noise(-0.5, 0.5);
    const std::vector<double> t = linspace(0.0, 8.0, 30);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = 4.0 - 0.8 * t[i] + noise(rng);

    const auto ols = udefit::fit_linear_ols(t, y);
    for (const std::vector<double>& init :
         {std::vector<double>{}, std::vector<double>{0.0, 0.0}, std::vector<double>{100.0, -50.0}}) {
        CAPTURE(init.size());
        GaussNewtonConfig cfg;
        cfg.beta_init = init;
        const auto gn = udefit::gauss_newton_fit(RegressionFamily::linear(), t, y, cfg);
        CHECK(gn.converged);
        CHECK(std::abs(gn.beta[0] - ols.beta[0]) <= 1e-9);
        CHECK(std::abs(gn.beta[1] - ols.beta[1]) <= 1e-9);
        CHECK(gn.r_squared == doctest::Approx(ols.r_squared).epsilon(1e-9));
    }
}

TEST_CASE("regression: exact gaussian data converges immediately from its own start") {
    const std::vector<double> t = linspace(0.0, 2.0, 21);
    const std::vector<double> truth = {2.0, 1.0, 0.5};
    const RegressionFamily family = RegressionFamily::gaussian();
    const auto y = eval_all(family, truth, t);

    // The default initializer reads (height, center, half width) straight off
    // this data, so it starts at the exact optimum.
    const auto init = udefit::default_init(family, t, y);
    REQUIRE(init.size() == 3);
    CHECK(init[0] == 2.0);
    CHECK(init[1] == 1.0);
    CHECK(init[2] == 0.5);

    GaussNewtonConfig cfg;
    const auto fit = udefit::gauss_newton_fit(family, t, y, cfg);
    CHECK(fit.converged);
    CHECK(fit.iterations == 1);
    CHECK(fit.final_max_step == 0.0);
    CHECK(fit.beta[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.beta[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.beta[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("regression: gauss-newton recovers parameters from an offset start") {
    const std::vector<double> t = linspace(0.0, 2.0, 21);
    const RegressionFamily family = RegressionFamily::gaussian();
    const auto y = eval_all(family, {2.0, 1.0, 0.5}, t);

    GaussNewtonConfig cfg;
    cfg.beta_init = {1.4, 0.7, 0.8};
    cfg.damping = true;
    const auto fit = udefit::gauss_newton_fit(family, t, y, cfg);
    CHECK(fit.converged);
    CHECK(fit.beta[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(fit.beta[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.beta[2] == doctest::Approx(0.5).epsilon(1e-8));

    // Damped steps never increase the objective relative to the start.
    CHECK(sse(family, fit.beta, t, y) <= sse(family, cfg.beta_init, t, y));
}

TEST_CASE("regression: damped fits satisfy the stationarity condition") {
    // Deterministic pseudo-noise keeps the optimum away from the exact truth.
    const std::vector<double> t = linspace(0.0, 3.0, 25);
    const RegressionFamily family = RegressionFamily::gaussian();
    std::vector<double> y = eval_all(family, {3.0, 1.4, 0.6}, t);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.01 * std::sin(3.0 * (double)i);

    GaussNewtonConfig cfg;
    cfg.damping = true;
    const auto fit = udefit::gauss_newton_fit(family, t, y, cfg);
    REQUIRE(fit.converged);

    // Gradient of the squared loss at the solution: J^T r componentwise.
    std::vector<double> grad(3), jtr(3, 0.0);
    double jtj_norm = 0.0, beta_norm = 0.0;
    std::vector<double> jtj(9, 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - udefit::eval_family(family, fit.beta, t[i]);
        udefit::family_gradient(family, fit.beta, t[i], grad);
        for (std::size_t a = 0; a < 3; ++a) {
            jtr[a] += grad[a] * r;
            for (std::size_t b = 0; b < 3; ++b) jtj[a * 3 + b] += grad[a] * grad[b];
        }
    }
    for (std::size_t a = 0; a < 3; ++a) {
        beta_norm = std::max(beta_norm, std::abs(fit.beta[a]));
        double row = 0.0;
        for (std::size_t b = 0; b < 3; ++b) row += std::abs(jtj[a * 3 + b]);
        jtj_norm = std::max(jtj_norm, row);
    }
    for (std::size_t a = 0; a < 3; ++a) {
        CHECK(std::abs(jtr[a]) <= 1e-6 * (1.0 + jtj_norm * beta_norm));
    }
}

TEST_CASE("regression: analytic gradients match central differences") {
    struct Probe {
        RegressionFamily family;
        std::vector<double> beta;
    };
    const std::vector<Probe> probes = {
        {RegressionFamily::linear(), {0.7, -1.3}},
        {RegressionFamily::exponential(), {2.0, 0.5}},
        {RegressionFamily::logistic_growth(80.0), {1.5, 0.9}},
        {RegressionFamily::logistic_decay(0.0198), {0.219, 0.2745}},
        {RegressionFamily::gaussian(), {1.0, 0.3, 1.2}},
    };
    const std::vector<double> t = {-1.0, 0.0, 0.4, 1.7, 6.0};
    for (const auto& probe : probes) {
        CAPTURE(probe.family.name());
        const std::size_t p = probe.family.param_count();
        const auto fd = udefit::finite_difference_jacobian(probe.family, probe.beta, t, 1e-6);
        std::vector<double> grad(p);
        for (std::size_t i = 0; i < t.size(); ++i) {
            udefit::family_gradient(probe.family, probe.beta, t[i], grad);
            for (std::size_t a = 0; a < p; ++a) {
                CHECK(std::abs(fd[i * p + a] - grad[a]) <= 1e-6 * (1.0 + std::abs(grad[a])));
            }
        }
    }
}

TEST_CASE("regression: data-driven initialization") {
    const std::vector<double> t = linspace(0.0, 10.0, 15);

    std::vector<double> y_exp(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y_exp[i] = 3.0 * std::exp(-0.7 * t[i]);
    const auto init_exp = udefit::default_init(RegressionFamily::exponential(), t, y_exp);
    CHECK(init_exp[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(init_exp[1] == doctest::Approx(0.7).epsilon(1e-10));

    const RegressionFamily decay = RegressionFamily::logistic_decay(0.0198);
    const auto y_dec = eval_all(decay, {0.219, 0.2745}, t);
    const auto init_dec = udefit::default_init(decay, t, y_dec);
    CHECK(init_dec[0] == doctest::Approx(0.219).epsilon(1e-9));
    CHECK(init_dec[1] == doctest::Approx(0.2745).epsilon(1e-9));

    const RegressionFamily growth = RegressionFamily::logistic_growth(80.0);
    const auto y_gro = eval_all(growth, {5.0, 0.8}, t);
    const auto init_gro = udefit::default_init(growth, t, y_gro);
    CHECK(init_gro[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(init_gro[1] == doctest::Approx(0.8).epsilon(1e-9));

    // Gaussian width falls back to a quarter of the span when the data never
    // drops below half the peak.
    const std::vector<double> t3 = {0.0, 1.0, 2.0};
    const std::vector<double> y3 = {4.0, 3.9, 3.8};
    const auto init_flat = udefit::default_init(RegressionFamily::gaussian(), t3, y3);
    CHECK(init_flat[0] == 4.0);
    CHECK(init_flat[1] == 0.0);
    CHECK(init_flat[2] == 0.5);

    // Initialization transforms need enough usable points.
    CHECK_THROWS_AS(udefit::default_init(RegressionFamily::exponential(), t3,
                                         std::vector<double>{-1.0, -2.0, 1.0}),
                    NumericalError);
    CHECK_THROWS_AS(udefit::default_init(decay, t3, std::vector<double>{1.0, 2.0, 3.0}),
                    NumericalError);
}

TEST_CASE("regression: failure modes") {
    const std::vector<double> t = linspace(0.0, 1.0, 8);
    const std::vector<double> flat(t.size(), 2.5);
    CHECK_THROWS_AS(
        udefit::r_squared(t, flat, RegressionFamily::linear(), std::vector<double>{2.5, 0.0}),
        NumericalError);

    GaussNewtonConfig cfg;
    const std::vector<double> y = {0.1, 0.2, 0.35, 0.5, 0.6, 0.7, 0.75, 0.78};
    cfg.beta_init = {0.0, 1.0}; // zero scale kills the second gradient column
    try {
        udefit::gauss_newton_fit(RegressionFamily::logistic_growth(1.0), t, y, cfg);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("iteration 1") != std::string::npos);
    }

    GaussNewtonConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(udefit::gauss_newton_fit(RegressionFamily::linear(), t, y, bad), ConfigError);
    bad = GaussNewtonConfig{};
    bad.max_iter = 0;
    CHECK_THROWS_AS(udefit::gauss_newton_fit(RegressionFamily::linear(), t, y, bad), ConfigError);
    bad = GaussNewtonConfig{};
    bad.beta_init = {1.0, std::nan("")};
    CHECK_THROWS_AS(udefit::gauss_newton_fit(RegressionFamily::linear(), t, y, bad), ConfigError);
    bad = GaussNewtonConfig{};
    bad.beta_init = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(udefit::gauss_newton_fit(RegressionFamily::linear(), t, y, bad), ConfigError);

    CHECK_THROWS_AS(udefit::gauss_newton_fit(RegressionFamily::gaussian(),
                                             std::vector<double>{0.0, 1.0, 2.0},
                                             std::vector<double>{1.0, 2.0, 1.0},
                                             GaussNewtonConfig{}),
                    ConfigError);

    CHECK_THROWS_AS(udefit::finite_difference_jacobian(RegressionFamily::linear(),
                                                       std::vector<double>{1.0, 2.0}, t, 0.0),
                    ConfigError);
}
