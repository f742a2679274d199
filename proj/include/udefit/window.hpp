#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "udefit/model.hpp"
#include "udefit/types.hpp"

namespace udefit {

// Anchor start stamps each estimate with the window's first observation time;
// center uses the midpoint of the window's time span.
enum class WindowAnchor { start, center };

struct WindowConfig {
    std::size_t n = 0;      // observations per window
    std::size_t stride = 1; // distance between window starts
    WindowAnchor anchor = WindowAnchor::start;
    bool fail_soft = false; // record failed windows and continue
};

struct WindowEstimate {
    std::size_t window_index = 0; // 1-based start position m
    double anchor_time = 0.0;
    std::vector<double> mu;
    std::vector<double> sigma;
    double rss = 0.0;     // drift residual sum of squares
    bool clamped = false; // negative moment ratio clamped to zero
};

struct WindowFailure {
    std::size_t window_index = 0;
    std::string message;
};

struct SlidingResult {
    std::vector<WindowEstimate> estimates;
    std::vector<WindowFailure> failures; // populated only in fail-soft mode
};

struct DriftSolution {
    std::vector<double> mu;
    double rss = 0.0;
};

struct DiffusionSolution {
    std::vector<double> sigma;
    bool clamped = false;
};

// All window positions below are 0-based indices of the window's first
// observation; reported window_index values and error messages are 1-based.

// Least-squares drift parameters over observations [start, start+n): the
// exact normal-equations minimizer of the squared Euler residuals.
DriftSolution estimate_drift_window(const ModelSpec& model, const TimeSeries& data,
                                    std::size_t start, std::size_t n);

// Moment-matched diffusion parameters: the residual sum of squares at mu is
// equated to sum(g^2 dt^2), giving M = rss / sum(g0^2 dt^2); scalar families
// return sqrt(max(M,0)), the split family distributes sqrt(M) by its weights.
DiffusionSolution estimate_diffusion_window(const ModelSpec& model, const TimeSeries& data,
                                            std::size_t start, std::size_t n,
                                            std::span<const double> mu);

// The drift objective sum((dx_i - f(t_i,x_i;mu) dt_i)^2), evaluated
// independently of the solver so brute-force minimizers can serve as oracles.
double drift_objective(const ModelSpec& model, const TimeSeries& data, std::size_t start,
                       std::size_t n, std::span<const double> mu);

SlidingResult sliding_estimates(const ModelSpec& model, const TimeSeries& data,
                                const WindowConfig& cfg);

// Specialized closed forms, kept as independent cross-checks of the generic
// normal-equations path.

// multiplicative drift: mu = sum(dx dt x) / sum(x^2 dt^2)
double drift_ratio_estimate(const TimeSeries& data, std::size_t start, std::size_t n);

// affine drift: explicit 2x2 normal-matrix inverse
std::array<double, 2> drift_affine_estimate(const TimeSeries& data, std::size_t start,
                                            std::size_t n);

// scaled_affine drift: mu = sum((dx + k1 x dt) dt) / (k0 sum(dt^2))
double drift_scaled_affine_estimate(const ModelSpec& model, const TimeSeries& data,
                                    std::size_t start, std::size_t n);

} // namespace udefit
