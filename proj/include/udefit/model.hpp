#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "udefit/regression.hpp"

namespace udefit {

// Supported UDE families dX = f(t,X;mu)dt + g(t,X;sigma)dC:
//   multiplicative           f = mu1 x,        g = sigma1 x
//   affine_drift_const_diff  f = mu1 + mu2 x,  g = sigma1
//   affine_drift_split_diff  f = mu1 + mu2 x,  g = (sigma1 + sigma2) x
//   scaled_affine            f = k0 mu1 - k1 x, g = sigma1
enum class ModelFamily {
    multiplicative,
    affine_drift_const_diff,
    affine_drift_split_diff,
    scaled_affine,
};

std::string_view model_family_name(ModelFamily family) noexcept;
ModelFamily parse_model_family(std::string_view name);

struct ModelSpec {
    ModelFamily family = ModelFamily::multiplicative;
    double k0 = 0.0; // scaled_affine drift scale
    double k1 = 0.0; // scaled_affine linear decay rate
    std::array<double, 2> split_weights{0.5, 0.5}; // affine_drift_split_diff only

    static ModelSpec multiplicative();
    static ModelSpec affine_drift_const_diff();
    static ModelSpec affine_drift_split_diff(double w1 = 0.5, double w2 = 0.5);
    static ModelSpec scaled_affine(double k0, double k1);

    std::size_t drift_arity() const noexcept;
    std::size_t diffusion_arity() const noexcept;
};

// Regressors of the drift, linear in mu: f(t,x;mu) = phi . mu + offset.
struct DriftBasis {
    std::array<double, 2> phi{0.0, 0.0};
    std::size_t arity = 0;
    double offset = 0.0;
};

DriftBasis drift_basis(const ModelSpec& model, double t, double x);
double drift_eval(const ModelSpec& model, double t, double x, std::span<const double> mu);

// Shape factor g0 with g(t,x;sigma) = (sum of sigma components) * g0(t,x).
double diffusion_shape(const ModelSpec& model, double t, double x);
double diffusion_eval(const ModelSpec& model, double t, double x, std::span<const double> sigma);

// A parameter vector as a function of time: either frozen constants or one
// fitted regression curve per component.
struct ParamTrajectory {
    std::vector<double> constants;
    std::vector<RegressionFit> fits; // used when constants is empty

    static ParamTrajectory constant(std::vector<double> values);
    static ParamTrajectory fitted(std::vector<RegressionFit> fits);

    bool is_constant() const noexcept { return fits.empty(); }
    std::size_t arity() const noexcept;
    double eval(double t, std::size_t component) const;
    void eval(double t, std::span<double> out) const;
};

} // namespace udefit
