#include "udefit/model.hpp"

#include <cmath>
#include <string>

#include "udefit/errors.hpp"

namespace udefit {

std::string_view model_family_name(ModelFamily family) noexcept {
    switch (family) {
        case ModelFamily::multiplicative: return "multiplicative";
        case ModelFamily::affine_drift_const_diff: return "affine_drift_const_diff";
        case ModelFamily::affine_drift_split_diff: return "affine_drift_split_diff";
        case ModelFamily::scaled_affine: return "scaled_affine";
    }
    return "unknown";
}

ModelFamily parse_model_family(std::string_view name) {
    if (name == "multiplicative") return ModelFamily::multiplicative;
    if (name == "affine_drift_const_diff") return ModelFamily::affine_drift_const_diff;
    if (name == "affine_drift_split_diff") return ModelFamily::affine_drift_split_diff;
    if (name == "scaled_affine") return ModelFamily::scaled_affine;
    throw ConfigError("unknown model family '" + std::string(name) +
                      "' (expected multiplicative, affine_drift_const_diff, "
                      "affine_drift_split_diff, or scaled_affine)");
}

ModelSpec ModelSpec::multiplicative() { return {ModelFamily::multiplicative, 0.0, 0.0, {}}; }

ModelSpec ModelSpec::affine_drift_const_diff() {
    return {ModelFamily::affine_drift_const_diff, 0.0, 0.0, {}};
}

ModelSpec ModelSpec::affine_drift_split_diff(double w1, double w2) {
    if (!std::isfinite(w1) || !std::isfinite(w2) || w1 < 0.0 || w1 > 1.0 || w2 < 0.0 || w2 > 1.0)
        throw ConfigError("split weights must lie in [0,1]");
    if (std::abs(w1 + w2 - 1.0) > 1e-12)
        throw ConfigError("split weights must sum to 1, got " + std::to_string(w1 + w2));
    return {ModelFamily::affine_drift_split_diff, 0.0, 0.0, {w1, w2}};
}

ModelSpec ModelSpec::scaled_affine(double k0, double k1) {
    if (!std::isfinite(k0) || !std::isfinite(k1))
        throw ConfigError("scaled_affine constants k0, k1 must be finite");
    return {ModelFamily::scaled_affine, k0, k1, {}};
}

std::size_t ModelSpec::drift_arity() const noexcept {
    switch (family) {
        case ModelFamily::multiplicative: return 1;
        case ModelFamily::affine_drift_const_diff: return 2;
        case ModelFamily::affine_drift_split_diff: return 2;
        case ModelFamily::scaled_affine: return 1;
    }
    return 0;
}

std::size_t ModelSpec::diffusion_arity() const noexcept {
    return family == ModelFamily::affine_drift_split_diff ? 2 : 1;
}

DriftBasis drift_basis(const ModelSpec& model, double, double x) {
    switch (model.family) {
        case ModelFamily::multiplicative: return {{x, 0.0}, 1, 0.0};
        case ModelFamily::affine_drift_const_diff:
        case ModelFamily::affine_drift_split_diff: return {{1.0, x}, 2, 0.0};
        case ModelFamily::scaled_affine: return {{model.k0, 0.0}, 1, -model.k1 * x};
    }
    return {};
}

double drift_eval(const ModelSpec& model, double t, double x, std::span<const double> mu) {
    if (mu.size() != model.drift_arity())
        throw ConfigError("drift parameter arity mismatch: " +
                          std::string(model_family_name(model.family)) + " takes " +
                          std::to_string(model.drift_arity()) + ", got " +
                          std::to_string(mu.size()));
    const DriftBasis basis = drift_basis(model, t, x);
    double acc = 0.0;
    for (std::size_t j = 0; j < basis.arity; ++j) acc += basis.phi[j] * mu[j];
    return acc + basis.offset;
}

double diffusion_shape(const ModelSpec& model, double, double x) {
    switch (model.family) {
        case ModelFamily::multiplicative:
        case ModelFamily::affine_drift_split_diff: return x;
        case ModelFamily::affine_drift_const_diff:
        case ModelFamily::scaled_affine: return 1.0;
    }
    return 0.0;
}

double diffusion_eval(const ModelSpec& model, double t, double x, std::span<const double> sigma) {
    if (sigma.size() != model.diffusion_arity())
        throw ConfigError("diffusion parameter arity mismatch: " +
                          std::string(model_family_name(model.family)) + " takes " +
                          std::to_string(model.diffusion_arity()) + ", got " +
                          std::to_string(sigma.size()));
    double scale = 0.0;
    for (double s : sigma) scale += s;
    return scale * diffusion_shape(model, t, x);
}

ParamTrajectory ParamTrajectory::constant(std::vector<double> values) {
    if (values.empty()) throw ConfigError("constant trajectory needs at least one component");
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigError("constant trajectory values must be finite");
    ParamTrajectory traj;
    traj.constants = std::move(values);
    return traj;
}

ParamTrajectory ParamTrajectory::fitted(std::vector<RegressionFit> fits) {
    if (fits.empty()) throw ConfigError("fitted trajectory needs at least one component");
    ParamTrajectory traj;
    traj.fits = std::move(fits);
    return traj;
}

std::size_t ParamTrajectory::arity() const noexcept {
    return is_constant() ? constants.size() : fits.size();
}

double ParamTrajectory::eval(double t, std::size_t component) const {
    if (component >= arity())
        throw ConfigError("trajectory component " + std::to_string(component) +
                          " out of range (arity " + std::to_string(arity()) + ")");
    if (is_constant()) return constants[component];
    const RegressionFit& fit = fits[component];
    return eval_family(fit.family, fit.beta, t);
}

void ParamTrajectory::eval(double t, std::span<double> out) const {
    if (out.size() != arity()) throw ConfigError("trajectory output arity mismatch");
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = eval(t, j);
}

} // namespace udefit
