#include "udefit/simulate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "udefit/errors.hpp"
#include "udefit/uncertain.hpp"

namespace udefit {

namespace {

void check_trajectories(const ModelSpec& model, const ParamTrajectory& mu_traj,
                        const ParamTrajectory& sigma_traj) {
    if (mu_traj.arity() != model.drift_arity())
        throw ConfigError("mu trajectory arity " + std::to_string(mu_traj.arity()) +
                          " does not match model drift arity " +
                          std::to_string(model.drift_arity()));
    if (sigma_traj.arity() != model.diffusion_arity())
        throw ConfigError("sigma trajectory arity " + std::to_string(sigma_traj.arity()) +
                          " does not match model diffusion arity " +
                          std::to_string(model.diffusion_arity()));
}

// Shared stepper: noise(i) supplies the full noise term of step i.
template <typename NoiseFn>
TimeSeries integrate(const ModelSpec& model, const ParamTrajectory& mu_traj,
                     const ParamTrajectory& sigma_traj, double x0, const TimeGrid& grid,
                     NoiseFn&& noise) {
    if (!std::isfinite(x0)) throw ConfigError("initial state must be finite");
    std::vector<double> mu(model.drift_arity());
    std::vector<double> sigma(model.diffusion_arity());
    std::vector<double> values(grid.size());
    values[0] = x0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t = grid[i];
        const double x = values[i];
        const double dt = grid.dt(i);
        mu_traj.eval(t, std::span<double>(mu));
        sigma_traj.eval(t, std::span<double>(sigma));
        const double g = diffusion_eval(model, t, x, sigma);
        values[i + 1] = x + drift_eval(model, t, x, mu) * dt + noise(i, dt, g);
        if (!std::isfinite(values[i + 1]))
            throw NumericalError("state became non-finite at step " + std::to_string(i + 1) +
                                 " (t = " + std::to_string(grid[i + 1]) + ")");
    }
    return {grid, std::move(values)};
}

} // namespace

std::vector<double> uniform_alpha_stream(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<double> alphas(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        alphas[i] = std::min(std::max(u, 1e-9), 1.0 - 1e-9);
    }
    return alphas;
}

TimeSeries euler_simulate(const ModelSpec& model, const ParamTrajectory& mu_traj,
                          const ParamTrajectory& sigma_traj, double x0, const TimeGrid& grid,
                          std::span<const double> alphas) {
    check_trajectories(model, mu_traj, sigma_traj);
    if (alphas.size() != grid.size() - 1)
        throw ConfigError("alpha stream length " + std::to_string(alphas.size()) +
                          " does not match step count " + std::to_string(grid.size() - 1));
    return integrate(model, mu_traj, sigma_traj, x0, grid,
                     [&](std::size_t i, double dt, double g) {
                         return g * liu_increment(dt, alphas[i]);
                     });
}

TimeSeries alpha_path(const ModelSpec& model, const ParamTrajectory& mu_traj,
                      const ParamTrajectory& sigma_traj, double x0, const TimeGrid& grid,
                      double alpha) {
    check_trajectories(model, mu_traj, sigma_traj);
    const double rate = std_normal_inverse_cdf(alpha);
    return integrate(model, mu_traj, sigma_traj, x0, grid,
                     [&](std::size_t, double dt, double g) {
                         return std::abs(g) * (dt * rate);
                     });
}

} // namespace udefit
