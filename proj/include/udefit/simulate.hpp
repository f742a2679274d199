#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "udefit/model.hpp"
#include "udefit/types.hpp"

namespace udefit {

// Seeded i.i.d. uniform(0,1) fractiles, clamped to [1e-9, 1-1e-9] so every
// draw is valid for the inverse distribution.  Deterministic per seed.
std::vector<double> uniform_alpha_stream(std::uint64_t seed, std::size_t count);

// Explicit Euler recursion
//   X_{i+1} = X_i + f(t_i,X_i;mu(t_i)) dt_i + g(t_i,X_i;sigma(t_i)) dC_i
// with dC_i the Liu increment at fractile alphas[i]; alphas has one entry per
// grid step.
TimeSeries euler_simulate(const ModelSpec& model, const ParamTrajectory& mu_traj,
                          const ParamTrajectory& sigma_traj, double x0, const TimeGrid& grid,
                          std::span<const double> alphas);

// Explicit Euler integration of the alpha-path ODE
//   dX = f(t,X;mu(t)) dt + |g(t,X;sigma(t))| invcdf(alpha) dt.
TimeSeries alpha_path(const ModelSpec& model, const ParamTrajectory& mu_traj,
                      const ParamTrajectory& sigma_traj, double x0, const TimeGrid& grid,
                      double alpha);

} // namespace udefit
