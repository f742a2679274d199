#pragma once

#include <cmath>
#include <utility>

// Derivative-free 1-D minimizer used as an independent cross-check against
// the closed-form and normal-equation drift solutions.  Scans a uniform grid
// over [lo, hi], then repeatedly zooms into the best cell until the grid step
// drops to `resolution`.  Correct for unimodal objectives, which covers the
// drift objective: it is quadratic in each coefficient.

namespace testutil {

template <typename F>
double grid_minimize(F&& objective, double lo, double hi, double resolution) {
    constexpr int kCells = 400;
    double best = lo;
    double step = (hi - lo) / kCells;
    for (;;) {
        double best_val = objective(lo);
        best = lo;
        for (int i = 1; i <= kCells; ++i) {
            const double u = lo + step * i;
            const double v = objective(u);
            if (v < best_val) {
                best_val = v;
                best = u;
            }
        }
        if (step <= resolution) return best;
        lo = best - step;
        step = 2.0 * step / kCells;
        if (step < resolution) step = resolution;
    }
}

}  // namespace testutil
