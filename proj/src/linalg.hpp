#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "udefit/errors.hpp"

namespace udefit::detail {

// Solves the p x p system a * out = b by Gaussian elimination with partial
// pivoting; a (row-major) and b are destroyed.  Sized for the small normal
// systems here (p <= 4).  Throws NumericalError on a singular matrix.
inline void solve_inplace(std::vector<double>& a, std::vector<double>& b,
                          std::vector<double>& out, std::size_t p) {
    double maxabs = 0.0;
    for (std::size_t i = 0; i < p * p; ++i) maxabs = std::max(maxabs, std::abs(a[i]));

    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < p; ++row)
            if (std::abs(a[row * p + col]) > std::abs(a[pivot * p + col])) pivot = row;
        if (!(std::abs(a[pivot * p + col]) > 1e-13 * std::max(maxabs, 1e-300)))
            throw NumericalError("singular system (pivot " + std::to_string(col + 1) +
                                 " of " + std::to_string(p) + " vanishes)");
        if (pivot != col) {
            for (std::size_t k = col; k < p; ++k) std::swap(a[col * p + k], a[pivot * p + k]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < p; ++row) {
            const double factor = a[row * p + col] / a[col * p + col];
            a[row * p + col] = 0.0;
            for (std::size_t k = col + 1; k < p; ++k) a[row * p + k] -= factor * a[col * p + k];
            b[row] -= factor * b[col];
        }
    }
    out.resize(p);
    for (std::size_t row = p; row-- > 0;) {
        double acc = b[row];
        for (std::size_t k = row + 1; k < p; ++k) acc -= a[row * p + k] * out[k];
        out[row] = acc / a[row * p + row];
    }
}

} // namespace udefit::detail
