#pragma once

#include <cstddef>

// Internal backend vtable for the reduction kernels. Each backend fills one
// of these; dispatch swaps the active table.
namespace udefit::kernels::detail {

struct Ops {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*dot3)(const double*, const double*, const double*, std::size_t);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    double (*sum_sq_dev)(const double*, std::size_t, double);
    double (*weighted_pow_sum)(const double*, const double*, std::size_t, int);
};

const Ops& scalar_ops() noexcept;

// Return nullptr when the backend is compiled out or the CPU lacks support.
const Ops* avx2_ops() noexcept;
const Ops* neon_ops() noexcept;

} // namespace udefit::kernels::detail
