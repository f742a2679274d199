#include "udefit/types.hpp"

#include <cmath>
#include <string>

#include "udefit/errors.hpp"

namespace udefit {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2)
        throw DataError("time grid needs at least 2 points, got " +
                        std::to_string(times_.size()));
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i]))
            throw DataError("non-finite time at index " + std::to_string(i));
        if (i > 0 && times_[i] <= times_[i - 1])
            throw DataError("times must be strictly increasing; violation at index " +
                            std::to_string(i) + " (" + std::to_string(times_[i - 1]) +
                            " -> " + std::to_string(times_[i]) + ")");
    }
}

TimeSeries::TimeSeries(TimeGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (grid.size() != values.size())
        throw DataError("series length " + std::to_string(values.size()) +
                        " does not match time grid length " + std::to_string(grid.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw DataError("non-finite observation at index " + std::to_string(i));
}

} // namespace udefit
