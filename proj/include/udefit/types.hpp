#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace udefit {

// Strictly increasing sequence of at least two observation times.  Steps need
// not be uniform; dt(i) is the forward difference t[i+1] - t[i].
class TimeGrid {
  public:
    explicit TimeGrid(std::vector<double> times);

    std::size_t size() const noexcept { return times_.size(); }
    double operator[](std::size_t i) const noexcept { return times_[i]; }
    double dt(std::size_t i) const noexcept { return times_[i + 1] - times_[i]; }
    const std::vector<double>& times() const noexcept { return times_; }

  private:
    std::vector<double> times_;
};

// Observations x_i aligned with a time grid of the same length.
struct TimeSeries {
    TimeGrid grid;
    std::vector<double> values;

    TimeSeries(TimeGrid g, std::vector<double> v);

    std::size_t size() const noexcept { return values.size(); }
    double t(std::size_t i) const noexcept { return grid[i]; }
    double x(std::size_t i) const noexcept { return values[i]; }
};

} // namespace udefit
