#pragma once

#include <span>
#include <vector>

namespace fraclangevin {

/// Piecewise-linear interpolant through (times[i], values[i]); constant
/// extrapolation outside the table.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  /// Throws DomainError unless times are strictly increasing and the two
  /// arrays have equal, non-zero length.
  PiecewiseLinear(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace fraclangevin
