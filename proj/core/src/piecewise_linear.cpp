#include "fraclangevin/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>

#include "fraclangevin/errors.hpp"

namespace fraclangevin {

PiecewiseLinear::PiecewiseLinear(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size()) {
    throw DomainError("sample table needs matching, non-empty time and value columns");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) {
      throw DomainError("sample table contains a non-finite entry");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw DomainError("sample times must be strictly increasing");
    }
  }
}

double PiecewiseLinear::operator()(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double w = (t - times_[j]) / (times_[j + 1] - times_[j]);
  return values_[j] + w * (values_[j + 1] - values_[j]);
}

}  // namespace fraclangevin
