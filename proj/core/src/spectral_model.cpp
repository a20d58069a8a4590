#include "fraclangevin/spectral_model.hpp"

#include <cmath>
#include <string>

#include "fraclangevin/errors.hpp"

namespace fraclangevin::spectral {

CoeffVector CoeffVector::scaled(double factor) const {
  std::vector<double> out(coeffs_);
  for (double& v : out) v *= factor;
  return CoeffVector(std::move(out));
}

CoeffVector CoeffVector::plus(const CoeffVector& other) const {
  if (other.size() != size()) {
    throw DimensionMismatch("cannot add coefficient vectors of lengths " +
                            std::to_string(size()) + " and " + std::to_string(other.size()));
  }
  std::vector<double> out(coeffs_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other[i];
  return CoeffVector(std::move(out));
}

SpectrumSpec SpectrumSpec::explicit_list(std::vector<double> values) {
  const std::size_t n = values.size();
  return explicit_list(std::move(values), n);
}

SpectrumSpec SpectrumSpec::explicit_list(std::vector<double> values, std::size_t truncation) {
  if (truncation == 0) throw DomainError("spectrum truncation must be at least 1");
  if (values.size() < truncation) {
    throw DomainError("explicit spectrum lists " + std::to_string(values.size()) +
                      " eigenvalues but truncation is " + std::to_string(truncation));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw DomainError("eigenvalue " + std::to_string(i + 1) + " is not a positive finite number");
    }
    if (i > 0 && values[i] < values[i - 1]) {
      throw DomainError("eigenvalues must be non-decreasing (entry " + std::to_string(i + 1) + ")");
    }
  }
  std::vector<double> eig(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(truncation));
  return SpectrumSpec(ExplicitList{std::move(values)}, std::move(eig));
}

SpectrumSpec SpectrumSpec::power_law(double c, double p, std::size_t truncation) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("power-law scale c must be positive");
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("power-law exponent p must be positive");
  if (truncation == 0) throw DomainError("spectrum truncation must be at least 1");
  std::vector<double> eig(truncation);
  for (std::size_t i = 0; i < truncation; ++i) {
    eig[i] = c * std::pow(static_cast<double>(i + 1), p);
  }
  return SpectrumSpec(PowerLaw{c, p}, std::move(eig));
}

void SpectrumSpec::check(const CoeffVector& h, const char* what) const {
  if (h.size() != truncation()) {
    throw DimensionMismatch(std::string(what) + " has " + std::to_string(h.size()) +
                            " coefficients, spectrum truncation is " +
                            std::to_string(truncation()));
  }
}

double sobolev_norm_sq(const SpectrumSpec& spec, const CoeffVector& h, double eps) {
  spec.check(h);
  double sum = 0.0;
  const auto lambda = spec.eigenvalues();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double w = (eps == 0.0) ? 1.0 : std::pow(lambda[i], 2.0 * eps);
    sum += w * h[i] * h[i];
  }
  return sum;
}

double norm(const CoeffVector& h) {
  double sum = 0.0;
  for (double v : h) sum += v * v;
  return std::sqrt(sum);
}

CoeffVector apply_power(const SpectrumSpec& spec, const CoeffVector& h, double eps) {
  spec.check(h);
  if (eps == 0.0) return h;
  std::vector<double> out(h.size());
  const auto lambda = spec.eigenvalues();
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = std::pow(lambda[i], eps) * h[i];
  return CoeffVector(std::move(out));
}

CoeffVector decay_coefficients(double c, double p, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = c / std::pow(static_cast<double>(i + 1), p);
  return CoeffVector(std::move(out));
}

}  // namespace fraclangevin::spectral
