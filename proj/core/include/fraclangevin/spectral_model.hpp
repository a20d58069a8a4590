#pragma once

// The operator A is represented only through its eigenvalues lambda_1 <=
// lambda_2 <= ...; elements of H are coefficient vectors in the eigenbasis.
// Index i of every vector holds mode k = i + 1.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace fraclangevin::spectral {

/// Truncated Fourier coefficients h_k = (h, v_k), k = 1..N.
class CoeffVector {
 public:
  CoeffVector() = default;
  explicit CoeffVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  static CoeffVector zeros(std::size_t n) { return CoeffVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  std::span<const double> values() const noexcept { return coeffs_; }
  auto begin() const noexcept { return coeffs_.begin(); }
  auto end() const noexcept { return coeffs_.end(); }

  CoeffVector scaled(double factor) const;
  /// Element-wise sum; throws DimensionMismatch on length mismatch.
  CoeffVector plus(const CoeffVector& other) const;

  friend bool operator==(const CoeffVector&, const CoeffVector&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Explicitly listed eigenvalues (must be positive and non-decreasing).
struct ExplicitList {
  std::vector<double> values;
};

/// lambda_k = c * k^p.
struct PowerLaw {
  double c = 1.0;
  double p = 2.0;
};

class SpectrumSpec {
 public:
  using Kind = std::variant<ExplicitList, PowerLaw>;

  /// Throws DomainError if the list is empty, non-positive or decreasing, or
  /// shorter than the truncation.
  static SpectrumSpec explicit_list(std::vector<double> values);
  static SpectrumSpec explicit_list(std::vector<double> values, std::size_t truncation);
  /// Throws DomainError unless c > 0, p > 0 and truncation >= 1.
  static SpectrumSpec power_law(double c, double p, std::size_t truncation);
  /// lambda_k = k^2, the Dirichlet Laplacian on (0, pi).
  static SpectrumSpec dirichlet_laplacian(std::size_t truncation) {
    return power_law(1.0, 2.0, truncation);
  }

  std::size_t truncation() const noexcept { return eigenvalues_.size(); }
  const Kind& kind() const noexcept { return kind_; }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  /// Eigenvalue of mode k = i + 1.
  double lambda(std::size_t i) const { return eigenvalues_.at(i); }

  /// Throws DimensionMismatch if h does not have length truncation().
  void check(const CoeffVector& h, const char* what = "coefficient vector") const;

 private:
  SpectrumSpec(Kind kind, std::vector<double> eigenvalues)
      : kind_(std::move(kind)), eigenvalues_(std::move(eigenvalues)) {}

  Kind kind_;
  std::vector<double> eigenvalues_;
};

/// ||h||_eps^2 = sum_k lambda_k^(2 eps) |h_k|^2. eps = 0 gives the H-norm squared.
double sobolev_norm_sq(const SpectrumSpec& spec, const CoeffVector& h, double eps);

/// Plain H-norm sqrt(sum h_k^2).
double norm(const CoeffVector& h);

/// Coefficients of A^eps h, i.e. (lambda_k^eps h_k)_k.
CoeffVector apply_power(const SpectrumSpec& spec, const CoeffVector& h, double eps);

/// Decay rule h_k = c / k^p expanded to n coefficients.
CoeffVector decay_coefficients(double c, double p, std::size_t n);

}  // namespace fraclangevin::spectral
