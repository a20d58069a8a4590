#pragma once

// Inverse source problem: find a time-independent f from the extra
// observation u(t0) = omega. Per mode,
//   f_k Delta_k = (1 - gamma) omega_k - phi_k
//                 + psi_k (T^a E_{a,a+1}(-lambda_k T^a) - (1 - gamma) t0^a E_{a,a+1}(-lambda_k t0^a)).

#include <cstddef>
#include <string_view>
#include <vector>

#include "fraclangevin/forward_solver.hpp"

namespace fraclangevin::inverse {

using spectral::CoeffVector;

struct InverseSpec {
  /// The source field is ignored.
  forward::ProblemSpec forward;
  double t0 = 0.5;
  CoeffVector omega;

  /// Throws DomainError unless 0 < t0 < T; DimensionMismatch for omega.
  void validate() const;
};

enum class Regime { GammaAboveOne, GammaBelowOneStrict, Degenerate };

std::string_view to_string(Regime regime);

struct InverseClassification {
  Regime regime = Regime::GammaAboveOne;
  /// Mode indices (0-based) with |Delta_k| at or below k0_threshold.
  std::vector<std::size_t> K0;
  std::vector<double> delta_values;
  double k0_threshold = 0.0;
  /// min over k outside K0 of lambda_k^p |Delta_k|, p = lower_bound_power.
  double lower_bound_constant = 0.0;
  int lower_bound_power = 1;
};

/// Delta_k = (1 - gamma) t0^(a+b) E_{a,a+b+1}(-lambda t0^a) - T^(a+b) E_{a,a+b+1}(-lambda T^a).
/// Throws DomainError unless 0 < t0 < T and lambda > 0.
double delta_k(double alpha, double beta, double gamma, double t0, double T, double lambda);

/// Regime label from the predicate on (gamma, t0, T, beta); K0 is computed
/// numerically for every gamma <= 1, because Delta_k can only vanish when
/// (T/t0)^beta < 1 - gamma < (T/t0)^(alpha+beta).
InverseClassification classify(const InverseSpec& spec);

/// Right-hand side of f_k Delta_k = numerator_k.
double solvability_numerator(const InverseSpec& spec, std::size_t i);

struct IllConditioned {
  std::size_t index = 0;
  double delta = 0.0;
  double condition = 0.0;
};

struct InverseResult {
  CoeffVector f;
  InverseClassification classification;
  /// Members of K0 whose solvability condition holds; f is set to 0 there and
  /// any other value gives another solution.
  std::vector<std::size_t> free_indices;
  /// (1 + t0^(a+b) + T^(a+b)) / |Delta_k|; infinite on K0.
  std::vector<double> condition_numbers;
  std::vector<IllConditioned> warnings;
  bool unique = true;
};

/// Throws DegenerateGamma for gamma = 1 and Unsolvable when the numerator at
/// some k in K0 exceeds 1e-9 times its scale.
InverseResult recover_source(const InverseSpec& spec);

/// Forward problem with the given constant source.
forward::ProblemSpec with_source(const InverseSpec& spec, const CoeffVector& f);

/// ||u(t0) - omega|| for the forward solution driven by f.
double observation_residual(const InverseSpec& spec, const CoeffVector& f);

struct AsymptoticDiagnostic {
  double P_fit = 0.0;
  double P_formula = 0.0;
  /// |P_fit - P_formula| / |P_formula|.
  double relative_gap = 0.0;
  std::vector<std::size_t> fit_indices;
  /// lambda_k (r_k / (t0/T)^beta - 1) - P_fit on the fit window.
  std::vector<double> residuals;
  /// beta <= alpha: the 1/lambda correction is not the leading remainder
  /// structure and the fit tolerance is not asserted.
  bool reduced_confidence = false;
};

/// P with r_k = (t0/T)^beta (1 + P / lambda_k) + O(lambda_k^-2):
/// -(Gamma(beta+1)/Gamma(beta-alpha+1)) (t0^-alpha - T^-alpha).
double P_formula(double alpha, double beta, double t0, double T);

/// Fits P over the top 20% of the spectrum restricted to lambda >= 1e3 with
/// weights lambda^2. Throws InsufficientSpectrum if fewer than 3 modes qualify.
AsymptoticDiagnostic asymptotic_ratio_diagnostic(double alpha, double beta, double t0, double T,
                                                 const spectral::SpectrumSpec& spectrum);

}  // namespace fraclangevin::inverse
