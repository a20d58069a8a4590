#include "fraclangevin/inverse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fraclangevin/errors.hpp"
#include "fraclangevin/mittag_leffler.hpp"

namespace fraclangevin::inverse {
namespace {

constexpr double kK0Scale = 1e-12;
constexpr double kSolvabilityTol = 1e-9;
constexpr double kIllConditioned = 1e-8;
constexpr double kFitMinLambda = 1e3;
constexpr double kFitFraction = 0.2;

// s^(a+b) E_{a,a+b+1}(-lambda s^a)
double source_kernel(double alpha, double beta, double lambda, double s) {
  return std::pow(s, alpha + beta) *
         ml::ml_value(alpha, alpha + beta + 1.0, lambda * std::pow(s, alpha));
}

// s^a E_{a,a+1}(-lambda s^a)
double velocity_kernel(double alpha, double lambda, double s) {
  const double sa = std::pow(s, alpha);
  return sa * ml::ml_value(alpha, alpha + 1.0, lambda * sa);
}

double k0_threshold(double alpha, double beta, double t0, double T) {
  return kK0Scale * (1.0 + std::pow(t0, alpha + beta) + std::pow(T, alpha + beta));
}

struct Numerator {
  double value;
  double scale;
};

Numerator numerator_parts(const InverseSpec& spec, std::size_t i) {
  const auto& fw = spec.forward;
  const double lambda = fw.spectrum.lambda(i);
  const double d = 1.0 - fw.gamma;
  const double kT = velocity_kernel(fw.alpha, lambda, fw.T);
  const double k0 = d * velocity_kernel(fw.alpha, lambda, spec.t0);
  const double a = d * spec.omega[i];
  const double p = fw.phi[i];
  const double s = fw.psi[i] * (kT - k0);
  return {a - p + s,
          1.0 + std::abs(a) + std::abs(p) + std::abs(fw.psi[i]) * (std::abs(kT) + std::abs(k0))};
}

}  // namespace

void InverseSpec::validate() const {
  forward.spectrum.check(forward.phi, "phi");
  forward.spectrum.check(forward.psi, "psi");
  forward.spectrum.check(omega, "omega");
  if (!(forward.alpha > 0.0 && forward.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(forward.beta > 0.0 && forward.beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  if (!std::isfinite(forward.gamma)) throw DomainError("gamma must be finite");
  if (!(forward.T > 0.0) || !std::isfinite(forward.T)) throw DomainError("T must be positive");
  if (!(t0 > 0.0 && t0 < forward.T)) throw DomainError("t0 must lie in (0, T)");
  for (double v : omega) {
    if (!std::isfinite(v)) throw DomainError("omega has a non-finite coefficient");
  }
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::GammaAboveOne:
      return "gamma_above_one";
    case Regime::GammaBelowOneStrict:
      return "gamma_below_one_strict";
    case Regime::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

double delta_k(double alpha, double beta, double gamma, double t0, double T, double lambda) {
  if (!(t0 > 0.0 && t0 < T)) throw DomainError("delta_k needs 0 < t0 < T");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("eigenvalue must be positive");
  return (1.0 - gamma) * source_kernel(alpha, beta, lambda, t0) -
         source_kernel(alpha, beta, lambda, T);
}

InverseClassification classify(const InverseSpec& spec) {
  spec.validate();
  const auto& fw = spec.forward;
  InverseClassification c;
  if (fw.gamma > 1.0) {
    c.regime = Regime::GammaAboveOne;
  } else if (fw.gamma < 1.0 &&
             std::pow(fw.T, fw.beta) < std::pow(spec.t0, fw.beta) * std::abs(fw.gamma - 1.0)) {
    c.regime = Regime::GammaBelowOneStrict;
  } else {
    c.regime = Regime::Degenerate;
  }
  c.lower_bound_power = (c.regime == Regime::Degenerate) ? 2 : 1;
  c.k0_threshold = k0_threshold(fw.alpha, fw.beta, spec.t0, fw.T);

  const auto lambda = fw.spectrum.eigenvalues();
  c.delta_values.resize(lambda.size());
  c.lower_bound_constant = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double d = delta_k(fw.alpha, fw.beta, fw.gamma, spec.t0, fw.T, lambda[i]);
    c.delta_values[i] = d;
    if (std::abs(d) <= c.k0_threshold) {
      c.K0.push_back(i);
      continue;
    }
    c.lower_bound_constant =
        std::min(c.lower_bound_constant, std::pow(lambda[i], c.lower_bound_power) * std::abs(d));
  }
  if (!std::isfinite(c.lower_bound_constant)) c.lower_bound_constant = 0.0;
  return c;
}

double solvability_numerator(const InverseSpec& spec, std::size_t i) {
  return numerator_parts(spec, i).value;
}

InverseResult recover_source(const InverseSpec& spec) {
  spec.validate();
  const auto& fw = spec.forward;
  if (std::abs(1.0 - fw.gamma) < forward::kGammaTolerance) {
    throw DegenerateGamma("gamma = 1: solution not unique");
  }
  InverseResult out;
  out.classification = classify(spec);
  const std::size_t n = fw.modes();
  out.f = CoeffVector::zeros(n);
  out.condition_numbers.resize(n);
  const double scale = 1.0 + std::pow(spec.t0, fw.alpha + fw.beta) +
                       std::pow(fw.T, fw.alpha + fw.beta);

  std::size_t next_k0 = 0;
  const auto& K0 = out.classification.K0;
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = out.classification.delta_values[i];
    const Numerator num = numerator_parts(spec, i);
    if (next_k0 < K0.size() && K0[next_k0] == i) {
      ++next_k0;
      out.condition_numbers[i] = std::numeric_limits<double>::infinity();
      if (std::abs(num.value) > kSolvabilityTol * num.scale) {
        throw Unsolvable("inverse problem unsolvable: solvability condition fails at k = " +
                             std::to_string(i + 1),
                         i);
      }
      out.free_indices.push_back(i);
      continue;
    }
    out.f[i] = num.value / delta;
    out.condition_numbers[i] = scale / std::abs(delta);
    const double lambda = fw.spectrum.lambda(i);
    if (std::abs(delta) < kIllConditioned / (lambda * lambda)) {
      out.warnings.push_back({i, delta, out.condition_numbers[i]});
    }
  }
  out.unique = out.free_indices.empty();
  return out;
}

forward::ProblemSpec with_source(const InverseSpec& spec, const CoeffVector& f) {
  forward::ProblemSpec p = spec.forward;
  p.source = forward::ConstantInTime{f};
  return p;
}

double observation_residual(const InverseSpec& spec, const CoeffVector& f) {
  const forward::ProblemSpec p = with_source(spec, f);
  const double grid[] = {spec.t0};
  const auto sol = forward::solve_forward(p, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < p.modes(); ++i) {
    const double r = sol.values[i][0] - spec.omega[i];
    s += r * r;
  }
  return std::sqrt(s);
}

double P_formula(double alpha, double beta, double t0, double T) {
  return -(std::tgamma(beta + 1.0) / std::tgamma(beta - alpha + 1.0)) *
         (std::pow(t0, -alpha) - std::pow(T, -alpha));
}

AsymptoticDiagnostic asymptotic_ratio_diagnostic(double alpha, double beta, double t0, double T,
                                                 const spectral::SpectrumSpec& spectrum) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw DomainError("alpha and beta must lie in (0, 1)");
  }
  if (!(t0 > 0.0 && t0 < T)) throw DomainError("diagnostic needs 0 < t0 < T");
  AsymptoticDiagnostic d;
  d.P_formula = P_formula(alpha, beta, t0, T);
  d.reduced_confidence = beta <= alpha;

  const auto lambda = spectrum.eigenvalues();
  const std::size_t n = lambda.size();
  const auto first = static_cast<std::size_t>(std::floor((1.0 - kFitFraction) * n));
  for (std::size_t i = first; i < n; ++i) {
    if (lambda[i] >= kFitMinLambda) d.fit_indices.push_back(i);
  }
  if (d.fit_indices.size() < 3) {
    throw InsufficientSpectrum("asymptotic fit needs at least 3 eigenvalues >= 1e3 in the top 20% "
                               "of the spectrum, found " +
                               std::to_string(d.fit_indices.size()));
  }

  // Weighted least squares for r = rho (1 + P / lambda), weights lambda^2.
  const double rho = std::pow(t0 / T, beta);
  std::vector<double> y;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i : d.fit_indices) {
    const double l = lambda[i];
    const double r = source_kernel(alpha, beta, l, t0) / source_kernel(alpha, beta, l, T);
    const double basis = rho / l;
    num += l * l * basis * (r - rho);
    den += l * l * basis * basis;
    y.push_back(l * (r / rho - 1.0));
  }
  d.P_fit = num / den;
  for (double v : y) d.residuals.push_back(v - d.P_fit);
  d.relative_gap = std::abs(d.P_fit - d.P_formula) / std::abs(d.P_formula);
  return d;
}

}  // namespace fraclangevin::inverse
