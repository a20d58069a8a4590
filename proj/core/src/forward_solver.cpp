#include "fraclangevin/forward_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclangevin/errors.hpp"
#include "fraclangevin/mittag_leffler.hpp"

namespace fraclangevin::forward {
namespace {

// tanh-sinh reports ~1e-13 absolute error on smooth unit-interval integrands.
constexpr double kQuadratureFloor = 1e-12;

ml::MlEvalResult ml_at(double alpha, double mu, double x) { return ml::ml_eval({alpha, mu}, x); }

double one_minus_gamma(const ProblemSpec& spec) {
  const double d = 1.0 - spec.gamma;
  if (std::abs(d) < kGammaTolerance) {
    throw DegenerateGamma("gamma = 1: solution not unique");
  }
  return d;
}

// psi-part of W at time t: t^alpha E_{alpha,alpha+1}(-lambda t^alpha).
ml::MlEvalResult velocity_kernel(double alpha, double lambda, double t) {
  if (t <= 0.0) return {0.0, ml::MlRegime::Series, 0, 0.0};
  const double ta = std::pow(t, alpha);
  auto r = ml_at(alpha, alpha + 1.0, lambda * ta);
  r.value *= ta;
  r.error_bound *= ta;
  return r;
}

std::vector<double> sampled_kinks(const PiecewiseLinear& f) {
  return {f.times().begin(), f.times().end()};
}

void check_grid(const ProblemSpec& spec, std::span<const double> t_grid) {
  if (t_grid.empty()) throw DomainError("time grid is empty");
  for (std::size_t m = 0; m < t_grid.size(); ++m) {
    const double t = t_grid[m];
    if (!(t >= 0.0) || !(t <= spec.T * (1.0 + 1e-14))) {
      throw DomainError("time grid node " + std::to_string(t) + " lies outside [0, T]");
    }
    if (m > 0 && !(t > t_grid[m - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

double tail_sum(const DataDecay& d, double n) {
  if (d.c == 0.0) return 0.0;
  if (!(d.p > 0.5)) return std::numeric_limits<double>::infinity();
  // sum_{k > n} k^-2p <= int_n^inf x^-2p dx
  return d.c * d.c * std::pow(n, 1.0 - 2.0 * d.p) / (2.0 * d.p - 1.0);
}

double vector_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

SampledSource SampledSource::from_table(const std::vector<double>& times,
                                        const std::vector<std::vector<double>>& values) {
  SampledSource out;
  out.modes.reserve(values.size());
  for (const auto& row : values) out.modes.emplace_back(times, row);
  return out;
}

void ProblemSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("T must be positive");
  spectrum.check(phi, "phi");
  spectrum.check(psi, "psi");
  for (double v : phi) {
    if (!std::isfinite(v)) throw DomainError("phi has a non-finite coefficient");
  }
  for (double v : psi) {
    if (!std::isfinite(v)) throw DomainError("psi has a non-finite coefficient");
  }
  if (const auto* c = std::get_if<ConstantInTime>(&source)) {
    spectrum.check(c->f, "f");
    for (double v : c->f) {
      if (!std::isfinite(v)) throw DomainError("f has a non-finite coefficient");
    }
  } else {
    const auto& s = std::get<SampledSource>(source);
    if (s.modes.size() != modes()) {
      throw DimensionMismatch("sampled source has " + std::to_string(s.modes.size()) +
                              " modes, spectrum truncation is " + std::to_string(modes()));
    }
    for (const auto& f : s.modes) {
      if (f.times().empty() || f.times().front() > 0.0 || f.times().back() < T) {
        throw DomainError("sampled source must cover [0, T]");
      }
    }
  }
}

double particular_quadrature(double alpha, double beta, double lambda,
                             const std::function<double(double)>& f, double t,
                             std::span<const double> kinks, double relative_tol) {
  if (t <= 0.0) return 0.0;
  const double ab = alpha + beta;
  const double inv_ab = 1.0 / ab;
  const double q = alpha / ab;
  // eta = t - s^(1/(alpha+beta)); the kernel becomes E_{alpha,alpha+beta}(-lambda s^q).
  auto integrand = [&](double s) {
    const double kernel = (s > 0.0) ? ml::ml_value(alpha, ab, lambda * std::pow(s, q))
                                    : ml::recip_gamma(ab);
    return kernel * f(t - std::pow(s, inv_ab));
  };

  std::vector<double> cuts{0.0, std::pow(t, ab)};
  for (double eta : kinks) {
    if (eta > 0.0 && eta < t) cuts.push_back(std::pow(t - eta, ab));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  double error = 0.0;
  double magnitude = 0.0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    // Each piece is mapped onto [0, 1]; the rules' error estimates carry an
    // absolute floor that would otherwise swamp pieces of tiny width.
    const double lo = cuts[j];
    const double width = cuts[j + 1] - cuts[j];
    auto unit = [&](double u) { return integrand(lo + width * u); };
    // The s^q kink at s = 0 can sit at or just outside a piece; tanh-sinh
    // clusters nodes at both endpoints and copes with either.
    thread_local boost::math::quadrature::tanh_sinh<double> rule;  // integrate() is non-const
    double err = 0.0;
    double l1 = 0.0;
    const double piece = rule.integrate(unit, 0.0, 1.0, relative_tol, &err, &l1);
    total += width * piece;
    error += width * err;
    magnitude += width * l1;
  }
  if (!std::isfinite(total) || error > 100.0 * relative_tol * magnitude + kQuadratureFloor) {
    throw QuadratureError("particular solution quadrature did not converge (error estimate " +
                          std::to_string(error) + ")");
  }
  return total * inv_ab;
}

double particular_mode(const ProblemSpec& spec, std::size_t i, double t) {
  if (!(t >= 0.0) || t > spec.T * (1.0 + 1e-14)) throw DomainError("t must lie in [0, T]");
  if (t == 0.0) return 0.0;
  const double lambda = spec.spectrum.lambda(i);
  if (const auto* c = std::get_if<ConstantInTime>(&spec.source)) {
    const double fk = c->f[i];
    if (fk == 0.0) return 0.0;
    return fk * std::pow(t, spec.alpha + spec.beta) *
           ml::ml_value(spec.alpha, spec.alpha + spec.beta + 1.0,
                        lambda * std::pow(t, spec.alpha));
  }
  const auto& f = std::get<SampledSource>(spec.source).modes.at(i);
  const auto kinks = sampled_kinks(f);
  return particular_quadrature(spec.alpha, spec.beta, lambda, std::cref(f), t, kinks);
}

double solve_b(const ProblemSpec& spec, std::size_t i, double Phi) {
  const double d = one_minus_gamma(spec);
  const double v = velocity_kernel(spec.alpha, spec.spectrum.lambda(i), spec.T).value;
  return (Phi - spec.psi[i] * v) / d;
}

ModeValue mode_trajectory(const ProblemSpec& spec, std::size_t i, double b, double t) {
  const double lambda = spec.spectrum.lambda(i);
  const double ta = std::pow(t, spec.alpha);
  const auto e1 = ml_at(spec.alpha, 1.0, lambda * ta);
  const auto e2 = velocity_kernel(spec.alpha, lambda, t);
  const double c2 = spec.psi[i] + lambda * b;
  return {b * e1.value + c2 * e2.value,
          std::abs(b) * e1.error_bound + std::abs(c2) * e2.error_bound};
}

ModeValue mode_trajectory_simplified(const ProblemSpec& spec, std::size_t i, double Phi,
                                     double t) {
  const double d = one_minus_gamma(spec);
  const double lambda = spec.spectrum.lambda(i);
  const auto eT = velocity_kernel(spec.alpha, lambda, spec.T);
  const auto et = velocity_kernel(spec.alpha, lambda, t);
  const double psi = spec.psi[i];
  return {(Phi - psi * eT.value) / d + psi * et.value,
          std::abs(psi) * (eT.error_bound / std::abs(d) + et.error_bound)};
}

ModeSolution::ModeSolution(std::size_t index, double alpha, double lambda, double psi, double b,
                           double phi_cap, double particular_at_T,
                           std::function<double(double)> particular)
    : index_(index),
      alpha_(alpha),
      lambda_(lambda),
      psi_(psi),
      b_(b),
      phi_cap_(phi_cap),
      particular_at_T_(particular_at_T),
      particular_(std::move(particular)) {}

double ModeSolution::homogeneous(double t) const {
  // b E_{a,1}(-x) + lambda b t^a E_{a,a+1}(-x) = b, so only the psi part varies.
  return b_ + psi_ * velocity_kernel(alpha_, lambda_, t).value;
}

namespace {

ModeSolution make_mode(const ProblemSpec& spec, std::size_t i, std::optional<double> fixed_b) {
  std::function<double(double)> particular;
  if (std::holds_alternative<ConstantInTime>(spec.source)) {
    particular = [alpha = spec.alpha, beta = spec.beta, lambda = spec.spectrum.lambda(i),
                  fk = std::get<ConstantInTime>(spec.source).f[i]](double t) {
      if (t <= 0.0 || fk == 0.0) return 0.0;
      return fk * std::pow(t, alpha + beta) *
             ml::ml_value(alpha, alpha + beta + 1.0, lambda * std::pow(t, alpha));
    };
  } else {
    const PiecewiseLinear f = std::get<SampledSource>(spec.source).modes.at(i);
    particular = [alpha = spec.alpha, beta = spec.beta, lambda = spec.spectrum.lambda(i),
                  f](double t) {
      const auto kinks = sampled_kinks(f);
      return particular_quadrature(alpha, beta, lambda, std::cref(f), t, kinks);
    };
  }
  const double vT = particular(spec.T);
  const double phi_cap = spec.phi[i] - vT;
  const double b = fixed_b ? *fixed_b : solve_b(spec, i, phi_cap);
  return ModeSolution(i, spec.alpha, spec.spectrum.lambda(i), spec.psi[i], b, phi_cap, vT,
                      std::move(particular));
}

ForwardSolution assemble(const ProblemSpec& spec, std::vector<ModeSolution> modes,
                         std::span<const double> t_grid) {
  ForwardSolution out;
  out.times.assign(t_grid.begin(), t_grid.end());
  const std::size_t n = modes.size();
  const std::size_t nt = t_grid.size();
  const auto lambda = spec.spectrum.eigenvalues();
  out.values.assign(n, std::vector<double>(nt));
  out.norm.assign(nt, 0.0);
  out.norm_one.assign(nt, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < nt; ++m) {
      const double v = modes[i](t_grid[m]);
      out.values[i][m] = v;
      out.norm[m] += v * v;
      out.norm_one[m] += lambda[i] * lambda[i] * v * v;
    }
  }
  for (std::size_t m = 0; m < nt; ++m) {
    out.norm[m] = std::sqrt(out.norm[m]);
    out.norm_one[m] = std::sqrt(out.norm_one[m]);
  }
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = modes[i](spec.T) - spec.gamma * modes[i](0.0) - spec.phi[i];
    res += r * r;
  }
  out.nonlocal_residual = std::sqrt(res);
  out.modes = std::move(modes);
  return out;
}

}  // namespace

ModeSolution solve_mode(const ProblemSpec& spec, std::size_t i) {
  return make_mode(spec, i, std::nullopt);
}

ForwardSolution solve_forward(const ProblemSpec& spec, std::span<const double> t_grid,
                              const TailModel& tail) {
  spec.validate();
  one_minus_gamma(spec);
  check_grid(spec, t_grid);
  std::vector<ModeSolution> modes;
  modes.reserve(spec.modes());
  for (std::size_t i = 0; i < spec.modes(); ++i) modes.push_back(solve_mode(spec, i));
  ForwardSolution out = assemble(spec, std::move(modes), t_grid);
  out.tail.resize(t_grid.size());
  for (std::size_t m = 0; m < t_grid.size(); ++m) out.tail[m] = truncation_tail(spec, tail, t_grid[m]);
  return out;
}

ForwardSolution assemble_with_b(const ProblemSpec& spec, const CoeffVector& b,
                                std::span<const double> t_grid) {
  spec.validate();
  spec.spectrum.check(b, "b");
  check_grid(spec, t_grid);
  std::vector<ModeSolution> modes;
  modes.reserve(spec.modes());
  for (std::size_t i = 0; i < spec.modes(); ++i) modes.push_back(make_mode(spec, i, b[i]));
  ForwardSolution out = assemble(spec, std::move(modes), t_grid);
  out.tail.assign(t_grid.size(), 0.0);
  return out;
}

double truncation_tail(const ProblemSpec& spec, const TailModel& tail, double t) {
  const double n = static_cast<double>(spec.modes());
  const double s_phi = tail_sum(tail.phi, n);
  const double s_psi = tail_sum(tail.psi, n);
  const double s_f = tail_sum(tail.f, n);
  if (s_phi == 0.0 && s_psi == 0.0 && s_f == 0.0) return 0.0;

  const double a = 1.0 / std::abs(one_minus_gamma(spec));
  // lambda_k >= lambda_N for every discarded mode.
  const double lambda_min = spec.spectrum.lambda(spec.modes() - 1);
  const double c = ml::ml_bound_constant();
  // Sampled sources bound |V_k| by sup|f_k| C t^beta / (beta lambda_k).
  const double source_factor = spec.constant_source() ? 1.0 : 1.0 / spec.beta;
  const double w_phi = a;
  const double w_psi = c * (1.0 + a) / lambda_min;
  const double w_f =
      c * source_factor * (std::pow(t, spec.beta) + a * std::pow(spec.T, spec.beta)) / lambda_min;
  return std::sqrt(3.0 * (w_phi * w_phi * s_phi + w_psi * w_psi * s_psi + w_f * w_f * s_f));
}

NonUniquenessWitness gamma_one_witness(const ProblemSpec& spec, std::span<const double> t_grid,
                                       std::size_t mode, double shift, double tolerance) {
  spec.validate();
  if (std::abs(1.0 - spec.gamma) >= kGammaTolerance) {
    throw DomainError("non-uniqueness witness needs gamma = 1");
  }
  if (mode >= spec.modes()) throw DomainError("witness mode index out of range");
  if (shift == 0.0) throw DomainError("witness shift must be non-zero");

  NonUniquenessWitness w;
  w.shifted_mode = mode;
  // With gamma = 1 the condition W(T) = W(0) + Phi reads psi T^a E(-lambda T^a) = Phi
  // and leaves b free.
  CoeffVector b = CoeffVector::zeros(spec.modes());
  w.solvable = true;
  for (std::size_t i = 0; i < spec.modes(); ++i) {
    const ModeSolution probe = make_mode(spec, i, 0.0);
    const double lhs =
        spec.psi[i] * velocity_kernel(spec.alpha, spec.spectrum.lambda(i), spec.T).value;
    const double scale = 1.0 + std::abs(lhs) + std::abs(probe.phi_cap());
    if (std::abs(lhs - probe.phi_cap()) > tolerance * scale) w.solvable = false;
  }
  if (!w.solvable) return w;

  w.first = assemble_with_b(spec, b, t_grid);
  b[mode] = shift;
  w.second = assemble_with_b(spec, b, t_grid);
  w.nonlocal_residual = std::max(w.first->nonlocal_residual, w.second->nonlocal_residual);
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < t_grid.size(); ++m) {
    std::vector<double> diff(spec.modes());
    for (std::size_t i = 0; i < spec.modes(); ++i) {
      diff[i] = w.second->values[i][m] - w.first->values[i][m];
    }
    sep = std::min(sep, vector_norm(diff));
  }
  w.separation = sep;
  return w;
}

CoerciveReport coercive_report(const ProblemSpec& spec, const oracle::TimeGrid& grid) {
  spec.validate();
  if (std::abs(grid.end() - spec.T) > 1e-12 * spec.T) {
    throw DomainError("coercive grid must end at T");
  }
  const auto t = grid.nodes();
  const std::size_t nt = grid.size();
  std::vector<double> q(nt, 0.0);
  for (std::size_t i = 0; i < spec.modes(); ++i) {
    const ModeSolution mode = solve_mode(spec, i);
    std::vector<double> u(nt);
    for (std::size_t m = 0; m < nt; ++m) u[m] = mode(t[m]);
    std::vector<double> d_alpha = oracle::caputo_l1(grid, u, spec.alpha);
    d_alpha[0] = spec.psi[i];
    const auto dd = oracle::caputo_l1(grid, d_alpha, spec.beta);
    const auto db = oracle::caputo_l1(grid, u, spec.beta);
    const double lambda = spec.spectrum.lambda(i);
    for (std::size_t m = 1; m < nt; ++m) {
      q[m] += dd[m] * dd[m] + lambda * lambda * db[m] * db[m];
    }
  }
  CoerciveReport report;
  for (std::size_t m = 1; m < nt; ++m) {
    const double w = std::pow(t[m], 2.0 * spec.beta) * q[m];
    report.times.push_back(t[m]);
    report.weighted.push_back(w);
    if (w > report.sup) {
      report.sup = w;
      report.argsup = t[m];
    }
  }
  return report;
}

}  // namespace fraclangevin::forward
