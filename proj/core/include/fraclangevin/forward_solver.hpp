#pragma once

// Forward non-local problem
//   D^beta (D^alpha u) + D^beta (A u) = f,  0 < t <= T,
//   u(T) = gamma u(0) + phi,  D^alpha u(+0) = psi,
// solved mode by mode as u_k = W_k + V_k, where V_k is the zero-data
// particular solution and W_k solves the homogeneous problem with the shifted
// condition W(T) = gamma W(0) + Phi, Phi = phi - V(T).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fraclangevin/fractional_oracle.hpp"
#include "fraclangevin/piecewise_linear.hpp"
#include "fraclangevin/spectral_model.hpp"

namespace fraclangevin::forward {

using spectral::CoeffVector;
using spectral::SpectrumSpec;

struct ConstantInTime {
  CoeffVector f;
};

/// f_k(t) given by samples, one piecewise-linear interpolant per mode.
struct SampledSource {
  std::vector<PiecewiseLinear> modes;

  /// values[i][j] is mode i at times[j].
  static SampledSource from_table(const std::vector<double>& times,
                                  const std::vector<std::vector<double>>& values);
};

using Source = std::variant<ConstantInTime, SampledSource>;

struct ProblemSpec {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.0;
  double T = 1.0;
  SpectrumSpec spectrum = SpectrumSpec::dirichlet_laplacian(1);
  CoeffVector phi;
  CoeffVector psi;
  Source source = ConstantInTime{};

  /// Throws DomainError for orders outside (0, 1), T <= 0, non-finite gamma or
  /// a sampled table that does not cover [0, T]; DimensionMismatch for data of
  /// the wrong length.
  void validate() const;

  std::size_t modes() const noexcept { return spectrum.truncation(); }
  bool constant_source() const noexcept { return std::holds_alternative<ConstantInTime>(source); }
};

/// |1 - gamma| below this is treated as gamma = 1.
constexpr double kGammaTolerance = 1e-12;

/// V_k(t) for mode index i (k = i + 1). Closed form for constant sources,
/// quadrature for sampled ones. Throws QuadratureError if the adaptive rule
/// does not converge.
double particular_mode(const ProblemSpec& spec, std::size_t i, double t);

/// int_0^t (t - eta)^(alpha+beta-1) E_{alpha,alpha+beta}(-lambda (t - eta)^alpha) f(eta) d eta
/// after the substitution s = (t - eta)^(alpha+beta), by tanh-sinh on each
/// piece between the kinks of f. `relative_tol` bounds the estimated error
/// relative to the integral of |integrand|.
double particular_quadrature(double alpha, double beta, double lambda,
                             const std::function<double(double)>& f, double t,
                             std::span<const double> kinks = {}, double relative_tol = 1e-10);

/// b_k = (Phi_k - psi_k T^alpha E_{alpha,alpha+1}(-lambda_k T^alpha)) / (1 - gamma).
/// Throws DegenerateGamma when |1 - gamma| < kGammaTolerance.
double solve_b(const ProblemSpec& spec, std::size_t i, double Phi);

struct ModeValue {
  double value = 0.0;
  /// Propagated Mittag-Leffler error bounds.
  double error_bound = 0.0;
};

/// W_k(t) = b E_{alpha,1}(-lambda t^alpha) + (psi + lambda b) t^alpha E_{alpha,alpha+1}(-lambda t^alpha).
ModeValue mode_trajectory(const ProblemSpec& spec, std::size_t i, double b, double t);

/// W_k(t) = (Phi - psi T^alpha E_{alpha,alpha+1}(-lambda T^alpha)) / (1 - gamma)
///          + psi t^alpha E_{alpha,alpha+1}(-lambda t^alpha).
/// Throws DegenerateGamma.
ModeValue mode_trajectory_simplified(const ProblemSpec& spec, std::size_t i, double Phi, double t);

/// One solved mode. Cheap to copy; evaluation does not touch the spec.
class ModeSolution {
 public:
  ModeSolution(std::size_t index, double alpha, double lambda, double psi, double b,
               double phi_cap, double particular_at_T,
               std::function<double(double)> particular);

  std::size_t index() const noexcept { return index_; }
  std::size_t k() const noexcept { return index_ + 1; }
  double lambda() const noexcept { return lambda_; }
  double b() const noexcept { return b_; }
  double phi_cap() const noexcept { return phi_cap_; }
  double psi() const noexcept { return psi_; }
  double particular_at_T() const noexcept { return particular_at_T_; }

  /// W_k(t) = b + psi t^alpha E_{alpha,alpha+1}(-lambda t^alpha).
  double homogeneous(double t) const;
  /// V_k(t).
  double particular(double t) const { return particular_(t); }
  /// u_k(t) = W_k(t) + V_k(t).
  double operator()(double t) const { return homogeneous(t) + particular(t); }

 private:
  std::size_t index_;
  double alpha_;
  double lambda_;
  double psi_;
  double b_;
  double phi_cap_;
  double particular_at_T_;
  std::function<double(double)> particular_;
};

/// Solve a single mode. Throws DegenerateGamma.
ModeSolution solve_mode(const ProblemSpec& spec, std::size_t i);

/// Decay model |h_k| <= c / k^p for the data beyond the truncation.
struct DataDecay {
  double c = 0.0;
  double p = 1.0;
};

/// Decay of (phi, psi, f) past N. The default (all c = 0) says the data is
/// exactly truncated and the tail estimate is 0.
struct TailModel {
  DataDecay phi;
  DataDecay psi;
  DataDecay f;
};

struct ForwardSolution {
  std::vector<double> times;
  std::vector<ModeSolution> modes;
  /// values[i][m] = u_{i+1}(times[m]).
  std::vector<std::vector<double>> values;
  std::vector<double> norm;        // ||u(t)||
  std::vector<double> norm_one;    // ||u(t)||_1 = (sum lambda_k^2 u_k^2)^(1/2)
  std::vector<double> tail;        // bound on the H-norm of the discarded modes
  /// ||u(T) - gamma u(0) - phi||, from the closed forms at 0 and T.
  double nonlocal_residual = 0.0;
};

/// Throws DomainError if the grid leaves [0, T] or is not increasing;
/// DegenerateGamma when gamma = 1.
ForwardSolution solve_forward(const ProblemSpec& spec, std::span<const double> t_grid,
                              const TailModel& tail = {});

/// Assemble with prescribed b (any gamma). Used for the gamma = 1 witness.
ForwardSolution assemble_with_b(const ProblemSpec& spec, const CoeffVector& b,
                                std::span<const double> t_grid);

/// Bound on the H-norm of sum_{k>N} u_k(t) v_k under the decay model, using
/// (1 + x)|E_{alpha,mu}(-x)| <= C_module and lambda_k >= lambda_{N+1} >= lambda_N.
/// Infinite when some active decay has p <= 1/2.
double truncation_tail(const ProblemSpec& spec, const TailModel& tail, double t);

/// gamma = 1: two distinct solutions of the same data, differing by a
/// constant mode b_k = shift.
struct NonUniquenessWitness {
  /// False when the data violate Phi_k = psi_k T^alpha E(-lambda_k T^alpha)
  /// for some k, i.e. the gamma = 1 problem has no solution at all.
  bool solvable = false;
  std::size_t shifted_mode = 0;
  std::optional<ForwardSolution> first;
  std::optional<ForwardSolution> second;
  /// max over both solutions of ||u(T) - u(0) - phi||.
  double nonlocal_residual = 0.0;
  /// ||first(t) - second(t)|| at every node (constant = shift).
  double separation = 0.0;
};

/// Throws DomainError unless |1 - gamma| < kGammaTolerance.
NonUniquenessWitness gamma_one_witness(const ProblemSpec& spec, std::span<const double> t_grid,
                                       std::size_t mode = 0, double shift = 1.0,
                                       double tolerance = 1e-9);

struct CoerciveReport {
  std::vector<double> times;
  /// t^(2 beta) (||D^beta D^alpha u||^2 + ||D^beta u||_1^2) at each positive node.
  std::vector<double> weighted;
  double sup = 0.0;
  double argsup = 0.0;
};

/// L1 estimate of the coercive quantity with rho = beta. Node 0 is skipped;
/// D^alpha u(0) is taken as psi.
CoerciveReport coercive_report(const ProblemSpec& spec, const oracle::TimeGrid& grid);

}  // namespace fraclangevin::forward
