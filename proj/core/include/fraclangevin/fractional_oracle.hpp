#pragma once

// Independent time-stepping machinery used to check the closed-form
// solutions: the L1 discretisation of the Caputo derivative on arbitrary
// grids and a two-stage integrator for a single mode equation
//   D^beta (D^alpha T + lambda T) = f,  T(0) = b,  D^alpha T(+0) = psi.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fraclangevin::oracle {

/// Strictly increasing nodes 0 = t_0 < t_1 < ... < t_M.
class TimeGrid {
 public:
  static TimeGrid uniform(double end, std::size_t steps);
  /// t_m = end * (m / M)^exponent, exponent >= 1.
  static TimeGrid graded(double end, std::size_t steps, double exponent);
  /// Throws DomainError unless nodes start at 0 and strictly increase.
  static TimeGrid from_nodes(std::vector<double> nodes);

  std::span<const double> nodes() const noexcept { return nodes_; }
  double operator[](std::size_t m) const { return nodes_[m]; }
  std::size_t steps() const noexcept { return nodes_.size() - 1; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double end() const noexcept { return nodes_.back(); }

  /// Every other node; empty if the step count is odd.
  std::optional<TimeGrid> coarsened() const;

 private:
  explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
  std::vector<double> nodes_;
};

/// Grading exponent (2 - s)/s with s = min(alpha, beta): restores the
/// (2 - s) order of the L1 scheme against the t^s start-up layer.
double default_grading(double alpha, double beta);

/// Graded grid with default_grading(alpha, beta).
TimeGrid default_grid(double alpha, double beta, double end, std::size_t steps);

/// L1 approximation of the Caputo derivative of order sigma in (0, 1) at
/// every node. Node 0 carries no history and is returned as 0. Exact for
/// piecewise-linear data.
std::vector<double> caputo_l1(const TimeGrid& grid, std::span<const double> samples,
                              double order);

/// Riemann-Liouville integral of order sigma > 0 of the piecewise-linear
/// interpolant of the samples, evaluated exactly at every node.
std::vector<double> fractional_integral_pl(const TimeGrid& grid, std::span<const double> samples,
                                           double order);

struct ModeProblem {
  double alpha = 0.5;
  double beta = 0.5;
  double lambda = 1.0;  // >= 0
  double b = 0.0;       // T(0)
  double psi = 0.0;     // D^alpha T(+0)
  double f_constant = 0.0;
  /// Time-dependent source; overrides f_constant when set. Sampled at the
  /// grid nodes and integrated as a piecewise-linear function.
  std::function<double(double)> f_of_t;

  double source(double t) const { return f_of_t ? f_of_t(t) : f_constant; }
};

struct OracleRun {
  std::vector<double> nodes;
  std::vector<double> trajectory;
  /// max of |L1_beta[L1_alpha T + lambda T] - f| over nodes m >= 2 with
  /// t_m >= 0.01 T (the start-up layer is excluded).
  double residual_linf = 0.0;
  /// log2 of successive self-differences on the two nested coarsenings;
  /// NaN when the step count is not divisible by 4.
  double observed_order = 0.0;
};

/// Stage 1: y = D^alpha T + lambda T solves D^beta y = f, y(0) = psi + lambda b,
/// so y = y(0) + I^beta f. Stage 2: implicit L1 steps for D^alpha T = y - lambda T.
/// Throws DomainError for alpha, beta outside (0, 1) or lambda < 0.
OracleRun integrate_mode(const ModeProblem& problem, const TimeGrid& grid);

/// max of |L1_beta[L1_alpha T + lambda T] - f| over nodes m >= 2 with
/// t_m >= 0.01 T, for any trajectory sampled on the grid. Applied to the exact
/// solution it measures the truncation error of the double L1 operator.
double double_l1_residual(const ModeProblem& problem, const TimeGrid& grid,
                          std::span<const double> trajectory);

/// Trajectory only (no residual, no order study).
std::vector<double> integrate_mode_trajectory(const ModeProblem& problem, const TimeGrid& grid);

}  // namespace fraclangevin::oracle
