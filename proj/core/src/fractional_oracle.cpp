#include "fraclangevin/fractional_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fraclangevin/errors.hpp"

namespace fraclangevin::oracle {
namespace {

// The double L1 residual is meaningless inside the start-up layer of graded
// grids, where steps shrink to ~M^-r and roundoff in D^alpha T is amplified
// by h^-beta. Nodes before this fraction of the horizon are skipped.
constexpr double kResidualWindowStart = 0.01;

// a^p - (a - h)^p for 0 < h <= a, without cancellation when h << a.
double pow_diff(double a, double h, double p) {
  const double ap = std::pow(a, p);
  if (h >= a) return ap;
  return -ap * std::expm1(p * std::log1p(-h / a));
}

void check_order(double order, const char* what) {
  if (!(order > 0.0 && order < 1.0)) {
    throw DomainError(std::string(what) + " must lie in (0, 1), got " + std::to_string(order));
  }
}

void check_samples(const TimeGrid& grid, std::span<const double> samples) {
  if (grid.size() < 2) throw DomainError("L1 scheme needs at least two nodes");
  if (samples.size() != grid.size()) {
    throw DomainError("sample count " + std::to_string(samples.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
  }
}

bool is_uniform(const TimeGrid& grid) {
  const auto t = grid.nodes();
  const double h = t[1] - t[0];
  for (std::size_t m = 1; m < t.size(); ++m) {
    const double expected = h * static_cast<double>(m);
    if (std::abs(t[m] - expected) > 64.0 * std::numeric_limits<double>::epsilon() * expected) {
      return false;
    }
  }
  return true;
}

// L1 weights (t_m - t_j)^p - (t_m - t_{j+1})^p, p = 1 - sigma, divided by h_j.
// Uniform grids reuse one O(M) table indexed by m - j.
class L1Weights {
 public:
  L1Weights(const TimeGrid& grid, double p) : t_(grid.nodes()), p_(p) {
    if (is_uniform(grid)) {
      const double h = t_[1] - t_[0];
      const std::size_t n = grid.size();
      uniform_.resize(n);
      const double hp = std::pow(h, p) / h;
      for (std::size_t d = 1; d < n; ++d) {
        uniform_[d] = hp * pow_diff(static_cast<double>(d), 1.0, p);
      }
    }
  }

  // Weight on the divided difference of segment j seen from node m > j.
  double operator()(std::size_t m, std::size_t j) const {
    if (!uniform_.empty()) return uniform_[m - j];
    const double h = t_[j + 1] - t_[j];
    return pow_diff(t_[m] - t_[j], h, p_) / h;
  }

 private:
  std::span<const double> t_;
  double p_;
  std::vector<double> uniform_;
};

}  // namespace

TimeGrid TimeGrid::uniform(double end, std::size_t steps) {
  return graded(end, steps, 1.0);
}

TimeGrid TimeGrid::graded(double end, std::size_t steps, double exponent) {
  if (!(end > 0.0) || !std::isfinite(end)) throw DomainError("grid end must be positive");
  if (steps < 1) throw DomainError("grid needs at least one step");
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw DomainError("grading exponent must be >= 1");
  }
  std::vector<double> nodes(steps + 1);
  for (std::size_t m = 0; m <= steps; ++m) {
    const double s = static_cast<double>(m) / static_cast<double>(steps);
    nodes[m] = (exponent == 1.0) ? end * s : end * std::pow(s, exponent);
  }
  nodes.back() = end;
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw DomainError("grid needs at least two nodes");
  if (nodes.front() != 0.0) throw DomainError("grid must start at t = 0");
  for (std::size_t m = 1; m < nodes.size(); ++m) {
    if (!(nodes[m] > nodes[m - 1]) || !std::isfinite(nodes[m])) {
      throw DomainError("grid nodes must be finite and strictly increasing");
    }
  }
  return TimeGrid(std::move(nodes));
}

std::optional<TimeGrid> TimeGrid::coarsened() const {
  if (steps() % 2 != 0) return std::nullopt;
  std::vector<double> out;
  out.reserve(steps() / 2 + 1);
  for (std::size_t m = 0; m < nodes_.size(); m += 2) out.push_back(nodes_[m]);
  return TimeGrid(std::move(out));
}

double default_grading(double alpha, double beta) {
  const double s = std::min(alpha, beta);
  return std::max(1.0, (2.0 - s) / s);
}

TimeGrid default_grid(double alpha, double beta, double end, std::size_t steps) {
  return TimeGrid::graded(end, steps, default_grading(alpha, beta));
}

std::vector<double> caputo_l1(const TimeGrid& grid, std::span<const double> samples,
                              double order) {
  check_order(order, "Caputo order");
  check_samples(grid, samples);
  const L1Weights weight(grid, 1.0 - order);
  const double scale = 1.0 / std::tgamma(2.0 - order);
  const std::size_t n = grid.size();
  std::vector<double> slope(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) slope[j] = samples[j + 1] - samples[j];

  std::vector<double> out(n, 0.0);
  for (std::size_t m = 1; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += slope[j] * weight(m, j);
    out[m] = scale * acc;
  }
  return out;
}

std::vector<double> fractional_integral_pl(const TimeGrid& grid, std::span<const double> samples,
                                           double order) {
  if (!(order > 0.0) || !std::isfinite(order)) {
    throw DomainError("fractional integral order must be positive");
  }
  check_samples(grid, samples);
  const auto t = grid.nodes();
  const double inv_gamma = 1.0 / std::tgamma(order);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t m = 1; m < grid.size(); ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double a = t[m] - t[j];
      const double h = t[j + 1] - t[j];
      const double d0 = pow_diff(a, h, order);        // a^s - b^s
      const double d1 = pow_diff(a, h, order + 1.0);  // a^(s+1) - b^(s+1)
      // int_b^a u^(s-1) (a - u) du, the moment carrying the rising hat.
      const double rising = a * d0 / order - d1 / (order + 1.0);
      const double base = d0 / order;
      acc += samples[j] * (base - rising / h) + samples[j + 1] * (rising / h);
    }
    out[m] = inv_gamma * acc;
  }
  return out;
}

std::vector<double> integrate_mode_trajectory(const ModeProblem& problem, const TimeGrid& grid) {
  check_order(problem.alpha, "alpha");
  check_order(problem.beta, "beta");
  if (!(problem.lambda >= 0.0) || !std::isfinite(problem.lambda)) {
    throw DomainError("mode eigenvalue must be a finite lambda >= 0");
  }
  const auto t = grid.nodes();
  const std::size_t n = grid.size();
  const double alpha = problem.alpha;
  const double beta = problem.beta;
  const double lambda = problem.lambda;

  // Stage 1: y = (psi + lambda b) + I^beta f.
  const double y0 = problem.psi + lambda * problem.b;
  std::vector<double> y(n);
  if (problem.f_of_t) {
    std::vector<double> f(n);
    for (std::size_t m = 0; m < n; ++m) f[m] = problem.f_of_t(t[m]);
    y = fractional_integral_pl(grid, f, beta);
    for (double& v : y) v += y0;
  } else {
    const double c = problem.f_constant / std::tgamma(beta + 1.0);
    for (std::size_t m = 0; m < n; ++m) y[m] = y0 + c * std::pow(t[m], beta);
  }

  // Stage 2: implicit L1 for D^alpha T = y - lambda T.
  const L1Weights weight(grid, 1.0 - alpha);
  const double g2 = std::tgamma(2.0 - alpha);
  std::vector<double> traj(n);
  std::vector<double> slope(n - 1);
  traj[0] = problem.b;
  for (std::size_t m = 1; m < n; ++m) {
    double history = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) history += slope[j] * weight(m, j);
    const double diag = weight(m, m - 1);
    traj[m] = (g2 * y[m] - history + diag * traj[m - 1]) / (diag + lambda * g2);
    slope[m - 1] = traj[m] - traj[m - 1];
  }
  return traj;
}

double double_l1_residual(const ModeProblem& problem, const TimeGrid& grid,
                          std::span<const double> trajectory) {
  check_samples(grid, trajectory);
  const std::size_t n = grid.size();
  std::vector<double> d_alpha = caputo_l1(grid, trajectory, problem.alpha);
  d_alpha[0] = problem.psi;
  std::vector<double> inner(n);
  for (std::size_t m = 0; m < n; ++m) inner[m] = d_alpha[m] + problem.lambda * trajectory[m];
  const std::vector<double> outer = caputo_l1(grid, inner, problem.beta);
  double residual = 0.0;
  const double start = kResidualWindowStart * grid.end();
  for (std::size_t m = 2; m < n; ++m) {
    if (grid[m] < start) continue;
    residual = std::max(residual, std::abs(outer[m] - problem.source(grid[m])));
  }
  return residual;
}

OracleRun integrate_mode(const ModeProblem& problem, const TimeGrid& grid) {
  OracleRun run;
  run.nodes.assign(grid.nodes().begin(), grid.nodes().end());
  run.trajectory = integrate_mode_trajectory(problem, grid);
  run.residual_linf = double_l1_residual(problem, grid, run.trajectory);

  run.observed_order = std::numeric_limits<double>::quiet_NaN();
  if (grid.steps() % 4 == 0) {
    const TimeGrid mid = *grid.coarsened();
    const TimeGrid coarse = *mid.coarsened();
    const auto t_mid = integrate_mode_trajectory(problem, mid);
    const auto t_coarse = integrate_mode_trajectory(problem, coarse);
    double e_coarse = 0.0;
    double e_mid = 0.0;
    for (std::size_t m = 0; m < coarse.size(); ++m) {
      e_coarse = std::max(e_coarse, std::abs(t_coarse[m] - t_mid[2 * m]));
    }
    for (std::size_t m = 0; m < mid.size(); ++m) {
      e_mid = std::max(e_mid, std::abs(t_mid[m] - run.trajectory[2 * m]));
    }
    if (e_coarse > 0.0 && e_mid > 0.0) run.observed_order = std::log2(e_coarse / e_mid);
  }
  return run;
}

}  // namespace fraclangevin::oracle
