#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fraclangevin/errors.hpp"
#include "fraclangevin/forward_solver.hpp"
#include "fraclangevin/fractional_oracle.hpp"
#include "fraclangevin/mittag_leffler.hpp"

using namespace fraclangevin::forward;
using fraclangevin::DegenerateGamma;
using fraclangevin::DimensionMismatch;
using fraclangevin::DomainError;
using fraclangevin::ml::ml_eval;
using fraclangevin::ml::ml_value;
namespace oracle = fraclangevin::oracle;

namespace {

ProblemSpec make_spec(double alpha, double beta, double gamma, std::vector<double> lambdas,
                      std::vector<double> phi, std::vector<double> psi, std::vector<double> f,
                      double T = 1.0) {
  ProblemSpec s;
  s.alpha = alpha;
  s.beta = beta;
  s.gamma = gamma;
  s.T = T;
  s.spectrum = SpectrumSpec::explicit_list(std::move(lambdas));
  s.phi = CoeffVector(std::move(phi));
  s.psi = CoeffVector(std::move(psi));
  s.source = ConstantInTime{CoeffVector(std::move(f))};
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

double nonlocal_defect(const ProblemSpec& s, const ForwardSolution& sol) {
  double sq = 0.0;
  for (std::size_t i = 0; i < s.modes(); ++i) {
    const double d = sol.values[i].back() - s.gamma * sol.values[i].front() - s.phi[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

ProblemSpec random_spec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> order(0.15, 0.95);
  std::uniform_real_distribution<double> data(-2.0, 2.0);
  std::uniform_real_distribution<double> g(-3.0, 3.0);
  double gamma = g(rng);
  if (std::abs(1.0 - gamma) < 0.05) gamma += 0.5;
  std::vector<double> lambdas(n);
  std::vector<double> phi(n);
  std::vector<double> psi(n);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    lambdas[i] = std::pow(static_cast<double>(i + 1), 2.0) * 1.7;
    phi[i] = data(rng);
    psi[i] = data(rng);
    f[i] = data(rng);
  }
  return make_spec(order(rng), order(rng), gamma, lambdas, phi, psi, f,
                   std::uniform_real_distribution<double>(0.5, 3.0)(rng));
}

}  // namespace

TEST(ProblemSpec, Validation) {
  auto s = make_spec(0.5, 0.5, 0.0, {1, 4}, {1, 1}, {0, 0}, {0, 0});
  EXPECT_NO_THROW(s.validate());
  s.alpha = 1.0;
  EXPECT_THROW(s.validate(), DomainError);
  s.alpha = 0.5;
  s.T = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
  s.T = 1.0;
  s.phi = CoeffVector({1.0});
  EXPECT_THROW(s.validate(), DimensionMismatch);
  s.phi = CoeffVector({1.0, 1.0});
  s.source = SampledSource::from_table({0.0, 0.5}, {{1.0, 1.0}, {0.0, 0.0}});
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(ParticularMode, Examples) {
  auto zero = make_spec(0.5, 0.5, 0.0, {1}, {0}, {0}, {0});
  for (double t : {0.0, 0.3, 1.0}) EXPECT_EQ(particular_mode(zero, 0, t), 0.0);

  auto s = make_spec(0.5, 0.5, 0.0, {1}, {0}, {0}, {1});
  EXPECT_EQ(particular_mode(s, 0, 0.0), 0.0);
  const double v = particular_mode(s, 0, 1.0);
  EXPECT_NEAR(v, ml_value(0.5, 2.0, 1.0), 1e-15);
  const double q = particular_quadrature(0.5, 0.5, 1.0, [](double) { return 1.0; }, 1.0, {}, 1e-8);
  EXPECT_NEAR(q, v, 1e-8);

  auto a = make_spec(0.3, 0.4, 0.0, {2}, {0}, {0}, {1.5});
  const double t = 1e-15;
  EXPECT_NEAR(particular_mode(a, 0, t) / (1.5 * std::pow(t, 0.7) / std::tgamma(1.7)), 1.0, 1e-3);
}

TEST(ParticularMode, SampledConstantMatchesClosedForm) {
  auto c = make_spec(0.7, 0.4, 0.5, {1, 9, 50}, {0, 0, 0}, {0, 0, 0}, {1.0, -2.0, 0.5}, 2.0);
  auto s = c;
  s.source = SampledSource::from_table({0.0, 0.5, 2.0},
                                       {{1.0, 1.0, 1.0}, {-2.0, -2.0, -2.0}, {0.5, 0.5, 0.5}});
  for (std::size_t i = 0; i < 3; ++i) {
    for (double t : {1e-8, 0.25, 0.5, 0.50000001, 1.3, 2.0}) {
      const double exact = particular_mode(c, i, t);
      EXPECT_NEAR(particular_mode(s, i, t), exact, 1e-8 * (1.0 + std::abs(exact))) << i << " " << t;
    }
  }
}

TEST(ParticularMode, LinearSourceWithoutDamping) {
  // lambda -> 0 limit handled through a tiny lambda: V = t^(a+b+1) / Gamma(a+b+2).
  auto s = make_spec(0.6, 0.3, 0.0, {1e-12}, {0}, {0}, {0});
  s.source = SampledSource::from_table({0.0, 1.0}, {{0.0, 1.0}});
  EXPECT_NEAR(particular_mode(s, 0, 0.8), std::pow(0.8, 1.9) / std::tgamma(2.9), 1e-10);
}

TEST(SolveB, Examples) {
  auto s = make_spec(0.5, 0.5, 0.0, {4}, {1}, {0}, {0});
  EXPECT_DOUBLE_EQ(solve_b(s, 0, 1.0), 1.0);
  s.gamma = 0.5;
  EXPECT_DOUBLE_EQ(solve_b(s, 0, 0.7), 1.4);
  s.gamma = 0.0;
  s.psi = CoeffVector({1.0});
  const double b = solve_b(s, 0, 0.0);
  EXPECT_NEAR(b, -ml_value(0.5, 1.5, 4.0), 1e-15);
  const auto w = mode_trajectory(s, 0, b, 1.0);
  EXPECT_NEAR(w.value, s.gamma * b + 0.0, 1e-8 * (1.0 + std::abs(b)));
  s.gamma = 1.0;
  EXPECT_THROW(solve_b(s, 0, 0.0), DegenerateGamma);
}

TEST(SolveB, ReproducesNonlocalCondition) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_spec(rng, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const double Phi = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
      const double b = solve_b(s, i, Phi);
      const double wT = mode_trajectory(s, i, b, s.T).value;
      EXPECT_NEAR(wT, s.gamma * b + Phi, 1e-8 * (1.0 + std::abs(b)));
    }
  }
}

TEST(ModeTrajectory, Examples) {
  auto s = make_spec(0.5, 0.5, 0.0, {3}, {0}, {-3 * 0.8}, {0});
  for (double t : {0.0, 0.2, 1.0}) {
    EXPECT_NEAR(mode_trajectory(s, 0, 0.8, t).value, 0.8 * ml_value(0.5, 1.0, 3.0 * std::sqrt(t)),
                1e-14);
  }
  s.psi = CoeffVector({0.0});
  for (double t : {0.0, 0.2, 1.0}) EXPECT_NEAR(mode_trajectory(s, 0, 0.8, t).value, 0.8, 1e-14);

  auto e = make_spec(0.5, 0.5, 0.0, {1}, {0}, {1}, {0});
  EXPECT_NEAR(mode_trajectory(e, 0, 1.0, 1.0).value,
              ml_value(0.5, 1.0, 1.0) + 2.0 * ml_value(0.5, 1.5, 1.0), 1e-14);
  EXPECT_EQ(mode_trajectory(e, 0, 0.37, 0.0).value, 0.37);
}

TEST(ModeTrajectory, FormsAgree) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = random_spec(rng, 4);
    const std::size_t i = trial % 4;
    const double Phi = 4.0 * u(rng) - 2.0;
    const double b = solve_b(s, i, Phi);
    const double t = s.T * u(rng);
    const auto one = mode_trajectory(s, i, b, t);
    const auto two = mode_trajectory_simplified(s, i, Phi, t);
    const double scale = std::abs(b) + std::abs(s.psi[i]) * (1.0 + s.spectrum.lambda(i)) + 1.0;
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * scale;
    EXPECT_LE(std::abs(one.value - two.value),
              10.0 * (one.error_bound + two.error_bound) + rounding)
        << trial;
  }
  auto g = make_spec(0.5, 0.5, 1.0, {1}, {0}, {1}, {0});
  EXPECT_THROW(mode_trajectory_simplified(g, 0, 0.0, 0.5), DegenerateGamma);
}

TEST(SolveForward, ConstantSolutions) {
  for (double gamma : {0.0, -2.0, 0.5, 3.0}) {
    auto s = make_spec(0.35, 0.8, gamma, {1, 4, 9}, {1, 0.5, -0.25}, {0, 0, 0}, {0, 0, 0});
    const auto grid = linspace(0.0, 1.0, 21);
    const auto sol = solve_forward(s, grid);
    for (std::size_t i = 0; i < 3; ++i) {
      const double b = s.phi[i] / (1.0 - gamma);
      for (double v : sol.values[i]) EXPECT_NEAR(v, b, 1e-10);
    }
  }
}

TEST(SolveForward, ZeroData) {
  auto s = make_spec(0.5, 0.5, 2.0, {1, 4}, {0, 0}, {0, 0}, {0, 0});
  const auto sol = solve_forward(s, linspace(0.0, 1.0, 5));
  for (const auto& row : sol.values)
    for (double v : row) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(sol.nonlocal_residual, 0.0);
}

TEST(SolveForward, GridChecksAndDegenerateGamma) {
  auto s = make_spec(0.5, 0.5, 0.0, {1}, {1}, {0}, {0});
  const std::vector<double> outside{0.0, 1.5};
  const std::vector<double> repeated{0.0, 0.5, 0.5};
  EXPECT_THROW(solve_forward(s, outside), DomainError);
  EXPECT_THROW(solve_forward(s, repeated), DomainError);
  s.gamma = 1.0;
  try {
    solve_forward(s, linspace(0.0, 1.0, 3));
    FAIL() << "expected DegenerateGamma";
  } catch (const DegenerateGamma& e) {
    EXPECT_STREQ(e.what(), "gamma = 1: solution not unique");
  }
}

TEST(SolveForward, NonlocalConditionHolds) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_spec(rng, 6);
    const auto sol = solve_forward(s, linspace(0.0, s.T, 9));
    const double bound = 1e-6 * (1.0 + fraclangevin::spectral::norm(s.phi));
    EXPECT_LE(sol.nonlocal_residual, bound) << trial;
    EXPECT_LE(nonlocal_defect(s, sol), bound) << trial;
  }
}

TEST(SolveForward, Linearity) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_spec(rng, 4);
    auto b = random_spec(rng, 4);
    b.alpha = a.alpha;
    b.beta = a.beta;
    b.gamma = a.gamma;
    b.T = a.T;
    b.spectrum = a.spectrum;
    auto sum = a;
    sum.phi = a.phi.plus(b.phi);
    sum.psi = a.psi.plus(b.psi);
    sum.source = ConstantInTime{std::get<ConstantInTime>(a.source).f.plus(
        std::get<ConstantInTime>(b.source).f)};
    const auto grid = linspace(0.0, a.T, 7);
    const auto ua = solve_forward(a, grid);
    const auto ub = solve_forward(b, grid);
    const auto us = solve_forward(sum, grid);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t m = 0; m < grid.size(); ++m) {
        const double expect = ua.values[i][m] + ub.values[i][m];
        EXPECT_NEAR(us.values[i][m], expect, 1e-9 * (1.0 + std::abs(expect)));
      }
    }
  }
}

TEST(SolveForward, NormsAndTail) {
  auto s = make_spec(0.5, 0.5, 2.0, {1, 4}, {1, 1}, {1, 0}, {1, 0});
  const auto grid = linspace(0.0, 1.0, 11);
  const auto sol = solve_forward(s, grid);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double u1 = sol.values[0][m];
    const double u2 = sol.values[1][m];
    EXPECT_NEAR(sol.norm[m], std::hypot(u1, u2), 1e-15);
    EXPECT_NEAR(sol.norm_one[m], std::hypot(u1, 4.0 * u2), 1e-14);
    EXPECT_EQ(sol.tail[m], 0.0);
  }
  TailModel tail;
  tail.phi = {1.0, 2.0};
  const double t1 = truncation_tail(s, tail, 0.5);
  EXPECT_GT(t1, 0.0);
  EXPECT_TRUE(std::isfinite(t1));
  auto wider = make_spec(0.5, 0.5, 2.0, {1, 4, 9, 16}, {1, 1, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0});
  EXPECT_LT(truncation_tail(wider, tail, 0.5), t1);
  tail.f = {1.0, 0.5};
  EXPECT_TRUE(std::isinf(truncation_tail(s, tail, 0.5)));
}

TEST(SolveForward, MatchesOracle) {
  auto s = make_spec(0.5, 0.5, 2.0, {1, 4}, {1, 1}, {1, 0}, {1, 0});
  const auto grid = oracle::default_grid(0.5, 0.5, 1.0, 1024);
  const std::vector<double> nodes(grid.nodes().begin(), grid.nodes().end());
  const auto sol = solve_forward(s, nodes);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& mode = sol.modes[i];
    oracle::ModeProblem p{.alpha = 0.5, .beta = 0.5, .lambda = mode.lambda(), .b = mode.b(),
                          .psi = s.psi[i],
                          .f_constant = std::get<ConstantInTime>(s.source).f[i]};
    const auto run = oracle::integrate_mode(p, grid);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      err = std::max(err, std::abs(run.trajectory[m] - sol.values[i][m]));
      scale = std::max(scale, std::abs(sol.values[i][m]));
    }
    EXPECT_LE(err / scale, 1e-3) << i;
  }
}

TEST(SolveForward, InitialVelocity) {
  auto s = make_spec(0.5, 0.6, 0.0, {1, 4}, {0.5, -1}, {1.5, -0.75}, {1, 2});
  const auto grid = oracle::default_grid(s.alpha, s.beta, 1.0, 4096);
  const std::vector<double> nodes(grid.nodes().begin(), grid.nodes().end());
  const auto sol = solve_forward(s, nodes);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto d = oracle::caputo_l1(grid, sol.values[i], s.alpha);
    // D^a u_k = psi E_{a,1}(-lambda t^a) + O(t^b): extrapolate linearly in t^a.
    std::size_t m1 = 0;
    while (nodes[m1] < 1e-4) ++m1;
    std::size_t m2 = m1;
    while (nodes[m2] < 4e-4) ++m2;
    const double x1 = std::pow(nodes[m1], s.alpha);
    const double x2 = std::pow(nodes[m2], s.alpha);
    const double at0 = d[m1] - (d[m2] - d[m1]) / (x2 - x1) * x1;
    EXPECT_NEAR(at0, s.psi[i], 2e-2 * (1.0 + std::abs(s.psi[i]))) << i;
  }
}

TEST(GammaOne, WitnessPair) {
  auto s = make_spec(0.5, 0.5, 1.0, {1, 4}, {0, 0}, {0, 0}, {0, 0});
  const auto grid = linspace(0.0, 1.0, 6);
  const auto w = gamma_one_witness(s, grid, 1, 2.5);
  ASSERT_TRUE(w.solvable);
  ASSERT_TRUE(w.first && w.second);
  EXPECT_LE(w.nonlocal_residual, 1e-12);
  EXPECT_NEAR(w.separation, 2.5, 1e-14);

  // psi != 0 needs phi matched to psi T^a E(-lambda T^a) - V(T).
  s.psi = CoeffVector({1.0, 0.0});
  s.phi = CoeffVector({std::pow(1.0, 0.5) * ml_value(0.5, 1.5, 1.0), 0.0});
  const auto w2 = gamma_one_witness(s, grid);
  EXPECT_TRUE(w2.solvable);
  EXPECT_LE(w2.nonlocal_residual, 1e-9);

  s.phi = CoeffVector({1.0, 0.0});
  EXPECT_FALSE(gamma_one_witness(s, grid).solvable);
  s.gamma = 0.5;
  EXPECT_THROW(gamma_one_witness(s, grid), DomainError);
}

TEST(Coercive, ZeroDataGivesZero) {
  auto s = make_spec(0.5, 0.5, 0.0, {1, 4}, {0, 0}, {0, 0}, {0, 0});
  EXPECT_EQ(coercive_report(s, oracle::TimeGrid::uniform(1.0, 128)).sup, 0.0);
}

TEST(Coercive, StableUnderRefinementAndQuadraticInPsi) {
  auto s = make_spec(0.5, 0.5, 0.0, {1, 4}, {0, 0}, {1, 0}, {0, 0});
  double prev = 0.0;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const double sup = coercive_report(s, oracle::TimeGrid::uniform(1.0, n)).sup;
    EXPECT_TRUE(std::isfinite(sup));
    EXPECT_GT(sup, 0.0);
    if (prev > 0.0) EXPECT_LE(sup, 1.2 * prev) << n;
    prev = sup;
  }
  const auto grid = oracle::TimeGrid::uniform(1.0, 512);
  const double once = coercive_report(s, grid).sup;
  s.psi = CoeffVector({2.0, 0.0});
  EXPECT_NEAR(coercive_report(s, grid).sup, 4.0 * once, 1e-12 * once);
}
