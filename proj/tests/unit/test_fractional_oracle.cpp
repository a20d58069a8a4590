#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fraclangevin/errors.hpp"
#include "fraclangevin/fractional_oracle.hpp"
#include "fraclangevin/mittag_leffler.hpp"

using namespace fraclangevin::oracle;
using fraclangevin::DomainError;
using fraclangevin::ml::ml_value;

namespace {

template <class F>
std::vector<double> sample(const TimeGrid& g, F f) {
  std::vector<double> y(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) y[m] = f(g[m]);
  return y;
}

// Max error of the L1 derivative over nodes t >= from. The first step of a
// t^a profile carries an O(1) error that no refinement removes.
template <class F, class D>
double l1_error(const TimeGrid& g, F f, D exact, double order, double from = 0.1) {
  const auto d = caputo_l1(g, sample(g, f), order);
  double e = 0.0;
  for (std::size_t m = 1; m < g.size(); ++m) {
    if (g[m] >= from) e = std::max(e, std::abs(d[m] - exact(g[m])));
  }
  return e;
}

double closed_mode(const ModeProblem& p, double t) {
  if (t == 0.0) return p.b;
  const double x = p.lambda * std::pow(t, p.alpha);
  return p.b + p.psi * std::pow(t, p.alpha) * ml_value(p.alpha, p.alpha + 1.0, x) +
         p.f_constant * std::pow(t, p.alpha + p.beta) *
             ml_value(p.alpha, p.alpha + p.beta + 1.0, x);
}

}  // namespace

TEST(TimeGrid, Construction) {
  const auto u = TimeGrid::uniform(2.0, 4);
  ASSERT_EQ(u.size(), 5u);
  EXPECT_EQ(u[2], 1.0);
  EXPECT_EQ(u.end(), 2.0);
  const auto g = TimeGrid::graded(1.0, 4, 2.0);
  EXPECT_DOUBLE_EQ(g[1], 1.0 / 16.0);
  EXPECT_EQ(g.end(), 1.0);
  EXPECT_THROW(TimeGrid::uniform(0.0, 4), DomainError);
  EXPECT_THROW(TimeGrid::uniform(1.0, 0), DomainError);
  EXPECT_THROW(TimeGrid::graded(1.0, 4, 0.5), DomainError);
  EXPECT_THROW(TimeGrid::from_nodes({0.1, 0.2}), DomainError);
  EXPECT_THROW(TimeGrid::from_nodes({0.0, 0.2, 0.2}), DomainError);
  EXPECT_NO_THROW(TimeGrid::from_nodes({0.0, 0.3, 1.0}));
}

TEST(TimeGrid, Coarsened) {
  const auto g = TimeGrid::graded(1.0, 8, 1.5);
  const auto c = g.coarsened();
  ASSERT_TRUE(c.has_value());
  ASSERT_EQ(c->steps(), 4u);
  for (std::size_t m = 0; m < c->size(); ++m) EXPECT_EQ((*c)[m], g[2 * m]);
  EXPECT_FALSE(TimeGrid::uniform(1.0, 7).coarsened().has_value());
}

TEST(CaputoL1, ConstantHasZeroDerivative) {
  const auto g = TimeGrid::graded(1.0, 64, 2.5);
  for (double v : caputo_l1(g, sample(g, [](double) { return 3.7; }), 0.4)) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(CaputoL1, ExactOnLinear) {
  for (const auto& g : {TimeGrid::uniform(1.0, 10), TimeGrid::graded(1.0, 17, 3.0)}) {
    const auto d = caputo_l1(g, sample(g, [](double t) { return t; }), 0.5);
    for (std::size_t m = 1; m < g.size(); ++m) {
      EXPECT_NEAR(d[m], std::sqrt(g[m]) / std::tgamma(1.5), 1e-13) << m;
    }
  }
  const auto g = TimeGrid::uniform(1.0, 16);
  EXPECT_NEAR(caputo_l1(g, sample(g, [](double t) { return t; }), 0.5).back(),
              1.0 / std::tgamma(1.5), 1e-14);
}

TEST(CaputoL1, PowerRuleOrder) {
  for (double s : {0.3, 0.5, 0.7, 0.9}) {
    for (double p : {2.0, 3.0}) {
      auto f = [p](double t) { return std::pow(t, p); };
      auto d = [p, s](double t) {
        return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - s) * std::pow(t, p - s);
      };
      const double e1 = l1_error(TimeGrid::uniform(1.0, 128), f, d, s, 0.0);
      const double e2 = l1_error(TimeGrid::uniform(1.0, 256), f, d, s, 0.0);
      const double e3 = l1_error(TimeGrid::uniform(1.0, 512), f, d, s, 0.0);
      EXPECT_GE(std::log2(e1 / e2), 2.0 - s - 0.2) << s << " " << p;
      EXPECT_GE(std::log2(e2 / e3), 2.0 - s - 0.2) << s << " " << p;
    }
  }
}

TEST(CaputoL1, MittagLefflerEigenfunction) {
  const double lambda = 2.0;
  for (double a : {0.3, 0.5, 0.7, 0.9}) {
    auto f = [&](double t) { return ml_value(a, 1.0, lambda * std::pow(t, a)); };
    auto d = [&](double t) { return -lambda * f(t); };
    double prev = 0.0;
    for (std::size_t steps : {256u, 512u, 1024u}) {
      const double e = l1_error(TimeGrid::graded(1.0, steps, (2.0 - a) / a), f, d, a);
      if (prev > 0.0) EXPECT_GE(std::log2(prev / e), 2.0 - a - 0.2) << a;
      prev = e;
    }
    EXPECT_LT(prev, 2e-3) << a;
  }
}

TEST(CaputoL1, ShiftedMittagLefflerDerivative) {
  struct Case {
    double alpha, mu, order, lambda;
  };
  for (const Case c : {Case{0.6, 1.8, 0.4, 2.0}, Case{0.5, 1.5, 0.3, 1.0},
                       Case{0.8, 1.9, 0.6, 5.0}}) {
    auto f = [&](double t) {
      return std::pow(t, c.mu - 1.0) * ml_value(c.alpha, c.mu, c.lambda * std::pow(t, c.alpha));
    };
    auto d = [&](double t) {
      return std::pow(t, c.mu - c.order - 1.0) *
             ml_value(c.alpha, c.mu - c.order, c.lambda * std::pow(t, c.alpha));
    };
    double prev = 0.0;
    for (std::size_t steps : {128u, 256u, 512u}) {
      const double e = l1_error(TimeGrid::uniform(1.0, steps), f, d, c.order);
      if (prev > 0.0) EXPECT_GE(std::log2(prev / e), 0.8) << c.alpha << " " << c.mu;
      prev = e;
    }
  }
}

TEST(FractionalIntegral, ExactOnPiecewiseLinear) {
  const auto g = TimeGrid::graded(1.0, 20, 2.0);
  const auto one = fractional_integral_pl(g, sample(g, [](double) { return 1.0; }), 0.6);
  const auto lin = fractional_integral_pl(g, sample(g, [](double t) { return t; }), 0.6);
  for (std::size_t m = 0; m < g.size(); ++m) {
    EXPECT_NEAR(one[m], std::pow(g[m], 0.6) / std::tgamma(1.6), 1e-13);
    EXPECT_NEAR(lin[m], std::pow(g[m], 1.6) / std::tgamma(2.6), 1e-13);
  }
}

TEST(IntegrateMode, RejectsBadParameters) {
  const auto g = TimeGrid::uniform(1.0, 8);
  EXPECT_THROW(integrate_mode({.alpha = 1.0}, g), DomainError);
  EXPECT_THROW(integrate_mode({.beta = 0.0}, g), DomainError);
  EXPECT_THROW(integrate_mode({.lambda = -1.0}, g), DomainError);
}

TEST(IntegrateMode, ZeroDataKeepsInitialValue) {
  const ModeProblem p{.alpha = 0.4, .beta = 0.7, .lambda = 3.0, .b = 1.25};
  const auto run = integrate_mode(p, TimeGrid::uniform(1.0, 256));
  for (double v : run.trajectory) EXPECT_NEAR(v, 1.25, 1e-12);
}

TEST(IntegrateMode, RelaxationWhenPsiBalancesLambda) {
  // psi = -lambda b, f = 0: T(t) = b E_{alpha,1}(-lambda t^alpha).
  ModeProblem p{.alpha = 0.5, .beta = 0.5, .lambda = 2.0, .b = 1.0, .psi = -2.0};
  const auto grid = default_grid(p.alpha, p.beta, 1.0, 1024);
  const auto run = integrate_mode(p, grid);
  double e = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    e = std::max(e, std::abs(run.trajectory[m] - ml_value(0.5, 1.0, 2.0 * std::sqrt(grid[m]))));
  }
  EXPECT_LT(e, 1e-3);
}

TEST(IntegrateMode, ZeroLambdaIsPolynomialInPowers) {
  ModeProblem p{.alpha = 0.6, .beta = 0.3, .lambda = 0.0, .b = 0.5, .psi = 1.5, .f_constant = -2.0};
  const auto grid = default_grid(p.alpha, p.beta, 1.0, 1024);
  const auto run = integrate_mode(p, grid);
  double e = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double t = grid[m];
    const double exact = p.b + p.psi * std::pow(t, p.alpha) / std::tgamma(p.alpha + 1.0) +
                         p.f_constant * std::pow(t, p.alpha + p.beta) /
                             std::tgamma(p.alpha + p.beta + 1.0);
    e = std::max(e, std::abs(run.trajectory[m] - exact));
  }
  EXPECT_LT(e, 1e-3);
}

TEST(IntegrateMode, MatchesClosedFormAndConverges) {
  for (double a : {0.3, 0.7}) {
    for (double b : {0.3, 0.7}) {
      for (double lambda : {1.0, 10.0}) {
        const ModeProblem p{.alpha = a, .beta = b, .lambda = lambda, .b = 0.8, .psi = -0.6,
                            .f_constant = 1.3};
        double prev = 0.0;
        for (std::size_t steps : {256u, 1024u}) {
          const auto grid = default_grid(a, b, 1.0, steps);
          const auto run = integrate_mode(p, grid);
          double err = 0.0;
          double scale = 0.0;
          for (std::size_t m = 0; m < grid.size(); ++m) {
            const double exact = closed_mode(p, grid[m]);
            err = std::max(err, std::abs(run.trajectory[m] - exact));
            scale = std::max(scale, std::abs(exact));
          }
          const double rel = err / scale;
          if (prev > 0.0) {
            EXPECT_LT(rel, prev) << a << " " << b << " " << lambda;
            EXPECT_LT(rel, 1e-3) << a << " " << b << " " << lambda;
            EXPECT_GT(run.observed_order, 0.0);
            const double exact_res =
                double_l1_residual(p, grid, sample(grid, [&](double t) { return closed_mode(p, t); }));
            EXPECT_LE(run.residual_linf, 10.0 * std::max(exact_res, 1e-10));
          }
          prev = rel;
        }
      }
    }
  }
}

TEST(IntegrateMode, TimeDependentSource) {
  // f(t) = t with lambda = 0: T = b + psi t^a / G(a+1) + t^(a+b+1) / G(a+b+2).
  ModeProblem p{.alpha = 0.5, .beta = 0.6, .lambda = 0.0, .b = 0.0, .psi = 0.0};
  p.f_of_t = [](double t) { return t; };
  const auto grid = default_grid(p.alpha, p.beta, 1.0, 512);
  const auto traj = integrate_mode_trajectory(p, grid);
  EXPECT_NEAR(traj.back(), 1.0 / std::tgamma(p.alpha + p.beta + 2.0), 1e-3);
}
