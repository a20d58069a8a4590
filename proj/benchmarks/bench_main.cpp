#include <vector>

#include <benchmark/benchmark.h>

#include "fraclangevin/forward_solver.hpp"
#include "fraclangevin/fractional_oracle.hpp"
#include "fraclangevin/inverse_solver.hpp"
#include "fraclangevin/mittag_leffler.hpp"

namespace {

using fraclangevin::spectral::CoeffVector;
using fraclangevin::spectral::SpectrumSpec;
namespace fwd = fraclangevin::forward;

// x chosen to land in the series, integral and asymptotic branches.
void BM_MlEval(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  const fraclangevin::ml::MlParams p{0.9, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(fraclangevin::ml::ml_eval(p, x));
}
BENCHMARK(BM_MlEval)->Arg(1)->Arg(20)->Arg(100000);

fwd::ProblemSpec spec_with(std::size_t n) {
  fwd::ProblemSpec s;
  s.alpha = 0.4;
  s.beta = 0.6;
  s.gamma = 2.0;
  s.spectrum = SpectrumSpec::dirichlet_laplacian(n);
  std::vector<double> phi(n), psi(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1);
    phi[i] = 1.0 / (k * k);
    psi[i] = 0.5 / (k * k);
    f[i] = 1.0 / k;
  }
  s.phi = CoeffVector(phi);
  s.psi = CoeffVector(psi);
  s.source = fwd::ConstantInTime{CoeffVector(f)};
  return s;
}

void BM_SolveForward(benchmark::State& state) {
  const auto s = spec_with(static_cast<std::size_t>(state.range(0)));
  std::vector<double> grid(33);
  for (std::size_t m = 0; m < grid.size(); ++m) grid[m] = m / 32.0;
  for (auto _ : state) benchmark::DoNotOptimize(fwd::solve_forward(s, grid));
}
BENCHMARK(BM_SolveForward)->Arg(16)->Arg(256);

void BM_RecoverSource(benchmark::State& state) {
  fraclangevin::inverse::InverseSpec spec;
  spec.forward = spec_with(static_cast<std::size_t>(state.range(0)));
  spec.t0 = 0.5;
  spec.omega = spec.forward.phi.scaled(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(fraclangevin::inverse::recover_source(spec));
}
BENCHMARK(BM_RecoverSource)->Arg(16)->Arg(256);

void BM_IntegrateMode(benchmark::State& state) {
  const fraclangevin::oracle::ModeProblem p{.alpha = 0.5, .beta = 0.5, .lambda = 10.0, .b = 1.0,
                                            .psi = -0.5, .f_constant = 1.0};
  const auto grid =
      fraclangevin::oracle::default_grid(0.5, 0.5, 1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fraclangevin::oracle::integrate_mode_trajectory(p, grid));
  }
}
BENCHMARK(BM_IntegrateMode)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
