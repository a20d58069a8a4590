#pragma once

// INI-style problem description:
//
//   [problem]    alpha, beta, gamma, T, t0 (inverse only)
//   [spectrum]   kind = power_law | explicit | dirichlet_laplacian, N, c, p, values
//   [data]       phi, psi, f, omega: comma lists or a decay rule "c/k^p";
//                f_mode = constant | sampled (then f_times and f_k1 .. f_kN);
//                phi_tail, psi_tail, f_tail: decay rules for the modes past N
//   [output]     points = count of uniform nodes on [0, T], or nodes = list
//   [tolerances] verify, nonlocal, steps
//
// Unknown sections or keys are errors.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclangevin/forward_solver.hpp"
#include "fraclangevin/inverse_solver.hpp"

namespace fraclangevin::cli {

/// Malformed or inconsistent problem file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double verify = 1e-3;
  double nonlocal = 1e-6;
  std::size_t steps = 4096;
};

struct ProblemFile {
  forward::ProblemSpec forward;
  std::optional<double> t0;
  std::optional<spectral::CoeffVector> omega;
  forward::TailModel tail;
  std::vector<double> grid;
  Tolerances tolerances;

  /// Throws ParseError unless t0 and omega are present.
  inverse::InverseSpec inverse_spec() const;
};

ProblemFile parse_problem(std::istream& in);
ProblemFile load_problem(const std::filesystem::path& path);

/// "c/k^p" -> DataDecay; nullopt when the text is not a decay rule.
std::optional<forward::DataDecay> parse_decay_rule(const std::string& text);

}  // namespace fraclangevin::cli
