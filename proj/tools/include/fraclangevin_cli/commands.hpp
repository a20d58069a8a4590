#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fraclangevin/forward_solver.hpp"
#include "fraclangevin/inverse_solver.hpp"

namespace fraclangevin::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kGammaDegenerate = 2,
  kNonUnique = 3,
  kUnsolvable = 4,
  kNumericFailure = 5,
};

struct CommandOptions {
  std::filesystem::path input;
  std::filesystem::path out = ".";
  std::optional<double> tol;
  std::optional<std::size_t> steps;
  bool quiet = false;
};

/// Writes <out>/forward.csv. Exit 0, 1 or 2 (5 on numeric failure).
int cmd_forward(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Writes <out>/inverse.csv. Exit 0 unique, 3 solvable but not unique, 4 unsolvable.
int cmd_inverse(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Closed forms against the time-stepping oracle, mode by mode; writes
/// <out>/verify.csv. Exit 0 when every check passes, 5 otherwise.
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);

int cmd_ml(double alpha, double mu, double x, std::ostream& out, std::ostream& err);

/// 17 significant digits, shortest exponent form ("{:.17g}").
std::string format_number(double v);

std::string forward_csv(const forward::ForwardSolution& solution);

std::string inverse_csv(const inverse::InverseSpec& spec, const inverse::InverseResult& result,
                        double observation_residual, double witness_residual);

}  // namespace fraclangevin::cli
