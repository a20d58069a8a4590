#include <iostream>

#include <CLI11.hpp>

#include "fraclangevin_cli/commands.hpp"

namespace {

void add_file_options(CLI::App* sub, fraclangevin::cli::CommandOptions& o) {
  sub->add_option("--input", o.input, "Problem file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "Output directory")->capture_default_str();
  sub->add_option("--tol", o.tol, "Verification tolerance override");
  sub->add_option("--steps", o.steps, "Oracle grid steps");
  sub->add_flag("--quiet", o.quiet, "Suppress the report on stdout");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = fraclangevin::cli;
  CLI::App app{"Forward and inverse solver for D^b(D^a u) + D^b(Au) = f, u(T) = gamma u(0) + phi"};
  app.require_subcommand(1);

  cli::CommandOptions forward_opts;
  cli::CommandOptions inverse_opts;
  cli::CommandOptions verify_opts;
  add_file_options(app.add_subcommand("forward", "Solve the forward problem"), forward_opts);
  add_file_options(app.add_subcommand("inverse", "Recover a constant source from u(t0)"),
                   inverse_opts);
  add_file_options(app.add_subcommand("verify", "Check closed forms against the L1 oracle"),
                   verify_opts);

  double alpha = 0.5;
  double mu = 1.0;
  double x = 0.0;
  auto* ml = app.add_subcommand("ml", "Evaluate E_{alpha,mu}(-x)");
  ml->add_option("--alpha", alpha)->required();
  ml->add_option("--mu", mu)->required();
  ml->add_option("--x", x)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  if (app.got_subcommand("forward")) return cli::cmd_forward(forward_opts, std::cout, std::cerr);
  if (app.got_subcommand("inverse")) return cli::cmd_inverse(inverse_opts, std::cout, std::cerr);
  if (app.got_subcommand("verify")) return cli::cmd_verify(verify_opts, std::cout, std::cerr);
  return cli::cmd_ml(alpha, mu, x, std::cout, std::cerr);
}
