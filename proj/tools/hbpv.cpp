// hbpv: evaluate, tabulate and verify the (p, nu)-extended H_B function.
//
//   hbpv eval FUNCTION [flags]
//   hbpv table FUNCTION --axis NAME=start:stop:count ... [--out file.csv]
//   hbpv verify SUITE [--samples N] [--seed S]
//   hbpv fixtures FILE

#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void add_value_flags(CLI::App& cmd, hbpv::cli::Flags& f) {
  for (auto& [name, value] : f.num) {
    // hba's shift is the Mellin variable s of the transformed series
    if (name == "a")
      cmd.add_option("--a,--s", value, "shift of the Beta arguments in hba");
    else
      cmd.add_option("--" + name, value);
  }
  cmd.add_option("--variant", f.variant, "integral representation for hbpv-integral")
      ->check(CLI::IsMember({"unit_interval", "mobius", "trig", "trig_lambda_shift", "trig_lambda_scale"}));
}

std::string function_list() {
  std::string s;
  for (const auto& [name, flags] : hbpv::cli::function_flags()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation and verification tool for the (p,nu)-extended H_B function"};
  app.require_subcommand(1);

  hbpv::cli::Flags flags = hbpv::cli::default_flags();
  std::string function, suite, path, out_path;
  std::vector<std::string> axes;
  std::optional<double> tol;
  int samples = 5;
  std::uint64_t seed = 1;

  auto* eval = app.add_subcommand("eval", "evaluate one function at a point");
  eval->add_option("function", function, "one of: " + function_list())->required();
  eval->add_option("--tol", tol, "series and quadrature tolerance");
  add_value_flags(*eval, flags);

  auto* table = app.add_subcommand("table", "tabulate a function over a grid as CSV");
  table->add_option("function", function, "one of: " + function_list())->required();
  table->add_option("--axis", axes, "NAME=start:stop:count, repeatable; first axis varies slowest");
  table->add_option("--out", out_path, "CSV output path (default: standard output)");
  table->add_option("--tol", tol, "series and quadrature tolerance");
  add_value_flags(*table, flags);

  auto* verify = app.add_subcommand("verify", "run identity checks on seeded random samples");
  verify->add_option("suite", suite, "all, reps, mellin, derivative, recursion, bound or kernels")->required();
  verify->add_option("--samples", samples, "samples per check")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", seed, "SplitMix64 seed");

  auto* fixtures = app.add_subcommand("fixtures", "compare against a fixture file");
  fixtures->add_option("path", path, "JSON array of fixture records")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return hbpv::cli::kDomain;
  }

  if (*eval) return hbpv::cli::cmd_eval(function, flags, tol, std::cout, std::cerr);
  if (*table) return hbpv::cli::cmd_table(function, flags, axes, tol, out_path, std::cout, std::cerr);
  if (*verify) return hbpv::cli::cmd_verify(suite, samples, seed, std::cout, std::cerr);
  return hbpv::cli::cmd_fixtures(path, std::cout, std::cerr);
}
