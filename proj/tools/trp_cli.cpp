// trp: trace ratio solver, duality values and S-lemma certificates.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace trp::cli;

  CLI::App app{
      "Global solver and duality analysis for max tr(G X^T B X)/tr(G X^T A X) s.t. X^T X = I.\n"
      "Exit codes: 0 success, 2 validation error (bad input), 3 numerical failure."};
  app.require_subcommand(1);

  Options opt;
  std::string target;
  bool json_flag = false;
  bool table_flag = false;

  auto add_common = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("path", target, what)->required();
    sub->add_option("--tol", opt.tol, "Dinkelbach stopping tolerance (relative)");
    sub->add_option("--max-iter", opt.max_iter, "Dinkelbach iteration cap");
    sub->add_option("--seed", opt.seed, "Seed for the starting point and sampling");
    sub->add_option("--samples", opt.samples, "Random Stiefel samples for the oracle cross-check");
    sub->add_option("--jobs", opt.jobs, "Worker threads (batch)");
    auto* j = sub->add_flag("--json", json_flag, "JSON output (default)");
    auto* t = sub->add_flag("--table", table_flag, "Human-readable table output");
    j->excludes(t);
    sub->add_option("--out", opt.out, "Write the report to FILE instead of stdout");
  };

  auto* solve = app.add_subcommand("solve", "Solve the primal problem");
  add_common(solve, "Instance JSON file");
  auto* dual = app.add_subcommand("dual", "Dual values of GTRP, GR, GS and GRS");
  add_common(dual, "Instance JSON file");
  auto* gap = app.add_subcommand("gap", "Full primal/dual/gap report");
  add_common(gap, "Instance JSON file");
  auto* certify = app.add_subcommand("certify", "Build and independently verify certificates");
  add_common(certify, "Instance JSON file");
  auto* repro = app.add_subcommand("repro", "Reproduce a worked example (gs1 or grq1)");
  add_common(repro, "Example name");
  auto* batch = app.add_subcommand("batch", "Process every *.json in a directory");
  add_common(batch, "Directory of instance files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }
  if (table_flag) opt.format = Format::kTable;
  configure_logging();

  if (solve->parsed()) return cmd_solve(target, opt, std::cout, std::cerr);
  if (dual->parsed()) return cmd_dual(target, opt, std::cout, std::cerr);
  if (gap->parsed()) return cmd_gap(target, opt, std::cout, std::cerr);
  if (certify->parsed()) return cmd_certify(target, opt, std::cout, std::cerr);
  if (repro->parsed()) return cmd_repro(target, opt, std::cout, std::cerr);
  if (batch->parsed()) return cmd_batch(target, opt, std::cout, std::cerr);
  return kExitValidation;
}
