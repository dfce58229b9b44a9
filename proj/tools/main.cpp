// dsqif: quantify what a program's low output tells an attacker about its
// secret inputs.

#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsqif/errors.hpp"
#include "dsqif/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kInput = 2, kModel = 3, kInternal = 4 };

struct Options {
  std::vector<std::string> scenarios;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_loop_iters;
  std::optional<double> tolerance;
  std::string format = "table";
  bool trace = false;
};

struct Outcome {
  int code = kOk;
  std::string out;
  std::string err;
};

Outcome analyze(const std::string& path, const Options& opt) {
  Outcome o;
  try {
    dsqif::Scenario s = dsqif::load_scenario(path);
    if (opt.seed) s.config.seed = *opt.seed;
    if (opt.max_loop_iters) s.config.limits.max_iterations = *opt.max_loop_iters;
    if (opt.tolerance) s.config.limits.tolerance = *opt.tolerance;
    const dsqif::Report report = dsqif::run_scenario(s);
    o.out = opt.format == "json" ? dsqif::render_json(report, opt.trace) : dsqif::render_table(report, opt.trace);
  } catch (const dsqif::ParseError& e) {
    o = {kInput, "", path + ": program: " + e.what()};
  } catch (const dsqif::TotalConflictError& e) {
    o = {kModel, "", path + ": total conflict: " + e.what()};
  } catch (const dsqif::NonTerminationError& e) {
    o = {kModel, "", path + ": non-termination: " + e.what()};
  } catch (const dsqif::Error& e) {
    // Schema, frame, mass, evaluation and capacity problems are all rooted
    // in the input files.
    o = {kInput, "", path + ": " + e.what()};
  } catch (const std::exception& e) {
    o = {kInternal, "", path + ": internal error: " + e.what()};
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information flow to a Dempster-Shafer attacker"};
  app.require_subcommand(1);
  Options opt;
  CLI::App* cmd = app.add_subcommand("analyze", "Run scenarios and report flow per interaction");
  cmd->add_option("--scenario", opt.scenarios, "Scenario file (repeatable)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "Override the scenario seed");
  cmd->add_option("--max-loop-iters", opt.max_loop_iters, "Loop unrolling budget")->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", opt.tolerance, "Residual loop mass treated as zero")->check(CLI::PositiveNumber);
  cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  cmd->add_flag("--trace", opt.trace, "Include every intermediate mass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  std::vector<std::future<Outcome>> jobs;
  for (const auto& path : opt.scenarios) {
    jobs.push_back(std::async(std::launch::async, analyze, path, std::cref(opt)));
  }
  int code = kOk;
  for (auto& job : jobs) {
    const Outcome o = job.get();
    std::cout << o.out;
    if (!o.err.empty()) std::cerr << "error: " << o.err << "\n";
    code = std::max(code, o.code);
  }
  return code;
}
