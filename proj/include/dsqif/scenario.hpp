#pragma once

// Scenario files (JSON) in, flow reports out.
//
//   {
//     "variables": [{"name": "p", "frame": ["A", "B", "C"], "class": "high"}, ...],
//     "program": "x := 1" | {"path": "prog.whl"},
//     "initial_belief": [{"set": [{"p": "A"}], "mass": 0.98}, ...],
//     "evidence": [[{"set": ..., "mass": ...}, ...], ...],
//     "interactions": [{"secret": {"p": "A"}, "low": {"g": "A", "a": 0},
//                       "carry_postbelief": false}, ...],
//     "seed": 7, "max_loop_iterations": 10000, "tolerance": 1e-9
//   }
//
// Strings are atoms and integers are integers. A program path is resolved
// against the scenario file's directory. Without initial_belief the attacker
// starts from the vacuous mass.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dsqif/inference.hpp"
#include "dsqif/qif.hpp"

namespace dsqif {

struct RunConfig {
  std::uint64_t seed = 0;
  LiftedLimits limits;
};

struct Scenario {
  AttackerSetup setup;
  std::vector<Interaction> interactions;
  RunConfig config;
};

// Throws SchemaError for structural problems and ParseError for the program.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir = ".");

struct InteractionReport {
  Interaction interaction;
  InteractionTrace trace;
  FlowReport flow;
};

struct Report {
  std::vector<InteractionReport> interactions;
  std::vector<double> summary() const;
};

Report run_scenario(const Scenario& scenario);

// Masses are rounded to six decimals; the same report always renders to the
// same bytes.
std::string render_json(const Report& report, bool trace);
std::string render_table(const Report& report, bool trace);

}  // namespace dsqif
