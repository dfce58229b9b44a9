#include "dsqif/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dsqif/errors.hpp"

namespace dsqif {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw SchemaError(where + ": missing '" + key + "'");
  return obj.at(key);
}

Value to_value(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value::atom(j.get<std::string>());
  throw SchemaError(where + ": values are integers or atom strings");
}

Tuple to_tuple(const json& j, const JointFrame& frame, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": an assignment is an object");
  std::map<VariableId, Value> assignment;
  for (const auto& [name, v] : j.items()) {
    if (!frame.has(name)) throw SchemaError(where + ": '" + name + "' is not a variable of this class");
    assignment[name] = to_value(v, where);
  }
  if (assignment.size() != frame.arity()) throw SchemaError(where + ": assignment must cover every variable of its class");
  try {
    return Tuple::make(frame, assignment);
  } catch (const FrameError& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

MassFunction to_mass(const json& j, const JointFrame& frame, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": a belief is a nonempty list of {set, mass}");
  std::vector<std::pair<TupleSet, double>> entries;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const json& set = require(j[i], "set", at);
    const json& mass = require(j[i], "mass", at);
    if (!set.is_array()) throw SchemaError(at + ": 'set' is a list of assignments");
    if (!mass.is_number()) throw SchemaError(at + ": 'mass' is a number");
    std::vector<Tuple> tuples;
    for (const auto& t : set) tuples.push_back(to_tuple(t, frame, at));
    entries.emplace_back(TupleSet(frame, tuples), mass.get<double>());
  }
  return make_mass(frame, std::move(entries));
}

double round6(double x) {
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

ordered_json mass_json(const MassFunction& m) {
  ordered_json out = ordered_json::array();
  for (const auto& [set, mass] : m.focal_sets()) out.push_back({{"set", set.to_string()}, {"mass", round6(mass)}});
  return out;
}

std::string fixed6(double x) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(6) << round6(x);
  return ss.str();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("scenario must be a JSON object");

  try {
    std::vector<VariableDecl> high_decls;
    std::vector<VariableDecl> low_decls;
    std::set<std::string> seen;
    const json& vars = require(doc, "variables", "scenario");
    if (!vars.is_array()) throw SchemaError("'variables' must be a list");
    for (const auto& v : vars) {
      const auto name = require(v, "name", "variable").get<std::string>();
      const std::string where = "variable '" + name + "'";
      if (!seen.insert(name).second) throw SchemaError(where + " is declared twice");
      const json& frame = require(v, "frame", where);
      if (!frame.is_array() || frame.empty()) throw SchemaError(where + ": 'frame' must be a nonempty list");
      VariableDecl decl{name, {}};
      for (const auto& x : frame) decl.values.push_back(to_value(x, where));
      const auto cls = require(v, "class", where).get<std::string>();
      if (cls == "high") {
        high_decls.push_back(std::move(decl));
      } else if (cls == "low") {
        low_decls.push_back(std::move(decl));
      } else {
        throw SchemaError(where + ": class must be 'high' or 'low'");
      }
    }
    if (high_decls.empty()) throw SchemaError("scenario declares no high variable");

    Scenario s{AttackerSetup{build_joint_frame(high_decls), build_joint_frame(low_decls),
                             vacuous_mass(build_joint_frame(high_decls)), {}, nullptr},
               {},
               {}};
    AttackerSetup& setup = s.setup;

    const json& program = require(doc, "program", "scenario");
    if (program.is_string()) {
      setup.program = parse_program(program.get<std::string>());
    } else if (program.is_object() && program.contains("path")) {
      setup.program = parse_program(read_file(base_dir / program.at("path").get<std::string>()));
    } else {
      throw SchemaError("'program' must be a string or {\"path\": ...}");
    }

    if (doc.contains("initial_belief")) setup.initial = to_mass(doc.at("initial_belief"), setup.high, "initial_belief");
    if (doc.contains("evidence")) {
      const json& ev = doc.at("evidence");
      if (!ev.is_array()) throw SchemaError("'evidence' must be a list of beliefs");
      for (std::size_t i = 0; i < ev.size(); ++i) {
        setup.evidence.push_back(to_mass(ev[i], setup.high, "evidence[" + std::to_string(i) + "]"));
      }
    }
    try {
      validate_setup(setup);
    } catch (const FrameError& e) {
      throw SchemaError(e.what());
    }

    const json& inter = require(doc, "interactions", "scenario");
    if (!inter.is_array()) throw SchemaError("'interactions' must be a list");
    for (std::size_t i = 0; i < inter.size(); ++i) {
      const std::string where = "interactions[" + std::to_string(i) + "]";
      Interaction in{to_tuple(require(inter[i], "secret", where), setup.high, where + ".secret"),
                     to_tuple(require(inter[i], "low", where), setup.low, where + ".low"),
                     inter[i].value("carry_postbelief", false)};
      s.interactions.push_back(std::move(in));
    }

    s.config.seed = doc.value("seed", std::uint64_t{0});
    s.config.limits.max_iterations = doc.value("max_loop_iterations", s.config.limits.max_iterations);
    s.config.limits.tolerance = doc.value("tolerance", s.config.limits.tolerance);
    if (s.config.limits.max_iterations == 0) throw SchemaError("'max_loop_iterations' must be positive");
    if (!(s.config.limits.tolerance > 0.0)) throw SchemaError("'tolerance' must be positive");
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario has a field of the wrong type: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.parent_path());
}

std::vector<double> Report::summary() const {
  std::vector<double> q;
  for (const auto& r : interactions) q.push_back(r.flow.q);
  return q;
}

Report run_scenario(const Scenario& scenario) {
  std::mt19937_64 rng(scenario.config.seed);
  const MassFunction fresh = compute_prebelief(scenario.setup);
  Report report;
  std::optional<MassFunction> carried;
  for (const auto& in : scenario.interactions) {
    const MassFunction& m_pre = carried ? *carried : fresh;
    InteractionTrace trace = run_interaction(scenario.setup, m_pre, in, rng, scenario.config.limits);
    const Tuple secret[] = {in.secret};
    FlowReport flow = flow_measure(trace.m_pre, trace.m_post, point_mass(TupleSet(scenario.setup.high, secret)));
    if (in.carry_postbelief) {
      carried = trace.m_post;
    } else {
      carried.reset();
    }
    report.interactions.push_back({in, std::move(trace), flow});
  }
  return report;
}

std::string render_json(const Report& report, bool trace) {
  ordered_json out;
  out["interactions"] = ordered_json::array();
  for (const auto& r : report.interactions) {
    const InteractionTrace& t = r.trace;
    ordered_json j;
    j["secret"] = r.interaction.secret.to_string();
    j["low"] = r.interaction.low.to_string();
    j["pre"] = mass_json(t.m_pre);
    j["post"] = mass_json(t.m_post);
    j["observation"] = t.observation.to_string();
    ordered_json k = ordered_json::object();
    for (const auto& w : t.weights) k[w.step] = w.weight.k;
    j["k"] = std::move(k);
    j["gjs_pre"] = r.flow.gjs_pre;
    j["gjs_post"] = r.flow.gjs_post;
    j["q"] = r.flow.q;
    j["eta"] = r.flow.eta;
    j["within_bounds"] = r.flow.within_bounds;
    j["search_space"] = r.flow.search_space;
    if (trace) {
      j["trace"] = {
          {"dot_h", mass_json(t.dot_h)},
          {"dot_l", mass_json(t.dot_l)},
          {"input", mass_json(t.input)},
          {"m_delta", mass_json(t.m_delta)},
          {"sampled", t.sampled.to_string()},
          {"prediction_input", mass_json(t.predicted_input)},
          {"m_delta_pred", mass_json(t.m_delta_pred)},
          {"observed_set", t.observed_set.to_string()},
          {"m_delta_cond", mass_json(t.m_delta_cond)},
      };
    }
    out["interactions"].push_back(std::move(j));
  }
  out["summary"] = report.summary();
  return out.dump(2) + "\n";
}

std::string render_table(const Report& report, bool trace) {
  std::ostringstream os;
  auto mass_rows = [&](const char* label, const MassFunction& m) {
    os << "  " << label << "\n";
    for (const auto& [set, mass] : m.focal_sets()) os << "    " << fixed6(mass) << "  " << set.to_string() << "\n";
  };
  for (std::size_t i = 0; i < report.interactions.size(); ++i) {
    const auto& r = report.interactions[i];
    const InteractionTrace& t = r.trace;
    os << "interaction " << i + 1 << ": secret " << r.interaction.secret.to_string() << ", low "
       << r.interaction.low.to_string() << "\n";
    if (trace) {
      mass_rows("input", t.input);
      mass_rows("m_delta", t.m_delta);
      os << "  sampled " << t.sampled.to_string() << "\n";
      mass_rows("prediction input", t.predicted_input);
      mass_rows("m_delta (prediction)", t.m_delta_pred);
      os << "  observed set " << t.observed_set.to_string() << "\n";
      mass_rows("m_delta (conditioned)", t.m_delta_cond);
    }
    mass_rows("prebelief", t.m_pre);
    mass_rows("postbelief", t.m_post);
    os << "  observation " << t.observation.to_string() << "\n";
    for (const auto& w : t.weights) os << "  k(" << w.step << ") = " << std::setprecision(10) << w.weight.k << "\n";
    os << std::fixed << std::setprecision(6);
    os << "  gjs_pre " << r.flow.gjs_pre << "  gjs_post " << r.flow.gjs_post << "\n";
    os << "  q " << r.flow.q << " bits  (range [-" << r.flow.eta << ", " << r.flow.eta << "]"
       << (r.flow.within_bounds ? "" : ", OUT OF RANGE") << ")\n";
    os << "  search space " << r.flow.search_space << "\n";
    os << std::defaultfloat;
  }
  os << "summary q:";
  os << std::fixed << std::setprecision(6);
  for (double q : report.summary()) os << " " << q;
  os << "\n";
  return os.str();
}

}  // namespace dsqif
