// Acceptance checks, one line per criterion.
//
//   acceptance          run all nine
//   acceptance 3 5      run the listed ones
//
// Exit status is zero only if every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsqif/errors.hpp"
#include "dsqif/evidence.hpp"
#include "dsqif/scenario.hpp"
#include "support.hpp"

using namespace dsqif;
using support::tuples;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report line.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { extra_ += (extra_.empty() ? "" : ", ") + s; }
  Verdict verdict() const {
    std::ostringstream os;
    os << checks_ - failures_ << "/" << checks_ << " checks";
    if (!extra_.empty()) os << ", " << extra_;
    if (failures_ > 0) os << "; first failures: " << notes_;
    return {failures_ == 0, os.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string notes_;
  std::string extra_;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

const std::string kScenarioDir = std::string(DSQIF_SOURCE_DIR) + "/scenarios/";

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  if (status != 0) throw std::runtime_error(cmd + " exited with status " + std::to_string(status));
  return out;
}

std::string cli(const std::string& args) { return capture(std::string(DSQIF_CLI) + " " + args); }

// ---------------------------------------------------------------------------

Verdict golden(const char* file, const std::vector<MassFunction>& posts, const std::vector<double>& flows) {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  const Report r = run_scenario(load_scenario(kScenarioDir + file));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(r.interactions.size() == posts.size(), "interaction count");
  for (std::size_t i = 0; i < posts.size() && i < r.interactions.size(); ++i) {
    const MassFunction& got = r.interactions[i].trace.m_post;
    c.expect(approx_equal(got, posts[i], 1e-9), "post " + std::to_string(i + 1) + " = " + got.to_string());
    const double q = r.interactions[i].flow.q;
    c.expect(std::abs(q - flows[i]) <= 1e-3, "q" + std::to_string(i + 1) + " = " + fmt(q));
    c.note("q" + std::to_string(i + 1) + "=" + fmt(q));
  }
  c.expect(secs < 1.0, "runtime " + fmt(secs) + " s");
  c.note("runtime " + fmt(secs) + " s");
  return c.verdict();
}

Verdict criterion1() {
  const JointFrame h = support::pwc_high();
  return golden("experiment1.json", {point_mass(tuples(h, {{"A"}})), point_mass(tuples(h, {{"B"}, {"C"}}))},
                {0.020145, 0.97999});
}

Verdict criterion2() {
  const JointFrame h = support::pwc_high();
  return golden("experiment2.json",
                {point_mass(tuples(h, {{"A"}})),
                 make_mass(h, {{tuples(h, {{"B"}}), 0.98}, {tuples(h, {{"B"}, {"C"}}), 0.02}})},
                {1.01999, 0.01999});
}

Verdict criterion3() {
  Checker c;
  const auto report = nlohmann::json::parse(cli("analyze --format json --trace --scenario " + kScenarioDir + "experiment1.json"));
  const auto& first = report.at("interactions").at(0);
  const auto& t = first.at("trace");
  using Entries = std::map<std::string, double>;
  auto matches = [&](const nlohmann::json& mass, const Entries& expected, const std::string& name) {
    Entries got;
    for (const auto& e : mass) got[e.at("set").get<std::string>()] = e.at("mass").get<double>();
    bool ok = got.size() == expected.size();
    for (const auto& [set, m] : expected) ok = ok && got.count(set) && std::abs(got[set] - m) <= 1e-9;
    c.expect(ok, name + " = " + mass.dump());
  };
  matches(t.at("input"), {{"{(a->0, g->A, p->A)}", 1.0}}, "input");
  matches(t.at("m_delta"), {{"{(a->1, g->A, p->A)}", 1.0}}, "m_delta");
  matches(t.at("m_delta_pred"), {{"{(a->1, g->A, p->A)}", 0.98}, {"{(a->0, g->A, p->B), (a->0, g->A, p->C)}", 0.02}},
          "prediction");
  const double k = first.at("k").at("conditioning").get<double>();
  c.expect(std::abs(k - 1.0 / 0.98) <= 1e-9, "k = " + fmt(k));
  c.note("k=" + fmt(k));
  matches(t.at("m_delta_cond"), {{"{(a->1, g->A, p->A)}", 1.0}}, "conditioned");
  return c.verdict();
}

Verdict criterion4() {
  Checker c;
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 2;
    const auto mm = support::random_masks(rng, n, 4, 1000);
    const double au = aggregate_uncertainty(support::from_masks(support::worlds(n), mm));
    const double ref = support::ref_au_grid(mm, n);
    worst = std::max(worst, std::abs(au - ref));
    c.expect(std::abs(au - ref) <= 5e-3, "AU " + fmt(au) + " vs grid " + fmt(ref));
  }
  c.note("worst gap " + fmt(worst));
  for (int n = 1; n <= 8; ++n) {
    const JointFrame w = support::worlds(n);
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i) {
      c.expect(aggregate_uncertainty(point_mass(support::from_mask(w, 1u << i))) == 0.0, "AU(point) != 0");
    }
    const double v = aggregate_uncertainty(vacuous_mass(w));
    c.expect(v == std::log2(static_cast<double>(n)), "AU(vacuous " + std::to_string(n) + ") = " + fmt(v));
  }
  return c.verdict();
}

Verdict criterion5() {
  Checker c;
  std::mt19937_64 rng(505);
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    const JointFrame w = support::worlds(n);
    const MassFunction pre = support::random_mass(rng, w, 4);
    const MassFunction post = support::random_mass(rng, w, 4);
    const std::uint32_t world = std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng);
    const FlowReport r = flow_measure(pre, post, point_mass(support::from_mask(w, 1u << world)));
    const bool in = -r.eta - 1e-9 <= r.q && r.q <= r.eta + 1e-9;
    c.expect(in, "|W|=" + std::to_string(n) + " q=" + fmt(r.q) + " eta=" + fmt(r.eta));
    c.expect(in == r.within_bounds, "within_bounds flag disagrees");
    if (!in) {
      ++violations;
      worst = std::max(worst, std::abs(r.q) - r.eta);
    }
  }
  c.note(std::to_string(violations) + " of 1000 triples out of range, worst excess " + fmt(worst) + " bits");
  return c.verdict();
}

Verdict criterion6() {
  Checker c;
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const JointFrame w = support::worlds(2 + i % 4);
    const MassFunction m1 = support::random_bayesian(rng, w);
    const MassFunction m2 = support::random_bayesian(rng, w);
    const double g = gen_js(m1, m2);
    const double js = js_divergence(Distribution::from_bayesian(m1), Distribution::from_bayesian(m2));
    worst = std::max(worst, std::abs(g - js));
    c.expect(std::abs(g - js) <= 1e-9, "GJS " + fmt(g) + " vs JS " + fmt(js));
    c.expect(gen_hartley(m1) == 0.0 && gen_hartley(m2) == 0.0, "GH of a Bayesian mass is not 0");
  }
  c.note("worst gap " + fmt(worst));
  return c.verdict();
}

bool throws_conflict(const std::function<void()>& f) {
  try {
    f();
  } catch (const TotalConflictError&) {
    return true;
  }
  return false;
}

Verdict criterion7() {
  Checker c;
  std::mt19937_64 rng(707);
  const JointFrame w = support::worlds(3);
  int conflicts = 0;
  for (int i = 0; i < 200; ++i) {
    const MassFunction a = support::random_mass(rng, w, 4);
    const MassFunction b = support::random_mass(rng, w, 4);
    const MassFunction x = support::random_mass(rng, w, 4);
    if (throws_conflict([&] { combine_same_frame(a, b); })) {
      ++conflicts;
      c.expect(throws_conflict([&] { combine_same_frame(b, a); }), "conflict is not symmetric");
    } else {
      c.expect(approx_equal(combine_same_frame(a, b).mass, combine_same_frame(b, a).mass, 1e-12), "a*b != b*a");
    }
    const bool left_conflict = throws_conflict([&] { combine_same_frame(combine_same_frame(a, b).mass, x); });
    const bool right_conflict = throws_conflict([&] { combine_same_frame(a, combine_same_frame(b, x).mass); });
    c.expect(left_conflict == right_conflict, "conflict depends on grouping");
    if (!left_conflict && !right_conflict) {
      c.expect(approx_equal(combine_same_frame(combine_same_frame(a, b).mass, x).mass,
                            combine_same_frame(a, combine_same_frame(b, x).mass).mass, 1e-9),
               "(a*b)*c != a*(b*c)");
    }
    c.expect(approx_equal(combine_same_frame(vacuous_mass(w), a).mass, a, 1e-12), "vacuous is not neutral");
    c.expect(approx_equal(combine_same_frame(a, vacuous_mass(w)).mass, a, 1e-12), "vacuous is not neutral");
  }
  for (std::uint32_t i = 0; i < 3; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      c.expect(throws_conflict([&] {
                 combine_same_frame(point_mass(support::from_mask(w, 1u << i)), point_mass(support::from_mask(w, 1u << j)));
               }),
               "disjoint points combined");
    }
  }
  c.note(std::to_string(conflicts) + " random pairs in total conflict");
  return c.verdict();
}

bool has_choice(const Command& c) { return print_program(c).find('[') != std::string::npos; }

Verdict criterion8() {
  Checker c;
  std::mt19937_64 rng(808);
  std::vector<Value> vs{Value(0), Value(1), Value(2), Value(3)};
  const JointFrame f = build_joint_frame({{"x", vs}, {"y", vs}});

  // Programs whose concrete runs stay inside the frame from every state.
  auto admissible = [&](const Command& prog) {
    std::mt19937_64 local(1);
    try {
      for (std::uint64_t i = 0; i < f.cardinality(); ++i) {
        const State out = exec_concrete(prog, f.tuple_at(i).assignment(), local);
        Tuple::make(f, out);
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  };

  support::ProgramGen det{rng};
  int programs = 0;
  while (programs < 50) {
    const CommandPtr prog = det.command(3);
    if (!admissible(*prog)) continue;
    ++programs;
    std::mt19937_64 unused(0);
    for (std::uint64_t i = 0; i < f.cardinality(); ++i) {
      const Tuple sigma = f.tuple_at(i);
      const Tuple one[] = {sigma};
      const MassFunction lifted = normalize(exec_lifted(*prog, point_mass(TupleSet(f, one))));
      const Tuple concrete[] = {Tuple::make(f, exec_concrete(*prog, sigma.assignment(), unused))};
      c.expect(approx_equal(lifted, point_mass(TupleSet(f, concrete)), 0.0),
               "deterministic program disagrees on " + sigma.to_string());
    }
  }

  support::ProgramGen prob{rng, true};
  constexpr int kRuns = 10000;
  int pchoice = 0;
  while (pchoice < 10) {
    const CommandPtr prog = prob.command(3);
    if (!has_choice(*prog) || !admissible(*prog)) continue;
    ++pchoice;
    const Tuple sigma = f.tuple_at(std::uniform_int_distribution<std::uint64_t>(0, f.cardinality() - 1)(rng));
    const Tuple one[] = {sigma};
    const MassFunction lifted = normalize(exec_lifted(*prog, point_mass(TupleSet(f, one))));
    std::map<std::uint64_t, int> counts;
    std::mt19937_64 runs(9000 + pchoice);
    for (int r = 0; r < kRuns; ++r) ++counts[Tuple::make(f, exec_concrete(*prog, sigma.assignment(), runs)).index()];
    std::map<std::uint64_t, double> expected;
    for (const auto& [set, mass] : lifted.focal_sets()) {
      c.expect(set.size() == 1, "lifted output from a point is not a point");
      expected[set.indices().front()] += mass;
    }
    for (const auto& [idx, n] : counts) expected.try_emplace(idx, 0.0);
    for (const auto& [idx, p] : expected) {
      const double freq = counts.count(idx) ? counts[idx] / static_cast<double>(kRuns) : 0.0;
      const double se = std::sqrt(p * (1.0 - p) / kRuns);
      c.expect(std::abs(freq - p) <= 3.0 * se + 1e-12,
               "state " + f.tuple_at(idx).to_string() + " freq " + fmt(freq) + " vs mass " + fmt(p));
    }
  }
  c.note("50 deterministic + 10 pchoice programs");
  return c.verdict();
}

Verdict criterion9() {
  Checker c;
  for (const char* name : {"experiment1.json", "experiment2.json"}) {
    const std::string args = std::string("analyze --format json --trace --seed 17 --scenario ") + kScenarioDir + name;
    const std::string a = cli(args);
    const std::string b = cli(args);
    c.expect(!a.empty() && a == b, std::string(name) + " differs between runs");
    const std::string d1 = cli(std::string("analyze --format json --scenario ") + kScenarioDir + name);
    const std::string d2 = cli(std::string("analyze --format json --scenario ") + kScenarioDir + name);
    c.expect(d1 == d2, std::string(name) + " differs between runs with the file seed");
  }
  return c.verdict();
}

struct Criterion {
  int id;
  const char* title;
  Verdict (*run)();
};

const Criterion kCriteria[] = {
    {1, "golden experiment 1", criterion1},
    {2, "golden experiment 2", criterion2},
    {3, "intermediate trace of experiment 1", criterion3},
    {4, "aggregate uncertainty against the grid oracle", criterion4},
    {5, "flow stays within [-eta, eta]", criterion5},
    {6, "reduction to Jensen-Shannon on Bayesian masses", criterion6},
    {7, "combination algebra", criterion7},
    {8, "lifted and concrete semantics agree", criterion8},
    {9, "byte-identical reports for a fixed seed", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::stoi(argv[i]));
  bool all_pass = true;
  for (const auto& cr : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), cr.id) == wanted.end()) continue;
    Verdict v;
    try {
      v = cr.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << cr.id << ": " << cr.title << " (" << v.detail << ")"
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
