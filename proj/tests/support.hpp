#pragma once

// Helpers shared by the unit tests and the acceptance binary: small frames,
// random mass functions and programs, and reference implementations that
// work on bitmask sets without touching the library's algorithms.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "dsqif/belief.hpp"
#include "dsqif/lang.hpp"

namespace support {

using dsqif::JointFrame;
using dsqif::MassFunction;
using dsqif::TupleSet;
using dsqif::Value;

// One variable `w` ranging over 0..n-1; world i is tuple i.
inline JointFrame worlds(int n) {
  std::vector<Value> values;
  for (int i = 0; i < n; ++i) values.emplace_back(i);
  return dsqif::build_joint_frame({{"w", values}});
}

inline std::vector<Value> atoms(std::initializer_list<const char*> names) {
  std::vector<Value> out;
  for (const char* n : names) out.push_back(Value::atom(n));
  return out;
}

inline TupleSet from_mask(const JointFrame& frame, std::uint32_t mask) {
  std::vector<std::uint64_t> idx;
  for (std::uint64_t i = 0; i < frame.cardinality(); ++i) {
    if (mask & (1u << i)) idx.push_back(i);
  }
  return TupleSet(frame, idx);
}

inline std::uint32_t to_mask(const TupleSet& set) {
  std::uint32_t m = 0;
  for (auto i : set.indices()) m |= 1u << i;
  return m;
}

using MaskMass = std::map<std::uint32_t, double>;

inline MaskMass to_masks(const MassFunction& m) {
  MaskMass out;
  for (const auto& [set, mass] : m.focal_sets()) out[to_mask(set)] += mass;
  return out;
}

inline MassFunction from_masks(const JointFrame& frame, const MaskMass& mm) {
  std::vector<std::pair<TupleSet, double>> entries;
  for (const auto& [mask, mass] : mm) entries.emplace_back(from_mask(frame, mask), mass);
  return dsqif::make_mass(frame, entries);
}

// Random mass over n worlds with up to `max_focal` focal sets. With
// `grain` > 0 every mass is a multiple of 1/grain.
inline MaskMass random_masks(std::mt19937_64& rng, int n, int max_focal, int grain = 0) {
  const std::uint32_t full = (1u << n) - 1;
  std::uniform_int_distribution<std::uint32_t> pick(1, full);
  std::uniform_int_distribution<int> count(1, max_focal);
  const int k = count(rng);
  MaskMass out;
  if (grain > 0) {
    // k-1 cut points in 1..grain-1 give k positive integer parts (after
    // merging collisions).
    std::uniform_int_distribution<int> cut(1, grain - 1);
    std::vector<int> cuts{0, grain};
    for (int i = 1; i < k; ++i) cuts.push_back(cut(rng));
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      const int part = cuts[i] - cuts[i - 1];
      if (part > 0) out[pick(rng)] += static_cast<double>(part) / grain;
    }
    return out;
  }
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<std::pair<std::uint32_t, double>> raw;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    raw.emplace_back(pick(rng), w(rng));
    total += raw.back().second;
  }
  for (const auto& [mask, x] : raw) out[mask] += x / total;
  return out;
}

inline MassFunction random_mass(std::mt19937_64& rng, const JointFrame& frame, int max_focal, int grain = 0) {
  return from_masks(frame, random_masks(rng, static_cast<int>(frame.cardinality()), max_focal, grain));
}

inline MassFunction random_bayesian(std::mt19937_64& rng, const JointFrame& frame) {
  std::uniform_real_distribution<double> w(0.0, 1.0);
  MaskMass mm;
  double total = 0.0;
  std::vector<double> xs;
  for (std::uint64_t i = 0; i < frame.cardinality(); ++i) {
    xs.push_back(w(rng) < 0.2 ? 0.0 : w(rng));
    total += xs.back();
  }
  if (total == 0.0) {
    xs[0] = 1.0;
    total = 1.0;
  }
  for (std::uint64_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0) mm[1u << i] = xs[i] / total;
  }
  return from_masks(frame, mm);
}


// ---------------------------------------------------------------------------
// The password-checker setting: secret p, guess g, answer a.

inline JointFrame pwc_high() { return dsqif::build_joint_frame({{"p", atoms({"A", "B", "C"})}}); }
inline JointFrame pwc_low() {
  return dsqif::build_joint_frame({{"g", atoms({"A", "B", "C"})}, {"a", {Value(0), Value(1)}}});
}
inline JointFrame pwc_joint() { return pwc_high().united_with(pwc_low()); }

// tuple(frame, "A A 1") with values listed in the frame's variable order
// (a, g, p for the joint frame). Digits are integers, anything else atoms.
inline dsqif::Tuple tuple(const JointFrame& frame, std::initializer_list<const char*> values) {
  std::map<dsqif::VariableId, Value> asg;
  auto it = values.begin();
  for (const auto& v : frame.variables()) {
    const std::string text = *it++;
    asg[v.name] = std::isdigit(static_cast<unsigned char>(text[0])) ? Value(std::stoi(text)) : Value::atom(text);
  }
  return dsqif::Tuple::make(frame, asg);
}

inline TupleSet tuples(const JointFrame& frame, std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<dsqif::Tuple> ts;
  for (const auto& r : rows) ts.push_back(tuple(frame, r));
  return TupleSet(frame, ts);
}

// ---------------------------------------------------------------------------
// Reference implementations

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Dempster's rule by enumerating every focal pair.
inline MaskMass ref_combine(const MaskMass& a, const MaskMass& b) {
  MaskMass raw;
  double conflict = 0.0;
  for (const auto& [x, mx] : a) {
    for (const auto& [y, my] : b) {
      if (x & y) {
        raw[x & y] += mx * my;
      } else {
        conflict += mx * my;
      }
    }
  }
  for (auto& [mask, mass] : raw) mass /= 1.0 - conflict;
  return raw;
}

inline double ref_belief(const MaskMass& m, std::uint32_t set) {
  double b = 0.0;
  for (const auto& [mask, mass] : m) {
    if ((mask & ~set) == 0) b += mass;
  }
  return b;
}

// Maximum Shannon entropy over distributions p on the integer grid
// {p_i = c_i / grain} with sum_{x in A} p(x) >= Bel(A) for every A. Masses
// must be multiples of 1/grain so that each constraint is an exact integer
// inequality. Only 2 or 3 worlds.
inline double ref_au_grid(const MaskMass& m, int n, int grain = 1000) {
  const std::uint32_t full = (1u << n) - 1;
  std::vector<long> bel(full + 1, 0);
  for (std::uint32_t a = 1; a <= full; ++a) bel[a] = std::lround(ref_belief(m, a) * grain);
  std::vector<double> h(grain + 1);
  for (int c = 0; c <= grain; ++c) h[c] = -plogp(static_cast<double>(c) / grain);
  auto feasible = [&](const std::vector<int>& c) {
    for (std::uint32_t a = 1; a <= full; ++a) {
      long s = 0;
      for (int i = 0; i < n; ++i) {
        if (a & (1u << i)) s += c[i];
      }
      if (s < bel[a]) return false;
    }
    return true;
  };
  double best = -1.0;
  std::vector<int> c(n, 0);
  if (n == 2) {
    for (c[0] = 0; c[0] <= grain; ++c[0]) {
      c[1] = grain - c[0];
      if (feasible(c)) best = std::max(best, h[c[0]] + h[c[1]]);
    }
  } else {
    for (c[0] = 0; c[0] <= grain; ++c[0]) {
      for (c[1] = 0; c[0] + c[1] <= grain; ++c[1]) {
        c[2] = grain - c[0] - c[1];
        if (feasible(c)) best = std::max(best, h[c[0]] + h[c[1]] + h[c[2]]);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random programs over variables x and y

struct ProgramGen {
  std::mt19937_64& rng;
  bool choices = false;
  bool loops = false;
  bool atoms = false;

  int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  dsqif::AexpPtr aexp(int depth) {
    switch (depth > 0 ? roll(4) : roll(2)) {
      case 0:
        if (atoms && roll(3) == 0) return dsqif::make_atom(roll(2) ? "A" : "B");
        return dsqif::make_int(roll(4) - (atoms ? 1 : 0));
      case 1:
        return dsqif::make_var(roll(2) ? "x" : "y");
      default:
        return dsqif::make_arith(static_cast<dsqif::ArithOp>(roll(3)), aexp(depth - 1), aexp(depth - 1));
    }
  }

  dsqif::BexpPtr bexp(int depth) {
    switch (depth > 0 ? roll(5) : roll(2)) {
      case 0:
        return dsqif::make_bool(roll(2) == 0);
      case 1:
      case 2:
        return dsqif::make_compare(static_cast<dsqif::CompareOp>(roll(4)), aexp(1), aexp(1));
      case 3:
        return dsqif::make_not(bexp(depth - 1));
      default:
        return dsqif::make_logic(static_cast<dsqif::LogicOp>(roll(2)), bexp(depth - 1), bexp(depth - 1));
    }
  }

  dsqif::CommandPtr command(int depth) {
    const int kinds = depth > 0 ? 4 + (choices ? 1 : 0) + (loops ? 1 : 0) : 2;
    switch (roll(kinds)) {
      case 0:
        return dsqif::make_skip();
      case 1:
        return dsqif::make_assign(roll(2) ? "x" : "y", aexp(2));
      case 2:
        return dsqif::make_seq(command(depth - 1), command(depth - 1));
      case 3:
        return dsqif::make_if(bexp(2), command(depth - 1), command(depth - 1));
      case 4:
        if (choices) return dsqif::make_choice((1 + roll(9)) / 10.0, command(depth - 1), command(depth - 1));
        [[fallthrough]];
      default:
        return dsqif::make_while(bexp(1), command(depth - 1));
    }
  }
};

}  // namespace support
