#include "dsqif/belief.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dsqif/errors.hpp"

namespace dsqif {

namespace {

std::string format_mass(double m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", m);
  return buf;
}

std::string render(const FocalMap& entries) {
  std::string out = "[";
  bool first = true;
  for (const auto& [set, mass] : entries) {
    if (!first) out += "; ";
    first = false;
    out += set.to_string() + ": " + format_mass(mass);
  }
  return out + "]";
}

double lookup(const FocalMap& entries, const TupleSet& set) {
  auto it = entries.find(set);
  return it == entries.end() ? 0.0 : it->second;
}

void prune(FocalMap& entries) {
  std::erase_if(entries, [](const auto& e) { return e.second < kPruneThreshold; });
}

template <class Map>
bool maps_close(const Map& a, const Map& b, double tolerance) {
  // A focal set present on one side only must itself be within tolerance.
  for (const auto& [set, mass] : a) {
    if (std::abs(mass - lookup(b, set)) > tolerance) return false;
  }
  for (const auto& [set, mass] : b) {
    if (!a.contains(set) && mass > tolerance) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// MassFunction

MassFunction MassFunction::make(const JointFrame& frame, std::vector<std::pair<TupleSet, double>> entries) {
  if (entries.empty()) throw MassError("a mass function needs at least one focal set");
  FocalMap focal;
  double total = 0.0;
  for (auto& [set, mass] : entries) {
    if (set.frame() != frame) throw FrameError("focal set " + set.to_string() + " is outside the frame");
    if (set.empty()) throw MassError("the empty set cannot carry mass");
    if (!(mass > 0.0) || mass > 1.0 + kMassSumTolerance) {
      throw MassError("mass " + std::to_string(mass) + " of " + set.to_string() + " is outside (0, 1]");
    }
    total += mass;
    focal[set] += mass;
  }
  if (std::abs(total - 1.0) > kMassSumTolerance) {
    throw MassError("masses sum to " + std::to_string(total) + ", not 1");
  }
  return MassFunction(frame, std::move(focal));
}

double MassFunction::mass_of(const TupleSet& set) const { return lookup(focal_, set); }

bool MassFunction::is_bayesian() const {
  return std::all_of(focal_.begin(), focal_.end(), [](const auto& e) { return e.first.size() == 1; });
}

std::string MassFunction::to_string() const { return render(focal_); }

// ---------------------------------------------------------------------------
// SubnormalMass

double SubnormalMass::mass_of(const TupleSet& set) const { return lookup(entries_, set); }

double SubnormalMass::total() const {
  double t = 0.0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

void SubnormalMass::add(const TupleSet& set, double mass) {
  if (set.frame() != frame_) throw FrameError("tuple set " + set.to_string() + " is outside the frame");
  if (!(mass > 0.0)) return;
  auto& slot = entries_[set];
  slot += mass;
  if (slot < kPruneThreshold) entries_.erase(set);
}

SubnormalMass SubnormalMass::scaled(double weight) const {
  SubnormalMass out(frame_);
  if (!(weight > 0.0)) return out;
  for (const auto& [set, mass] : entries_) out.entries_.emplace(set, mass * weight);
  prune(out.entries_);
  return out;
}

SubnormalMass SubnormalMass::without_empty() const {
  SubnormalMass out = *this;
  out.entries_.erase(TupleSet(frame_));
  return out;
}

std::string SubnormalMass::to_string() const { return render(entries_); }

// ---------------------------------------------------------------------------
// Free operations

MassFunction make_mass(const JointFrame& frame, std::vector<std::pair<TupleSet, double>> entries) {
  return MassFunction::make(frame, std::move(entries));
}

MassFunction point_mass(const TupleSet& set) {
  if (set.empty()) throw MassError("a point mass needs a nonempty set");
  return MassFunction::make(set.frame(), {{set, 1.0}});
}

MassFunction vacuous_mass(const JointFrame& frame) { return point_mass(TupleSet::full(frame)); }

MassFunction project_mass(const MassFunction& m, const JointFrame& target) {
  SubnormalMass out(target);
  for (const auto& [set, mass] : m.focal_sets()) out.add(project_tuple_set(set, target), mass);
  return normalize(out);
}

MassFunction project_mass(const MassFunction& m, std::span<const VariableId> vars) {
  return project_mass(m, m.frame().restricted_to(vars));
}

double belief_of(const MassFunction& m, const TupleSet& set) {
  if (set.frame() != m.frame()) throw FrameError("belief queried outside the mass function's frame");
  double bel = 0.0;
  for (const auto& [focal, mass] : m.focal_sets()) {
    if (focal.is_subset_of(set)) bel += mass;
  }
  return bel;
}

MassFunction normalize(const SubnormalMass& sm) {
  FocalMap focal = sm.entries();
  focal.erase(TupleSet(sm.frame()));
  double total = 0.0;
  for (const auto& e : focal) total += e.second;
  if (!(total > kPruneThreshold)) {
    throw MassError("cannot normalize: no mass outside the empty set");
  }
  for (auto& e : focal) e.second /= total;
  prune(focal);
  return MassFunction(sm.frame(), std::move(focal));
}

MassFunction mix(const MassFunction& m1, const MassFunction& m2) {
  if (m1.frame() != m2.frame()) throw FrameError("mix requires masses on the same frame");
  SubnormalMass sum(m1.frame());
  for (const auto& [set, mass] : m1.focal_sets()) sum.add(set, mass / 2.0);
  for (const auto& [set, mass] : m2.focal_sets()) sum.add(set, mass / 2.0);
  return normalize(sum);
}

SubnormalMass weighted_sum(std::span<const std::pair<double, SubnormalMass>> parts) {
  if (parts.empty()) throw MassError("weighted_sum needs at least one part");
  SubnormalMass out(parts.front().second.frame());
  for (const auto& [weight, part] : parts) {
    if (part.frame() != out.frame()) throw FrameError("weighted_sum over different frames");
    if (weight < 0.0) throw MassError("negative weight in weighted_sum");
    for (const auto& [set, mass] : part.entries()) out.add(set, weight * mass);
  }
  return out;
}

bool approx_equal(const MassFunction& a, const MassFunction& b, double tolerance) {
  return a.frame() == b.frame() && maps_close(a.focal_sets(), b.focal_sets(), tolerance);
}

bool approx_equal(const SubnormalMass& a, const SubnormalMass& b, double tolerance) {
  return a.frame() == b.frame() && maps_close(a.entries(), b.entries(), tolerance);
}

}  // namespace dsqif
