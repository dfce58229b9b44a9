#pragma once

// Mass functions over joint frames.
//
// MassFunction is always normalized: no mass on the empty set and a total of
// one. SubnormalMass is the working form used inside lifted execution; it may
// weigh the empty set and its total is unconstrained. The only way from the
// latter to the former is normalize().

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsqif/frames.hpp"

namespace dsqif {

inline constexpr double kMassSumTolerance = 1e-9;
// Entries below this after arithmetic are dropped.
inline constexpr double kPruneThreshold = 1e-12;

using FocalMap = std::map<TupleSet, double>;

class SubnormalMass;

class MassFunction {
 public:
  // Validates the mass-function axioms; throws MassError or FrameError.
  static MassFunction make(const JointFrame& frame, std::vector<std::pair<TupleSet, double>> entries);

  const JointFrame& frame() const { return frame_; }
  // Focal sets in canonical order.
  const FocalMap& focal_sets() const { return focal_; }
  std::size_t size() const { return focal_.size(); }
  // Mass of `set`; zero when it is not focal.
  double mass_of(const TupleSet& set) const;
  // Every focal set is a singleton.
  bool is_bayesian() const;

  // `[{set}: 0.980000; {set}: 0.020000]`
  std::string to_string() const;

 private:
  friend class SubnormalMass;
  friend MassFunction normalize(const SubnormalMass& sm);
  MassFunction(JointFrame frame, FocalMap focal) : frame_(std::move(frame)), focal_(std::move(focal)) {}

  JointFrame frame_;
  FocalMap focal_;
};

class SubnormalMass {
 public:
  explicit SubnormalMass(JointFrame frame) : frame_(std::move(frame)) {}
  SubnormalMass(const MassFunction& m) : frame_(m.frame()), entries_(m.focal_sets()) {}  // NOLINT

  const JointFrame& frame() const { return frame_; }
  const FocalMap& entries() const { return entries_; }
  double mass_of(const TupleSet& set) const;
  double empty_mass() const { return mass_of(TupleSet(frame_)); }
  double total() const;
  double nonempty_total() const { return total() - empty_mass(); }
  bool is_zero() const { return entries_.empty(); }

  // Adds `mass` to `set` (which may be empty). Non-positive or pruned masses
  // are ignored.
  void add(const TupleSet& set, double mass);
  SubnormalMass scaled(double weight) const;
  SubnormalMass without_empty() const;

  // Same layout as MassFunction::to_string, `{}` standing for the empty set.
  std::string to_string() const;

 private:
  JointFrame frame_;
  FocalMap entries_;
};

MassFunction make_mass(const JointFrame& frame, std::vector<std::pair<TupleSet, double>> entries);

// m(set) = 1. Throws MassError on an empty set.
MassFunction point_mass(const TupleSet& set);
// All mass on the whole frame: total ignorance.
MassFunction vacuous_mass(const JointFrame& frame);

// Marginal on `target` (a sub-frame); colliding projections add up.
MassFunction project_mass(const MassFunction& m, const JointFrame& target);
MassFunction project_mass(const MassFunction& m, std::span<const VariableId> vars);

// Bel(A): total mass of focal sets contained in A.
double belief_of(const MassFunction& m, const TupleSet& set);

// Drops the empty-set entry and rescales the rest to sum to one. Throws
// MassError when nothing but the empty set carries mass.
MassFunction normalize(const SubnormalMass& sm);

// Pointwise average (m1 + m2) / 2.
MassFunction mix(const MassFunction& m1, const MassFunction& m2);

// Sum of weight_i * part_i entry-wise, the empty set included.
SubnormalMass weighted_sum(std::span<const std::pair<double, SubnormalMass>> parts);

// Same frame, same focal sets, masses within `tolerance`.
bool approx_equal(const MassFunction& a, const MassFunction& b, double tolerance);
bool approx_equal(const SubnormalMass& a, const SubnormalMass& b, double tolerance);

}  // namespace dsqif
