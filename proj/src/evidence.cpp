#include "dsqif/evidence.hpp"

#include "dsqif/errors.hpp"

namespace dsqif {

namespace {

template <class Pool>
Combined pool_pairs(const JointFrame& frame, const MassFunction& m1, const MassFunction& m2, Pool pool) {
  SubnormalMass acc(frame);
  double normalizer = 0.0;
  for (const auto& [b, mb] : m1.focal_sets()) {
    for (const auto& [c, mc] : m2.focal_sets()) {
      TupleSet a = pool(b, c);
      if (a.empty()) continue;
      normalizer += mb * mc;
      acc.add(a, mb * mc);
    }
  }
  if (normalizer < kTotalConflictThreshold) {
    throw TotalConflictError("total conflict: every pair of focal sets combines to the empty set");
  }
  return {normalize(acc), {1.0 / normalizer, normalizer}};
}

}  // namespace

Combined combine_same_frame(const MassFunction& m1, const MassFunction& m2) {
  if (m1.frame() != m2.frame()) throw FrameError("combine_same_frame requires identical frames");
  return pool_pairs(m1.frame(), m1, m2, [](const TupleSet& b, const TupleSet& c) { return b.intersect(c); });
}

Combined combine_join(const MassFunction& m1, const MassFunction& m2) {
  const JointFrame joined = m1.frame().united_with(m2.frame());
  return pool_pairs(joined, m1, m2, [](const TupleSet& b, const TupleSet& c) { return natural_join(b, c); });
}

Combined condition_on_set(const MassFunction& m, const TupleSet& evidence) {
  if (evidence.frame() != m.frame()) throw FrameError("conditioning set is outside the frame");
  SubnormalMass acc(m.frame());
  double normalizer = 0.0;
  for (const auto& [c, mass] : m.focal_sets()) {
    TupleSet a = c.intersect(evidence);
    if (a.empty()) continue;
    normalizer += mass;
    acc.add(a, mass);
  }
  if (normalizer < kTotalConflictThreshold) {
    throw TotalConflictError("conditioning evidence " + evidence.to_string() + " contradicts every focal set");
  }
  return {normalize(acc), {1.0 / normalizer, normalizer}};
}

SubnormalMass condition_unnormalized(const SubnormalMass& m, const TupleSet& evidence) {
  if (evidence.frame() != m.frame()) throw FrameError("conditioning set is outside the frame");
  SubnormalMass out(m.frame());
  for (const auto& [c, mass] : m.entries()) out.add(c.intersect(evidence), mass);
  return out;
}

SubnormalMass mass_update(const SubnormalMass& m, const VariableId& var, const TupleValueFn& value) {
  if (!m.frame().has(var)) throw FrameError("variable '" + var + "' is not in the frame");
  SubnormalMass out(m.frame());
  for (const auto& [set, mass] : m.entries()) {
    std::vector<Tuple> moved;
    moved.reserve(set.size());
    for (const auto& t : set.tuples()) moved.push_back(t.with(var, value(t)));
    out.add(TupleSet(m.frame(), moved), mass);
  }
  return out;
}

}  // namespace dsqif
