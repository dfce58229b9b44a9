#pragma once

// Dempster's rule of combination and conditioning, plus the two operations
// the lifted language needs: conditioning without renormalization and the
// pushforward of a mass function through a variable update.

#include <functional>

#include "dsqif/belief.hpp"

namespace dsqif {

// Below this normalizer the evidence is treated as totally conflicting.
inline constexpr double kTotalConflictThreshold = 1e-12;

// Dempster's normalization constant. `normalizer` is 1/k: the total mass of
// non-conflicting focal pairs.
struct ConflictWeight {
  double k = 1.0;
  double normalizer = 1.0;
  double conflict_mass() const { return 1.0 - normalizer; }
};

struct Combined {
  MassFunction mass;
  ConflictWeight weight;
};

// m1 ⊗ m2 on one frame, pooling focal pairs by intersection.
Combined combine_same_frame(const MassFunction& m1, const MassFunction& m2);

// m1 ⊗ m2 across frames s and t, pooling focal pairs by natural join. On
// equal frames this coincides with combine_same_frame.
Combined combine_join(const MassFunction& m1, const MassFunction& m2);

// Dempster conditioning of m on "the true world is in `evidence`".
Combined condition_on_set(const MassFunction& m, const TupleSet& evidence);

// Each focal C hands its full mass to C ∩ evidence; what lands on the empty
// set is kept as empty-set mass.
SubnormalMass condition_unnormalized(const SubnormalMass& m, const TupleSet& evidence);

using TupleValueFn = std::function<Value(const Tuple&)>;

// Rewrites every tuple of every focal set with `var` set to value(tuple).
// Focal sets that collide after rewriting pool their masses.
SubnormalMass mass_update(const SubnormalMass& m, const VariableId& var, const TupleValueFn& value);

}  // namespace dsqif
