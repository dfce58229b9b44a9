#pragma once

// The attacker's side of one program run: form a prebelief from evidence,
// watch the program's low output, and revise the belief on the secret.

#include <random>
#include <string>
#include <vector>

#include "dsqif/evidence.hpp"
#include "dsqif/lang.hpp"

namespace dsqif {

struct AttackerSetup {
  JointFrame high;  // W_h
  JointFrame low;   // W_l
  MassFunction initial;
  std::vector<MassFunction> evidence;
  CommandPtr program;

  // W_{h ∪ l}, the frame the program runs on.
  JointFrame joint() const { return high.united_with(low); }
};

// Throws FrameError when the setup is inconsistent: empty or overlapping
// variable classes, beliefs off W_h, or a program touching other variables.
void validate_setup(const AttackerSetup& setup);

struct Interaction {
  Tuple secret;  // on W_h
  Tuple low;     // on W_l
  bool carry_postbelief = false;
};

struct LabelledWeight {
  std::string step;
  ConflictWeight weight;
};

struct InteractionTrace {
  MassFunction m_pre;
  MassFunction dot_h;
  MassFunction dot_l;
  MassFunction input;  // dot_h ⊗ dot_l
  MassFunction m_delta;
  Tuple sampled;
  Tuple observation;  // sampled restricted to W_l
  MassFunction predicted_input;  // dot_l ⊗ m_pre
  MassFunction m_delta_pred;
  TupleSet observed_set;
  MassFunction m_delta_cond;
  MassFunction m_post;
  std::vector<LabelledWeight> weights;
};

// m_init ⊗ m_1 ⊗ ... ⊗ m_n, left to right.
MassFunction compute_prebelief(const AttackerSetup& setup);

// Picks a focal set uniformly, then a tuple uniformly inside it.
Tuple sample_output(const MassFunction& m, std::mt19937_64& rng);

InteractionTrace run_interaction(const AttackerSetup& setup, const MassFunction& m_pre, const Interaction& interaction,
                                 std::mt19937_64& rng, const LiftedLimits& limits = {});

}  // namespace dsqif
