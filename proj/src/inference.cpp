#include "dsqif/inference.hpp"

#include <algorithm>

#include "dsqif/errors.hpp"

namespace dsqif {

void validate_setup(const AttackerSetup& setup) {
  if (setup.high.arity() == 0) throw FrameError("the secret frame has no variables");
  for (const auto& name : setup.high.names()) {
    if (setup.low.has(name)) throw FrameError("variable '" + name + "' is both high and low");
  }
  if (setup.initial.frame() != setup.high) throw FrameError("initial belief is not on the secret frame");
  for (const auto& m : setup.evidence) {
    if (m.frame() != setup.high) throw FrameError("evidence is not on the secret frame");
  }
  if (!setup.program) throw FrameError("no program");
  const JointFrame joint = setup.joint();
  for (const auto& name : program_variables(*setup.program)) {
    if (!joint.has(name)) throw FrameError("program uses undeclared variable '" + name + "'");
  }
}

MassFunction compute_prebelief(const AttackerSetup& setup) {
  MassFunction m = setup.initial;
  for (const auto& e : setup.evidence) m = combine_same_frame(m, e).mass;
  return m;
}

Tuple sample_output(const MassFunction& m, std::mt19937_64& rng) {
  const auto& focal = m.focal_sets();
  std::uniform_int_distribution<std::size_t> pick_set(0, focal.size() - 1);
  const TupleSet& set = std::next(focal.begin(), static_cast<std::ptrdiff_t>(pick_set(rng)))->first;
  std::uniform_int_distribution<std::size_t> pick_tuple(0, set.size() - 1);
  return Tuple(set.frame(), set.indices()[pick_tuple(rng)]);
}

InteractionTrace run_interaction(const AttackerSetup& setup, const MassFunction& m_pre, const Interaction& interaction,
                                 std::mt19937_64& rng, const LiftedLimits& limits) {
  if (m_pre.frame() != setup.high) throw FrameError("prebelief is not on the secret frame");
  if (interaction.secret.frame() != setup.high) throw FrameError("secret is not on the secret frame");
  if (interaction.low.frame() != setup.low) throw FrameError("low input is not on the low frame");

  std::vector<LabelledWeight> weights;
  const Tuple secret[] = {interaction.secret};
  const Tuple low[] = {interaction.low};
  MassFunction dot_h = point_mass(TupleSet(setup.high, secret));
  MassFunction dot_l = point_mass(TupleSet(setup.low, low));

  Combined input = combine_join(dot_h, dot_l);
  weights.push_back({"input", input.weight});
  MassFunction m_delta = normalize(exec_lifted(*setup.program, input.mass, limits));

  Tuple sampled = sample_output(m_delta, rng);
  Tuple observation = sampled.restricted_to(setup.low);

  Combined predicted_input = combine_join(dot_l, m_pre);
  weights.push_back({"prediction", predicted_input.weight});
  MassFunction m_delta_pred = normalize(exec_lifted(*setup.program, predicted_input.mass, limits));

  const Tuple obs[] = {observation};
  TupleSet observed_set = extend_tuple_set(TupleSet(setup.low, obs), m_delta_pred.frame());
  Combined conditioned = condition_on_set(m_delta_pred, observed_set);
  weights.push_back({"conditioning", conditioned.weight});

  MassFunction m_post = project_mass(conditioned.mass, setup.high);
  return InteractionTrace{m_pre,
                          std::move(dot_h),
                          std::move(dot_l),
                          std::move(input.mass),
                          std::move(m_delta),
                          std::move(sampled),
                          std::move(observation),
                          std::move(predicted_input.mass),
                          std::move(m_delta_pred),
                          std::move(observed_set),
                          std::move(conditioned.mass),
                          std::move(m_post),
                          std::move(weights)};
}

}  // namespace dsqif
