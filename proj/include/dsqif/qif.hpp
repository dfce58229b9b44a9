#pragma once

// Flow as the gain in accuracy: how much closer the attacker's belief moved
// toward the truth, with accuracy measured by generalized Jensen-Shannon
// divergence.

#include <utility>

#include "dsqif/uncertainty.hpp"

namespace dsqif {

inline constexpr double kFlowBoundSlack = 1e-9;

struct FlowReport {
  double q = 0.0;         // gjs_pre - gjs_post
  double gjs_pre = 0.0;
  double gjs_post = 0.0;
  double eta = 0.0;       // log2 |W_h|
  bool within_bounds = true;  // -eta <= q <= eta, up to kFlowBoundSlack
  // 2^(eta - q): the size of the search the attacker has left.
  double search_space = 1.0;
};

FlowReport flow_measure(const MassFunction& m_pre, const MassFunction& m_post, const MassFunction& truth,
                        std::uint64_t au_cap = kDefaultAuCap);

// (-eta, eta) for a secret frame.
std::pair<double, double> flow_range(const JointFrame& high);

}  // namespace dsqif
