#pragma once

// Information measures in bits: Shannon entropy, KL and Jensen-Shannon
// divergences on distributions, and their Dempster-Shafer counterparts
// (generalized Hartley, aggregate uncertainty, generalized Shannon and the
// generalized Jensen-Shannon divergence) on mass functions.

#include <cstdint>
#include <vector>

#include "dsqif/belief.hpp"

namespace dsqif {

// Largest frame aggregate_uncertainty accepts unless overridden; the
// algorithm walks every subset of the frame.
inline constexpr std::uint64_t kDefaultAuCap = 16;
inline constexpr double kGsClampTolerance = 1e-9;

class Distribution {
 public:
  // probs[i] is the probability of the tuple with index i.
  Distribution(JointFrame frame, std::vector<double> probs);

  // The distribution a Bayesian mass function induces. Throws MassError if
  // some focal set is not a singleton.
  static Distribution from_bayesian(const MassFunction& m);

  const JointFrame& frame() const { return frame_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::uint64_t index) const { return probs_[index]; }

 private:
  JointFrame frame_;
  std::vector<double> probs_;
};

double shannon_entropy(const Distribution& p);
// +infinity when p1 puts mass where p2 does not.
double kl_divergence(const Distribution& p1, const Distribution& p2);
// 2 S((p1 + p2) / 2) - S(p1) - S(p2); within [0, 2].
double js_divergence(const Distribution& p1, const Distribution& p2);

double gen_hartley(const MassFunction& m);

// The maximum-entropy distribution among those dominating Bel, by the
// greedy Bel(A)/|A| peeling procedure. Throws CapacityError when the frame
// has more than `cap` worlds.
Distribution max_entropy_distribution(const MassFunction& m, std::uint64_t cap = kDefaultAuCap);
double aggregate_uncertainty(const MassFunction& m, std::uint64_t cap = kDefaultAuCap);

// AU - GH, with float noise in [-1e-9, 0] clamped to zero.
double gen_shannon(const MassFunction& m, std::uint64_t cap = kDefaultAuCap);

// 2 GS((m1 + m2) / 2) - GS(m1) - GS(m2).
double gen_js(const MassFunction& m1, const MassFunction& m2, std::uint64_t cap = kDefaultAuCap);

}  // namespace dsqif
