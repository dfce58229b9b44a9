#include "dsqif/qif.hpp"

#include <cmath>

#include "dsqif/errors.hpp"

namespace dsqif {

std::pair<double, double> flow_range(const JointFrame& high) {
  const double eta = std::log2(static_cast<double>(high.cardinality()));
  return {-eta, eta};
}

FlowReport flow_measure(const MassFunction& m_pre, const MassFunction& m_post, const MassFunction& truth,
                        std::uint64_t au_cap) {
  if (m_pre.frame() != truth.frame() || m_post.frame() != truth.frame()) {
    throw FrameError("flow_measure needs all three masses on one frame");
  }
  FlowReport r;
  r.gjs_pre = gen_js(m_pre, truth, au_cap);
  r.gjs_post = gen_js(m_post, truth, au_cap);
  r.q = r.gjs_pre - r.gjs_post;
  r.eta = flow_range(truth.frame()).second;
  r.within_bounds = r.q >= -r.eta - kFlowBoundSlack && r.q <= r.eta + kFlowBoundSlack;
  r.search_space = std::exp2(r.eta - r.q);
  return r;
}

}  // namespace dsqif
