#include "dsqif/uncertainty.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "dsqif/errors.hpp"

namespace dsqif {

namespace {

// Hard ceiling for the subset table, whatever cap the caller asks for.
constexpr std::uint64_t kMaxTableWorlds = 26;
constexpr double kTieTolerance = 1e-12;
constexpr double kZeroBelief = 1e-12;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void require_same_frame(const Distribution& a, const Distribution& b) {
  if (a.frame() != b.frame()) throw FrameError("distributions live on different frames");
}

// Canonical order on subsets: lexicographic over the sorted world indices.
// For equal-size distinct sets, the one holding the lowest differing world
// comes first.
bool canonically_before(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  const std::uint32_t lowest = diff & (~diff + 1);
  return (a & lowest) != 0;
}

struct PeelResult {
  std::vector<double> probs;
  double entropy = 0.0;
};

PeelResult peel(const MassFunction& m, std::uint64_t cap) {
  const std::uint64_t n = m.frame().cardinality();
  if (n > cap || n > kMaxTableWorlds) {
    throw CapacityError("aggregate uncertainty needs a frame of at most " + std::to_string(cap) +
                        " worlds, got " + std::to_string(n));
  }
  const std::uint32_t universe = (std::uint32_t{1} << n) - 1;

  // bel[S] = sum of m(F) over focal F ⊆ S (subset-sum transform).
  std::vector<double> bel(std::size_t{universe} + 1, 0.0);
  for (const auto& [set, mass] : m.focal_sets()) {
    std::uint32_t mask = 0;
    for (auto idx : set.indices()) mask |= std::uint32_t{1} << idx;
    bel[mask] += mass;
  }
  for (std::uint64_t bit = 0; bit < n; ++bit) {
    const std::uint32_t b = std::uint32_t{1} << bit;
    for (std::uint32_t s = 0; s <= universe; ++s) {
      if (s & b) bel[s] += bel[s ^ b];
    }
  }

  PeelResult out;
  out.probs.assign(n, 0.0);
  std::uint32_t remaining = universe;
  while (remaining != 0 && bel[remaining] > kZeroBelief) {
    // Maximize Bel(A)/|A|; prefer larger A, then canonical order.
    std::uint32_t best = 0;
    double best_ratio = -1.0;
    for (std::uint32_t a = remaining; a != 0; a = (a - 1) & remaining) {
      const double ratio = bel[a] / std::popcount(a);
      bool take = false;
      if (best == 0 || ratio > best_ratio + kTieTolerance) {
        take = true;
      } else if (ratio >= best_ratio - kTieTolerance) {
        const int pa = std::popcount(a);
        const int pb = std::popcount(best);
        take = pa > pb || (pa == pb && canonically_before(a, best));
      }
      if (take) {
        best = a;
        best_ratio = ratio;
      }
    }

    const double bel_a = bel[best];
    const int size = std::popcount(best);
    for (std::uint64_t x = 0; x < n; ++x) {
      if (best & (std::uint32_t{1} << x)) out.probs[x] = bel_a / size;
    }
    // -sum_{x in A} p log p with p = Bel(A)/|A|, written to stay exact for
    // the vacuous and point cases.
    out.entropy += bel_a * (std::log2(static_cast<double>(size)) - std::log2(bel_a));

    // Bel(B) := Bel(B ∪ A) - Bel(A) for B ⊆ W - A. B ∪ A is never a subset
    // of W - A, so the rewrite can be done in place.
    remaining &= ~best;
    for (std::uint32_t b = remaining;; b = (b - 1) & remaining) {
      bel[b] = std::max(0.0, bel[b | best] - bel_a);
      if (b == 0) break;
    }
  }
  // Worlds left over get probability zero.
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(JointFrame frame, std::vector<double> probs)
    : frame_(std::move(frame)), probs_(std::move(probs)) {
  if (probs_.size() != frame_.cardinality()) throw FrameError("distribution size does not match the frame");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0 + kMassSumTolerance)) throw MassError("probability outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > kMassSumTolerance) throw MassError("probabilities do not sum to 1");
}

Distribution Distribution::from_bayesian(const MassFunction& m) {
  if (!m.is_bayesian()) throw MassError("mass function is not Bayesian");
  std::vector<double> probs(m.frame().cardinality(), 0.0);
  for (const auto& [set, mass] : m.focal_sets()) probs[set.indices().front()] = mass;
  return Distribution(m.frame(), std::move(probs));
}

// ---------------------------------------------------------------------------
// Classical measures

double shannon_entropy(const Distribution& p) {
  double s = 0.0;
  for (double x : p.probs()) s -= plogp(x);
  return s;
}

double kl_divergence(const Distribution& p1, const Distribution& p2) {
  require_same_frame(p1, p2);
  double d = 0.0;
  for (std::size_t i = 0; i < p1.probs().size(); ++i) {
    const double a = p1[i];
    const double b = p2[i];
    if (a <= 0.0) continue;
    if (b <= 0.0) return std::numeric_limits<double>::infinity();
    d += a * std::log2(a / b);
  }
  return d;
}

double js_divergence(const Distribution& p1, const Distribution& p2) {
  require_same_frame(p1, p2);
  std::vector<double> avg(p1.probs().size());
  for (std::size_t i = 0; i < avg.size(); ++i) avg[i] = (p1[i] + p2[i]) / 2.0;
  return 2.0 * shannon_entropy(Distribution(p1.frame(), std::move(avg))) - shannon_entropy(p1) -
         shannon_entropy(p2);
}

// ---------------------------------------------------------------------------
// Dempster-Shafer measures

double gen_hartley(const MassFunction& m) {
  double gh = 0.0;
  for (const auto& [set, mass] : m.focal_sets()) gh += mass * std::log2(static_cast<double>(set.size()));
  return gh;
}

Distribution max_entropy_distribution(const MassFunction& m, std::uint64_t cap) {
  return Distribution(m.frame(), peel(m, cap).probs);
}

double aggregate_uncertainty(const MassFunction& m, std::uint64_t cap) { return peel(m, cap).entropy; }

double gen_shannon(const MassFunction& m, std::uint64_t cap) {
  const double gs = aggregate_uncertainty(m, cap) - gen_hartley(m);
  if (gs < 0.0 && gs >= -kGsClampTolerance) return 0.0;
  return gs;
}

double gen_js(const MassFunction& m1, const MassFunction& m2, std::uint64_t cap) {
  if (m1.frame() != m2.frame()) throw FrameError("gen_js requires masses on the same frame");
  return 2.0 * gen_shannon(mix(m1, m2), cap) - gen_shannon(m1, cap) - gen_shannon(m2, cap);
}

}  // namespace dsqif
