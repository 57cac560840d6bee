#pragma once

// BFS tester for patterns H on k nodes with a universal vertex.
//
// Round 1: every node sends its identity. Round 2: a node u of degree
// d >= k-1 draws a uniform permutation pi of its neighbor slots; window i is
// (pi(i), pi(i+1), ..., pi(i+k-2)), indices mod d. The neighbor at position j
// receives the identities at positions j+1..j+k-2 followed by those at
// j-1..j-(k-3) that are not already listed and not its own; that is 2k-5
// identities when d >= 2k-4. Round 3: every node answers each list it
// received with one bit per identity, set iff the identity is its own or a
// neighbor's. Answers are matched to lists by position, so no tags are sent.
// Every pair inside a window is at cyclic distance at most k-2, hence covered
// by the forward part of the earlier member's list. u then rejects iff some
// window together with u contains H in the requested mode.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hfree/congest.hpp"
#include "hfree/pattern.hpp"
#include "hfree/tester.hpp"

namespace hfree {

using Rational = boost::multiprecision::cpp_rational;

struct WindowSample {
  std::vector<std::uint32_t> pi;
  std::vector<std::vector<std::uint32_t>> windows;
};

inline WindowSample windows_from_permutation(std::vector<std::uint32_t> pi, std::size_t k) {
  const std::size_t d = pi.size();
  if (k < 2 || d < k - 1) throw InvalidArgument("need d >= k-1 neighbors to form windows");
  WindowSample s;
  s.windows.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    s.windows[i].reserve(k - 1);
    for (std::size_t j = 0; j + 1 < k; ++j) s.windows[i].push_back(pi[(i + j) % d]);
  }
  s.pi = std::move(pi);
  return s;
}

inline void sample_permutation(std::vector<std::uint32_t>& pi, std::size_t d, RandomStream& rng) {
  pi.resize(d);
  std::iota(pi.begin(), pi.end(), std::uint32_t{0});
  rng.shuffle(pi.begin(), pi.end());
}

inline WindowSample window_sample(std::size_t d, std::size_t k, RandomStream& rng) {
  if (k < 2 || d < k - 1) throw InvalidArgument("need d >= k-1 neighbors to form windows");
  std::vector<std::uint32_t> pi;
  sample_permutation(pi, d, rng);
  return windows_from_permutation(std::move(pi), k);
}

inline Rational binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  boost::multiprecision::cpp_int c = 1;
  for (std::size_t i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return Rational(c);
}

// Probability that a fixed (k-1)-subset of u's neighbors forms a window:
// min(1, d / C(d, k-1)).
inline Rational detect_prob_exact(std::size_t d, std::size_t k) {
  if (k < 2 || d < k - 1) throw InvalidArgument("detect_prob_exact needs d >= k-1 >= 1");
  const Rational p = Rational(d) / binomial(d, k - 1);
  return p > 1 ? Rational(1) : p;
}

inline constexpr std::size_t kBfsMaxIds = 2 * kMaxPatternNodes - 5;

struct BfsMessage {
  std::array<NodeId, kBfsMaxIds> ids{};
  std::uint8_t count = 0;
  std::uint8_t nbits = 0;
  std::uint32_t bits = 0;

  MessageSize size() const noexcept { return {count, nbits}; }
};

struct BfsShared {
  unsigned k = 0;
  PatternMatcher matcher;
};

class BfsProgram {
 public:
  using message_type = BfsMessage;

  explicit BfsProgram(std::shared_ptr<const BfsShared> shared) : shared_(std::move(shared)) {}

  void init(const NodeContext& ctx, RandomStream rng) {
    self_ = ctx.id;
    neighbors_ = ctx.neighbor_ids;
    rng_ = rng;
    pi_.clear();
    sent_.clear();
    detections_.clear();
  }

  void round(int t, std::span<const BfsMessage> inbox, Outbox<BfsMessage>& out) {
    const std::size_t d = neighbors_.size();
    if (d == 0) return;
    const unsigned k = shared_->k;
    if (t == 1) {
      BfsMessage own;
      own.ids[0] = self_;
      own.count = 1;
      for (std::size_t s = 0; s < d; ++s) out[s] = own;
    } else if (t == 2) {
      if (d + 1 < k) return;
      sample_permutation(pi_, d, rng_);
      sent_.resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        const std::uint32_t slot = pi_[j];
        BfsMessage& m = sent_[slot];
        m = BfsMessage{};
        auto add = [&](std::size_t pos) {
          const NodeId id = neighbors_[pi_[pos % d]];
          if (pi_[pos % d] == slot) return;
          if (std::find(m.ids.begin(), m.ids.begin() + m.count, id) != m.ids.begin() + m.count) return;
          m.ids[m.count++] = id;
        };
        for (std::size_t s = 1; s + 2 <= k; ++s) add(j + s);
        for (std::size_t s = 1; s + 3 <= k; ++s) add(j + d - s);
        out[slot] = m;
      }
    } else if (t == 3) {
      for (std::size_t s = 0; s < d; ++s) {
        const BfsMessage& q = inbox[s];
        if (q.count == 0) continue;
        BfsMessage a;
        a.nbits = q.count;
        for (unsigned i = 0; i < q.count; ++i) {
          if (q.ids[i] == self_ || is_neighbor(q.ids[i])) a.bits |= 1U << i;
        }
        out[s] = a;
      }
    }
  }

  Decision decide(std::span<const BfsMessage> inbox) {
    const std::size_t d = neighbors_.size();
    const unsigned k = shared_->k;
    if (pi_.empty() || k < 2) return Decision::Accept;
    // fwd_[j] bit s-1: answer of the neighbor at position j about position j+s.
    fwd_.assign(d, 0);
    for (std::size_t j = 0; j < d; ++j) {
      const BfsMessage& a = inbox[pi_[j]];
      const unsigned forward = k - 2;
      fwd_[j] = a.nbits >= forward ? (a.bits & ((1U << forward) - 1U)) : 0U;
    }
    std::array<NodeId, kMaxPatternNodes> set{};
    for (std::size_t i = 0; i < d; ++i) {
      // Position 0 is u, positions 1..k-1 the window; u sees all members.
      std::uint32_t mask = 0;
      for (unsigned b = 1; b < k; ++b) mask |= 1U << pair_bit(0, b);
      for (unsigned a = 0; a < k - 1; ++a) {
        for (unsigned b = a + 1; b < k - 1; ++b) {
          if ((fwd_[(i + a) % d] >> (b - a - 1)) & 1U) mask |= 1U << pair_bit(a + 1, b + 1);
        }
      }
      if (!shared_->matcher.matches(mask)) continue;
      set[0] = self_;
      for (unsigned a = 0; a + 1 < k; ++a) set[a + 1] = neighbors_[pi_[(i + a) % d]];
      detections_.push_back(make_detected_set(std::span<const NodeId>(set.data(), k)));
    }
    return detections_.empty() ? Decision::Accept : Decision::Reject;
  }

  std::span<const std::uint32_t> permutation() const noexcept { return pi_; }
  std::span<const DetectedSet> detections() const noexcept { return detections_; }

 private:
  bool is_neighbor(NodeId id) const noexcept {
    return std::binary_search(neighbors_.begin(), neighbors_.end(), id);
  }

  std::shared_ptr<const BfsShared> shared_;
  NodeId self_ = 0;
  std::span<const NodeId> neighbors_;
  RandomStream rng_;
  std::vector<std::uint32_t> pi_;
  std::vector<BfsMessage> sent_;
  std::vector<std::uint32_t> fwd_;
  std::vector<DetectedSet> detections_;
};

class BfsProgramFactory {
 public:
  BfsProgramFactory(const Pattern& h, MatchMode mode) {
    if (!h.universal_vertex) throw InvalidArgument("BFS tester needs a pattern with a universal vertex");
    if (h.k() < 3) throw InvalidArgument("BFS tester needs a pattern on at least 3 nodes");
    auto shared = std::make_shared<BfsShared>();
    shared->k = static_cast<unsigned>(h.k());
    shared->matcher = PatternMatcher(h, mode);
    shared_ = std::move(shared);
  }

  BfsProgram operator()(const NodeContext&) const { return BfsProgram(shared_); }

  unsigned k() const noexcept { return shared_->k; }
  int rounds() const noexcept { return 3; }

  // 2k-5 identities in round 2 (one in round 1), 2k-5 bits in round 3.
  Budget budget() const noexcept {
    const unsigned w = 2 * shared_->k - 5;
    return {std::max(1U, w), w};
  }

 private:
  std::shared_ptr<const BfsShared> shared_;
};

inline BfsProgramFactory bfs_program(const Pattern& h, MatchMode mode) { return BfsProgramFactory(h, mode); }

// T = ceil(8 ln 3 * 192 / eps^2).
inline std::size_t bfs_iterations_for(double eps) {
  check_eps(eps);
  return static_cast<std::size_t>(std::ceil(8.0 * std::log(3.0) * 192.0 / (eps * eps)));
}

struct BfsParams {
  Pattern pattern;
  double eps = 0.5;
  std::size_t iterations = 1;
  MatchMode mode = MatchMode::Subgraph;
};

inline TestResult bfs_test(const Graph& g, const BfsParams& params, std::uint64_t seed,
                           const TestOptions& options = {}) {
  check_eps(params.eps);
  if (params.iterations < 1) throw InvalidArgument("iterations must be >= 1");
  const BfsProgramFactory factory(params.pattern, params.mode);
  Simulator<BfsProgram> sim(g, factory);
  return repeat_test(sim, factory.rounds(), params.iterations, options.budget.value_or(factory.budget()), seed,
                     options);
}

}  // namespace hfree
