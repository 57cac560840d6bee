#pragma once

// Shared driver for the repeated testers: runs T independent iterations of a
// node program on one graph and aggregates decisions and detections.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hfree/congest.hpp"
#include "hfree/pattern.hpp"

namespace hfree {

// Identities of a detected node set, ascending; unused tail entries are 0.
using DetectedSet = std::array<NodeId, kMaxPatternNodes>;

inline DetectedSet make_detected_set(std::span<const NodeId> ids) {
  DetectedSet s{};
  std::copy(ids.begin(), ids.end(), s.begin());
  std::sort(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(ids.size()));
  return s;
}

struct TestOptions {
  // Protocol default when unset.
  std::optional<Budget> budget;
  bool stop_at_first_reject = true;
  bool hard_budget = false;
  unsigned jobs = 1;
  // Called after every iteration with the iteration index and its transcript.
  std::function<void(std::size_t, const Transcript&)> on_iteration;
  bool detailed_transcript = false;
};

struct TestResult {
  Decision decision = Decision::Accept;
  std::size_t iterations_run = 0;
  // Distinct node sets in which some node found H, per iteration.
  std::vector<std::uint32_t> detections;
  std::uint64_t rejecting_nodes = 0;
  unsigned max_message_bits = 0;
  MessageSize peak;
  std::size_t budget_violations = 0;

  double mean_detections() const {
    if (detections.empty()) return 0.0;
    double sum = 0;
    for (auto d : detections) sum += d;
    return sum / static_cast<double>(detections.size());
  }
};

// Runs `iterations` repetitions; iteration t uses node streams derived from
// (seed, id, t). Global Reject iff some node rejects in some iteration.
template <class P>
TestResult repeat_test(Simulator<P>& sim, int rounds, std::size_t iterations, const Budget& budget,
                       std::uint64_t seed, const TestOptions& options) {
  TestResult result;
  result.detections.reserve(iterations);
  RunOptions run_options;
  run_options.detailed_transcript = options.detailed_transcript || static_cast<bool>(options.on_iteration);
  run_options.hard_budget = options.hard_budget;
  run_options.jobs = options.jobs;
  std::vector<DetectedSet> found;
  for (std::size_t t = 0; t < iterations; ++t) {
    run_options.iteration = t;
    const Transcript& tr = sim.run(rounds, budget, seed, run_options);
    ++result.iterations_run;
    result.max_message_bits = std::max(result.max_message_bits, tr.max_message_bits);
    for (const MessageSize& m : tr.round_max) {
      result.peak.ids = std::max(result.peak.ids, m.ids);
      result.peak.bits = std::max(result.peak.bits, m.bits);
    }
    result.budget_violations += tr.violations.size();
    found.clear();
    for (const P& program : sim.programs()) {
      const auto sets = program.detections();
      found.insert(found.end(), sets.begin(), sets.end());
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    result.detections.push_back(static_cast<std::uint32_t>(found.size()));
    const auto rejecting = static_cast<std::uint64_t>(std::count(tr.decisions.begin(), tr.decisions.end(), Decision::Reject));
    result.rejecting_nodes += rejecting;
    if (options.on_iteration) options.on_iteration(t, tr);
    if (rejecting > 0) {
      result.decision = Decision::Reject;
      if (options.stop_at_first_reject) break;
    }
  }
  return result;
}

inline void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
}

}  // namespace hfree
