#pragma once

// Round-synchronous CONGEST engine.
//
// Every node runs its own program instance. A round has two phases: all
// programs compute their outboxes from the inbox delivered at the end of the
// previous round, then every message is moved to its receiver. A message sent
// in round t is therefore readable only in round t+1 (or, after the last
// round, by decide()). Each node draws randomness from its own stream,
// derived from (seed, node identity, iteration), so the result does not
// depend on the order or thread in which nodes are processed.
//
// A program type P provides
//   using message_type = M;          // M::size() -> MessageSize
//   void init(const NodeContext&, RandomStream);
//   void round(int t, std::span<const M> inbox, Outbox<M>& out);
//   Decision decide(std::span<const M> inbox);
// Inbox and outbox slots are indexed by neighbor, neighbors sorted by
// identity. Default-constructed messages are empty and cost nothing.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hfree/errors.hpp"
#include "hfree/graph.hpp"
#include "hfree/rng.hpp"

namespace hfree {

enum class Decision : std::uint8_t { Accept, Reject };

inline const char* to_string(Decision d) { return d == Decision::Accept ? "accept" : "reject"; }

struct MessageSize {
  std::uint32_t ids = 0;
  std::uint32_t bits = 0;

  friend bool operator==(const MessageSize&, const MessageSize&) = default;
};

// Bits needed to write one identity: ceil(log2 n), or of the largest
// identity when identities exceed n. At least 1.
inline unsigned id_bit_width(std::size_t n, NodeId max_id) {
  const std::uint64_t range = std::max<std::uint64_t>(n, max_id);
  unsigned bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < range) ++bits;
  return std::max(bits, 1U);
}

// General-purpose message: an ordered list of identity and bit fields.
class Message {
 public:
  struct Field {
    enum class Kind : std::uint8_t { Id, Bit };
    Kind kind;
    std::uint64_t value;

    friend bool operator==(const Field&, const Field&) = default;
  };

  Message& add_id(NodeId id) {
    fields_.push_back({Field::Kind::Id, id});
    return *this;
  }
  Message& add_bit(bool bit) {
    fields_.push_back({Field::Kind::Bit, bit ? 1U : 0U});
    return *this;
  }

  std::span<const Field> fields() const noexcept { return fields_; }
  bool empty() const noexcept { return fields_.empty(); }

  MessageSize size() const noexcept {
    MessageSize s;
    for (const Field& f : fields_) (f.kind == Field::Kind::Id ? s.ids : s.bits) += 1;
    return s;
  }

  friend bool operator==(const Message&, const Message&) = default;

 private:
  std::vector<Field> fields_;
};

// Per-edge, per-round allowance.
struct Budget {
  std::uint32_t max_ids_per_edge_per_round = 0;
  std::uint32_t max_extra_bits = 0;

  static Budget unlimited() { return {UINT32_MAX, UINT32_MAX}; }

  bool admits(MessageSize s) const noexcept {
    return s.ids <= max_ids_per_edge_per_round && s.bits <= max_extra_bits;
  }
};

struct NodeContext {
  NodeId id = 0;
  Vertex vertex = 0;
  std::span<const NodeId> neighbor_ids;  // ascending
  std::size_t node_count = 0;
  unsigned id_bits = 1;
};

template <class M>
class Outbox {
 public:
  Outbox(std::span<M> slots, std::span<const NodeId> neighbor_ids) : slots_(slots), neighbor_ids_(neighbor_ids) {}

  std::size_t size() const noexcept { return slots_.size(); }
  M& operator[](std::size_t slot) noexcept { return slots_[slot]; }

  // Addressed by identity; throws ProtocolError for a non-neighbor.
  void send(NodeId to, M message) {
    const auto it = std::lower_bound(neighbor_ids_.begin(), neighbor_ids_.end(), to);
    if (it == neighbor_ids_.end() || *it != to) {
      throw ProtocolError("message addressed to non-neighbor " + std::to_string(to));
    }
    slots_[static_cast<std::size_t>(it - neighbor_ids_.begin())] = std::move(message);
  }

 private:
  std::span<M> slots_;
  std::span<const NodeId> neighbor_ids_;
};

struct Violation {
  int round = 0;
  NodeId from = 0;
  NodeId to = 0;
  MessageSize size;
  unsigned size_bits = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Transcript {
  int rounds = 0;
  unsigned id_bits = 1;
  std::vector<NodeId> node_ids;
  // (sender, receiver) in a fixed order: by sender vertex, then receiver identity.
  std::vector<std::pair<NodeId, NodeId>> directed_edges;
  // traffic[t-1][e]: size of the message on directed edge e in round t.
  // Filled only for detailed transcripts.
  std::vector<std::vector<MessageSize>> traffic;
  bool detailed = false;
  std::vector<Decision> decisions;  // by vertex
  // Largest id / bit field counts seen in each round.
  std::vector<MessageSize> round_max;
  unsigned max_message_bits = 0;
  std::uint64_t total_bits = 0;
  std::vector<Violation> violations;  // against the budget given to run()

  unsigned size_bits(MessageSize s) const noexcept { return s.ids * id_bits + s.bits; }
};

// Every (round, directed edge) whose message exceeds `budget`. Requires a
// detailed transcript.
inline std::vector<Violation> check_budget(const Transcript& t, const Budget& budget) {
  if (!t.detailed) throw InvalidArgument("check_budget needs a detailed transcript");
  std::vector<Violation> out;
  for (std::size_t r = 0; r < t.traffic.size(); ++r) {
    for (std::size_t e = 0; e < t.traffic[r].size(); ++e) {
      const MessageSize s = t.traffic[r][e];
      if (!budget.admits(s)) {
        out.push_back({static_cast<int>(r + 1), t.directed_edges[e].first, t.directed_edges[e].second, s,
                       t.size_bits(s)});
      }
    }
  }
  return out;
}

struct RunOptions {
  std::uint64_t iteration = 0;
  bool detailed_transcript = true;
  // Throw BudgetViolationError at the first oversize message.
  bool hard_budget = false;
  // Worker threads evaluating nodes within a round.
  unsigned jobs = 1;
  // Processing order of vertices inside a round (default: by vertex).
  std::vector<Vertex> order;
  // When set, node randomness comes from the returned source instead of the
  // seeded stream (used to enumerate executions).
  std::function<ChoiceSource*(Vertex)> script;
};

// Static topology shared by all runs on one graph.
class Network {
 public:
  explicit Network(const Graph& g) : graph_(&g), offsets_(g.node_count() + 1, 0) {
    const std::size_t n = g.node_count();
    for (Vertex v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + g.degree(v);
    slot_vertex_.resize(offsets_[n]);
    slot_id_.resize(offsets_[n]);
    for (Vertex v = 0; v < n; ++v) {
      auto nb = g.neighbors(v);
      std::vector<Vertex> sorted(nb.begin(), nb.end());
      if (!g.has_default_ids()) {
        std::sort(sorted.begin(), sorted.end(), [&](Vertex a, Vertex b) { return g.id(a) < g.id(b); });
      }
      for (std::size_t j = 0; j < sorted.size(); ++j) {
        slot_vertex_[offsets_[v] + j] = sorted[j];
        slot_id_[offsets_[v] + j] = g.id(sorted[j]);
      }
    }
    reverse_.resize(offsets_[n]);
    for (Vertex v = 0; v < n; ++v) {
      for (std::size_t e = offsets_[v]; e < offsets_[v + 1]; ++e) {
        const Vertex w = slot_vertex_[e];
        const auto first = slot_id_.begin() + static_cast<std::ptrdiff_t>(offsets_[w]);
        const auto last = slot_id_.begin() + static_cast<std::ptrdiff_t>(offsets_[w + 1]);
        reverse_[e] = static_cast<std::size_t>(std::lower_bound(first, last, g.id(v)) - slot_id_.begin());
      }
    }
    id_bits_ = id_bit_width(n, g.max_id());
  }

  const Graph& graph() const noexcept { return *graph_; }
  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  std::size_t directed_edge_count() const noexcept { return slot_vertex_.size(); }
  std::size_t first_slot(Vertex v) const noexcept { return offsets_[v]; }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  std::span<const NodeId> neighbor_ids(Vertex v) const noexcept {
    return {slot_id_.data() + offsets_[v], degree(v)};
  }
  std::span<const Vertex> neighbor_vertices(Vertex v) const noexcept {
    return {slot_vertex_.data() + offsets_[v], degree(v)};
  }
  // Directed edge carrying the reply along slot e.
  std::size_t reverse(std::size_t e) const noexcept { return reverse_[e]; }
  unsigned id_bits() const noexcept { return id_bits_; }

  NodeContext context(Vertex v) const {
    return {graph_->id(v), v, neighbor_ids(v), node_count(), id_bits_};
  }

 private:
  const Graph* graph_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> slot_vertex_;
  std::vector<NodeId> slot_id_;
  std::vector<std::size_t> reverse_;
  unsigned id_bits_ = 1;
};

// Holds one program per node and the message buffers; repeated runs reuse
// all allocations. Programs must fully reset themselves in init().
template <class P>
class Simulator {
 public:
  using message_type = typename P::message_type;

  template <class Factory>
  Simulator(const Graph& g, Factory&& factory) : net_(g) {
    programs_.reserve(net_.node_count());
    for (Vertex v = 0; v < net_.node_count(); ++v) programs_.push_back(factory(net_.context(v)));
    outbox_.resize(net_.directed_edge_count());
    inbox_.resize(net_.directed_edge_count());
  }

  const Network& network() const noexcept { return net_; }
  std::span<const P> programs() const noexcept { return programs_; }
  std::span<P> programs() noexcept { return programs_; }
  const Transcript& transcript() const noexcept { return transcript_; }
  const std::vector<Decision>& decisions() const noexcept { return transcript_.decisions; }

  bool any_reject() const noexcept {
    return std::find(transcript_.decisions.begin(), transcript_.decisions.end(), Decision::Reject) !=
           transcript_.decisions.end();
  }

  // Executes init, `rounds` synchronous rounds and decide on every node.
  const Transcript& run(int rounds, const Budget& budget, std::uint64_t seed, const RunOptions& options = {}) {
    if (rounds < 0) throw InvalidArgument("rounds must be >= 0");
    const std::size_t n = net_.node_count();
    const std::size_t edges = net_.directed_edge_count();
    reset_transcript(rounds, options.detailed_transcript);

    order_ = options.order;
    if (order_.empty()) {
      order_.resize(n);
      for (Vertex v = 0; v < n; ++v) order_[v] = v;
    } else if (order_.size() != n) {
      throw InvalidArgument("processing order must list every vertex once");
    }

    for (Vertex v : order_) {
      RandomStream rng = options.script ? RandomStream(options.script(v))
                                        : derive_rng(seed, net_.graph().id(v), options.iteration);
      programs_[v].init(net_.context(v), rng);
    }
    std::fill(inbox_.begin(), inbox_.end(), message_type{});

    for (int t = 1; t <= rounds; ++t) {
      std::fill(outbox_.begin(), outbox_.end(), message_type{});
      for_each_node(options.jobs, [&](Vertex v) {
        const std::size_t first = net_.first_slot(v);
        const std::size_t d = net_.degree(v);
        Outbox<message_type> out(std::span<message_type>(outbox_.data() + first, d), net_.neighbor_ids(v));
        programs_[v].round(t, std::span<const message_type>(inbox_.data() + first, d), out);
      });
      account(t, budget, options);
      for (std::size_t e = 0; e < edges; ++e) inbox_[net_.reverse(e)] = std::move(outbox_[e]);
    }

    transcript_.decisions.assign(n, Decision::Accept);
    for_each_node(options.jobs, [&](Vertex v) {
      const std::size_t first = net_.first_slot(v);
      transcript_.decisions[v] =
          programs_[v].decide(std::span<const message_type>(inbox_.data() + first, net_.degree(v)));
    });
    return transcript_;
  }

 private:
  template <class Fn>
  void for_each_node(unsigned jobs, Fn&& fn) {
    const std::size_t n = order_.size();
    if (jobs <= 1 || n < 2) {
      for (Vertex v : order_) fn(v);
      return;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, n);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) fn(order_[i]);
      });
    }
  }

  void reset_transcript(int rounds, bool detailed) {
    Transcript& tr = transcript_;
    tr.rounds = rounds;
    tr.id_bits = net_.id_bits();
    tr.detailed = detailed;
    tr.max_message_bits = 0;
    tr.total_bits = 0;
    tr.violations.clear();
    tr.round_max.assign(static_cast<std::size_t>(rounds), MessageSize{});
    if (tr.node_ids.size() != net_.node_count()) {
      tr.node_ids.assign(net_.graph().ids().begin(), net_.graph().ids().end());
      tr.directed_edges.clear();
      for (Vertex v = 0; v < net_.node_count(); ++v) {
        for (NodeId to : net_.neighbor_ids(v)) tr.directed_edges.emplace_back(net_.graph().id(v), to);
      }
    }
    if (detailed) {
      tr.traffic.assign(static_cast<std::size_t>(rounds), std::vector<MessageSize>(net_.directed_edge_count()));
    } else {
      tr.traffic.clear();
    }
  }

  void account(int t, const Budget& budget, const RunOptions& options) {
    Transcript& tr = transcript_;
    MessageSize& peak = tr.round_max[static_cast<std::size_t>(t - 1)];
    for (std::size_t e = 0; e < outbox_.size(); ++e) {
      const MessageSize s = outbox_[e].size();
      if (tr.detailed) tr.traffic[static_cast<std::size_t>(t - 1)][e] = s;
      if (s.ids == 0 && s.bits == 0) continue;
      peak.ids = std::max(peak.ids, s.ids);
      peak.bits = std::max(peak.bits, s.bits);
      const unsigned bits = tr.size_bits(s);
      tr.max_message_bits = std::max(tr.max_message_bits, bits);
      tr.total_bits += bits;
      if (!budget.admits(s)) {
        const auto [from, to] = tr.directed_edges[e];
        if (options.hard_budget) {
          throw BudgetViolationError("round " + std::to_string(t) + ": message " + std::to_string(from) + "->" +
                                         std::to_string(to) + " carries " + std::to_string(s.ids) + " ids and " +
                                         std::to_string(s.bits) + " bits",
                                     t, from, to, bits);
        }
        tr.violations.push_back({t, from, to, s, bits});
      }
    }
  }

  Network net_;
  std::vector<P> programs_;
  std::vector<message_type> outbox_;
  std::vector<message_type> inbox_;
  std::vector<Vertex> order_;
  Transcript transcript_;
};

template <class P>
struct RunResult {
  std::vector<Decision> decisions;
  Transcript transcript;
  std::vector<P> programs;
};

// One-shot run. `factory(const NodeContext&)` builds the program of a node.
template <class Factory>
auto run(const Graph& g, Factory&& factory, int rounds, const Budget& budget, std::uint64_t seed,
         const RunOptions& options = {}) {
  using P = std::invoke_result_t<Factory&, const NodeContext&>;
  Simulator<P> sim(g, factory);
  sim.run(rounds, budget, seed, options);
  RunResult<P> result;
  result.transcript = sim.transcript();
  result.decisions = result.transcript.decisions;
  result.programs.assign(sim.programs().begin(), sim.programs().end());
  return result;
}

}  // namespace hfree
