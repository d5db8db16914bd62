#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "moot/antichain.hpp"

namespace moot {

using MatchLabel = std::size_t;  // index into a MatchTable
using NodeId = std::size_t;

struct MatchRelation {
  std::string name;  // for traces, e.g. "DATA_1/2" or ".min"
  std::vector<std::pair<TypeId, TypeId>> pairs;

  void add(TypeId a, TypeId b) { pairs.emplace_back(a, b); }
  bool contains(TypeId a, TypeId b) const;
  // Sorts and removes duplicates.
  void normalize();
};

class MatchTable {
 public:
  MatchLabel add(MatchRelation relation);
  // Returns the existing label when an identical relation was added before.
  MatchLabel intern(MatchRelation relation);
  const MatchRelation& operator[](MatchLabel label) const { return relations_[label]; }
  std::size_t size() const { return relations_.size(); }

 private:
  std::vector<MatchRelation> relations_;
  std::map<std::vector<std::pair<TypeId, TypeId>>, MatchLabel> by_pairs_;
};

struct SyntaxGraph {
  struct Node {
    std::string role;  // "arg", "result", "signature", "decl", ...
    Span span;
  };
  struct Edge {
    NodeId from;
    NodeId to;
    MatchLabel label;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;

  NodeId add_node(std::string role, Span span = {});
  std::size_t add_edge(NodeId from, NodeId to, MatchLabel label);
};

using Typing = std::vector<Antichain>;

// Missing pairs (t, u) demanded by crossing edges; empty when M is cross-closed.
std::vector<std::pair<TypeId, TypeId>> validate_cross_closed(const MatchRelation& m, const SubsumptionOrder& order);

struct Flow {
  Antichain left;
  Antichain right;

  auto operator<=>(const Flow&) const = default;
};

Flow flow_naive(const SubsumptionOrder& order, const MatchRelation& m, const Antichain& a, const Antichain& b);

// Symbolic flow: the join of singleton flows, with singleton and whole-call results cached.
class FlowMemo {
 public:
  FlowMemo(const SubsumptionOrder& order, const MatchTable& table, bool memoize = true);

  Flow flow(MatchLabel label, const Antichain& a, const Antichain& b);

  // Eagerly fills the singleton table of one label with all pairs of non-empty flow.
  void precompute(MatchLabel label);

  std::size_t singleton_evaluations() const { return singleton_evaluations_; }
  std::size_t cache_hits() const { return cache_hits_; }

 private:
  const Flow& singleton(MatchLabel label, TypeId a, TypeId b);

  const SubsumptionOrder& order_;
  const MatchTable& table_;
  bool memoize_;
  std::unordered_map<std::uint64_t, Flow> singletons_;  // keyed by (label * n + a) * n + b
  std::map<std::tuple<MatchLabel, Antichain, Antichain>, Flow> calls_;
  Flow scratch_;
  std::size_t singleton_evaluations_ = 0;
  std::size_t cache_hits_ = 0;
};

Flow flow_symbolic(FlowMemo& memo, MatchLabel label, const Antichain& a, const Antichain& b);

struct TypingOptions {
  bool symbolic = true;
  // Pops edges in a pseudo-random order instead of FIFO.
  std::optional<std::uint64_t> schedule_seed;
  // Called for every flow application: edge index, state before, state after.
  std::function<void(std::size_t, const Flow&, const Flow&)> trace;
};

struct TypingRun {
  Typing typing;
  std::size_t steps = 0;
};

TypingRun run_typing(const SyntaxGraph& graph, const MatchTable& table, const SubsumptionOrder& order,
                     Typing initial, FlowMemo* memo = nullptr, const TypingOptions& options = {});

struct Classification {
  enum class Kind { Valid, Ambiguous, Inconsistent };
  Kind kind = Kind::Valid;
  std::vector<NodeId> nodes;       // offending nodes
  std::vector<TypeId> simple;      // delta, when valid
};

Classification classify_typing(const Typing& typing);

}  // namespace moot
