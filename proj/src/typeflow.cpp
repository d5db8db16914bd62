#include "moot/typeflow.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

namespace moot {

bool MatchRelation::contains(TypeId a, TypeId b) const {
  return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
}

void MatchRelation::normalize() {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

MatchLabel MatchTable::add(MatchRelation relation) {
  relation.normalize();
  relations_.push_back(std::move(relation));
  return relations_.size() - 1;
}

MatchLabel MatchTable::intern(MatchRelation relation) {
  relation.normalize();
  auto it = by_pairs_.find(relation.pairs);
  if (it != by_pairs_.end()) return it->second;
  auto pairs = relation.pairs;
  MatchLabel label = add(std::move(relation));
  by_pairs_.emplace(std::move(pairs), label);
  return label;
}

NodeId SyntaxGraph::add_node(std::string role, Span span) {
  nodes.push_back({std::move(role), std::move(span)});
  return nodes.size() - 1;
}

std::size_t SyntaxGraph::add_edge(NodeId from, NodeId to, MatchLabel label) {
  edges.push_back({from, to, label});
  return edges.size() - 1;
}

std::vector<std::pair<TypeId, TypeId>> validate_cross_closed(const MatchRelation& m, const SubsumptionOrder& order) {
  std::set<std::pair<TypeId, TypeId>> present(m.pairs.begin(), m.pairs.end());
  std::map<TypeId, std::vector<TypeId>> by_first;
  for (const auto& [t, u] : m.pairs) by_first[t].push_back(u);
  std::set<std::pair<TypeId, TypeId>> missing;
  // Crossing edges (t, u') and (t', u) with t' <= t and u' <= u demand (t, u).
  for (const auto& [t, u_low] : m.pairs) {
    for (const auto& [t_low, targets] : by_first) {
      if (!order.leq(t_low, t)) continue;
      for (TypeId u : targets)
        if (order.leq(u_low, u) && !present.count({t, u})) missing.insert({t, u});
    }
  }
  return {missing.begin(), missing.end()};
}

Flow flow_naive(const SubsumptionOrder& order, const MatchRelation& m, const Antichain& a, const Antichain& b) {
  TypeSet a_down = downward_closure(order, a);
  TypeSet b_down = downward_closure(order, b);
  TypeSet left(order.size());
  TypeSet right(order.size());
  for (const auto& [x, y] : m.pairs) {
    if (a_down.test(x.index()) && b_down.test(y.index())) {
      left.set(x.index());
      right.set(y.index());
    }
  }
  return {restrict_maximal(order, left), restrict_maximal(order, right)};
}

namespace {

Flow singleton_flow(const SubsumptionOrder& order, const MatchRelation& m, TypeId a, TypeId b) {
  std::vector<TypeId> left;
  std::vector<TypeId> right;
  for (const auto& [x, y] : m.pairs) {
    if (order.leq(x, a) && order.leq(y, b)) {
      left.push_back(x);
      right.push_back(y);
    }
  }
  return {restrict_maximal(order, left), restrict_maximal(order, right)};
}

}  // namespace

FlowMemo::FlowMemo(const SubsumptionOrder& order, const MatchTable& table, bool memoize)
    : order_(order), table_(table), memoize_(memoize) {}

const Flow& FlowMemo::singleton(MatchLabel label, TypeId a, TypeId b) {
  if (!memoize_) {
    ++singleton_evaluations_;
    scratch_ = singleton_flow(order_, table_[label], a, b);
    return scratch_;
  }
  std::uint64_t n = order_.size();
  std::uint64_t key = (static_cast<std::uint64_t>(label) * n + a.index()) * n + b.index();
  auto it = singletons_.find(key);
  if (it != singletons_.end()) return it->second;
  ++singleton_evaluations_;
  Flow f = singleton_flow(order_, table_[label], a, b);
  return singletons_.emplace(key, std::move(f)).first->second;
}

void FlowMemo::precompute(MatchLabel label) {
  std::set<std::pair<TypeId, TypeId>> relevant;
  for (const auto& [x, y] : table_[label].pairs) {
    const TypeSet& ups_x = order_.up(x);
    const TypeSet& ups_y = order_.up(y);
    for (std::size_t a = ups_x.find_first(); a != TypeSet::npos; a = ups_x.find_next(a)) {
      if (!order_.is_representative(make_type_id(a))) continue;
      for (std::size_t b = ups_y.find_first(); b != TypeSet::npos; b = ups_y.find_next(b))
        if (order_.is_representative(make_type_id(b))) relevant.emplace(make_type_id(a), make_type_id(b));
    }
  }
  for (const auto& [a, b] : relevant) singleton(label, a, b);
}

Flow FlowMemo::flow(MatchLabel label, const Antichain& a, const Antichain& b) {
  std::tuple<MatchLabel, Antichain, Antichain> key;
  if (memoize_) {
    key = std::make_tuple(label, a, b);
    auto it = calls_.find(key);
    if (it != calls_.end()) {
      ++cache_hits_;
      return it->second;
    }
  }
  std::vector<TypeId> left;
  std::vector<TypeId> right;
  for (TypeId x : a) {
    for (TypeId y : b) {
      const Flow& f = singleton(label, x, y);
      left.insert(left.end(), f.left.begin(), f.left.end());
      right.insert(right.end(), f.right.begin(), f.right.end());
    }
  }
  Flow result{restrict_maximal(order_, left), restrict_maximal(order_, right)};
  if (memoize_) calls_.emplace(std::move(key), result);
  return result;
}

Flow flow_symbolic(FlowMemo& memo, MatchLabel label, const Antichain& a, const Antichain& b) {
  return memo.flow(label, a, b);
}

TypingRun run_typing(const SyntaxGraph& graph, const MatchTable& table, const SubsumptionOrder& order,
                     Typing initial, FlowMemo* memo, const TypingOptions& options) {
  TypingRun run;
  run.typing = std::move(initial);
  std::optional<FlowMemo> own_memo;
  if (options.symbolic && !memo) memo = &own_memo.emplace(order, table);

  std::vector<std::vector<std::size_t>> incident(graph.nodes.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    incident[graph.edges[e].from].push_back(e);
    if (graph.edges[e].to != graph.edges[e].from) incident[graph.edges[e].to].push_back(e);
  }

  std::deque<std::size_t> waiting;
  std::vector<bool> queued(graph.edges.size(), true);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) waiting.push_back(e);
  auto enqueue_incident = [&](NodeId n) {
    for (std::size_t e : incident[n]) {
      if (queued[e]) continue;
      queued[e] = true;
      waiting.push_back(e);
    }
  };

  std::mt19937_64 rng(options.schedule_seed.value_or(0));
  while (!waiting.empty()) {
    std::size_t e;
    if (options.schedule_seed) {
      std::size_t pick = std::uniform_int_distribution<std::size_t>(0, waiting.size() - 1)(rng);
      std::swap(waiting[pick], waiting.back());
      e = waiting.back();
      waiting.pop_back();
    } else {
      e = waiting.front();
      waiting.pop_front();
    }
    queued[e] = false;
    ++run.steps;

    const auto& edge = graph.edges[e];
    Flow before{run.typing[edge.from], run.typing[edge.to]};
    Flow after = options.symbolic ? memo->flow(edge.label, before.left, before.right)
                                  : flow_naive(order, table[edge.label], before.left, before.right);
    if (options.trace) options.trace(e, before, after);
    if (after.left != before.left) {
      run.typing[edge.from] = after.left;
      enqueue_incident(edge.from);
    }
    if (after.right != before.right) {
      run.typing[edge.to] = after.right;
      enqueue_incident(edge.to);
    }
  }
  return run;
}

Classification classify_typing(const Typing& typing) {
  Classification c;
  for (NodeId n = 0; n < typing.size(); ++n)
    if (typing[n].empty()) c.nodes.push_back(n);
  if (!c.nodes.empty()) {
    c.kind = Classification::Kind::Inconsistent;
    return c;
  }
  for (NodeId n = 0; n < typing.size(); ++n)
    if (!typing[n].singleton()) c.nodes.push_back(n);
  if (!c.nodes.empty()) {
    c.kind = Classification::Kind::Ambiguous;
    return c;
  }
  for (const auto& a : typing) c.simple.push_back(a.front());
  return c;
}

}  // namespace moot
