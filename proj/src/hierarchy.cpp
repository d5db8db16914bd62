#include "moot/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace moot {

Preorder::Preorder(std::size_t n) : weaker_(n, TypeSet(n)), stronger_(n, TypeSet(n)) {}

void Preorder::insert(TypeId strong, TypeId weak) {
  weaker_[strong.index()].set(weak.index());
  stronger_[weak.index()].set(strong.index());
}

void Preorder::erase(TypeId strong, TypeId weak) {
  weaker_[strong.index()].reset(weak.index());
  stronger_[weak.index()].reset(strong.index());
}

std::size_t Preorder::pair_count() const {
  std::size_t count = 0;
  for (const auto& row : weaker_) count += row.count();
  return count;
}

bool Preorder::is_transitive() const {
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b = weaker_[a].find_first(); b != TypeSet::npos; b = weaker_[a].find_next(b)) {
      if (!weaker_[b].is_subset_of(weaker_[a])) return false;
    }
  }
  return true;
}

namespace {

// Everything t can reach under sigma, directly or after weakening to some w with t R w
// and following a strengthenable edge of w.
TypeSet reachable_under(const Preorder& R, const TypeRelation& sigma, TypeId t) {
  TypeSet reach(R.size());
  for (const auto& e : sigma.successors(t)) reach.set(e.to.index());
  const TypeSet& row = R.weaker_than(t);
  for (std::size_t w = row.find_first(); w != TypeSet::npos; w = row.find_next(w)) {
    for (const auto& e : sigma.successors(make_type_id(w)))
      if (e.strengthenable) reach.set(e.to.index());
  }
  return reach;
}

bool pinned(const SimulationProblem& p, TypeId a, TypeId b) { return a == b || (p.top && b == *p.top); }

}  // namespace

bool sigma_simulates(const Preorder& R, const TypeRelation& sigma, TypeId t, TypeId t2) {
  auto targets = sigma.successors(t2);
  if (targets.empty()) return true;
  TypeSet reach = reachable_under(R, sigma, t);
  for (const auto& e : targets)
    if (!reach.intersects(R.stronger_than(e.to))) return false;
  return true;
}

bool simulates(const SimulationProblem& problem, const Preorder& R, TypeId t, TypeId t2) {
  for (const auto& sigma : problem.relations)
    if (!sigma_simulates(R, sigma, t, t2)) return false;
  return true;
}

Preorder greatest_fixed_point(const SimulationProblem& problem, FixedPointStats* stats) {
  const std::size_t n = problem.size;
  Preorder R = problem.init;
  for (std::size_t i = 0; i < n; ++i) {
    R.insert(make_type_id(i), make_type_id(i));
    if (problem.top) R.insert(make_type_id(i), *problem.top);
  }

  // predecessors[b] = types with an edge into b under some relation
  std::vector<TypeSet> predecessors(n, TypeSet(n));
  for (const auto& sigma : problem.relations)
    for (const auto& [from, to] : sigma.pairs()) predecessors[to.index()].set(from.index());

  std::deque<std::pair<TypeId, TypeId>> queue;
  TypeSet queued(n * n);
  auto enqueue = [&](TypeId a, TypeId b) {
    if (pinned(problem, a, b) || !R.contains(a, b) || queued.test(a.index() * n + b.index())) return;
    queued.set(a.index() * n + b.index());
    queue.emplace_back(a, b);
  };
  for (std::size_t a = 0; a < n; ++a) {
    const TypeSet row = R.weaker_than(make_type_id(a));
    for (std::size_t b = row.find_first(); b != TypeSet::npos; b = row.find_next(b))
      enqueue(make_type_id(a), make_type_id(b));
  }

  FixedPointStats local;
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    queued.reset(a.index() * n + b.index());
    if (!R.contains(a, b)) continue;
    ++local.pops;
    if (simulates(problem, R, a, b)) continue;
    R.erase(a, b);
    ++local.eliminated;
    // (a, b) may have been the match for any pair whose weak side reaches b ...
    const TypeSet& pred = predecessors[b.index()];
    for (std::size_t t2 = pred.find_first(); t2 != TypeSet::npos; t2 = pred.find_next(t2)) {
      const TypeSet col = R.stronger_than(make_type_id(t2));
      for (std::size_t t = col.find_first(); t != TypeSet::npos; t = col.find_next(t))
        enqueue(make_type_id(t), make_type_id(t2));
    }
    // ... or the weakening step for pairs with strong side a.
    const TypeSet row = R.weaker_than(a);
    for (std::size_t t2 = row.find_first(); t2 != TypeSet::npos; t2 = row.find_next(t2))
      enqueue(a, make_type_id(t2));
  }
  if (stats) *stats = local;
  return R;
}

namespace {

int syntactic_rank(const TypeDesc& d) {
  switch (d.kind) {
    case TypeKind::Any: return 0;
    case TypeKind::Protocol:
    case TypeKind::Parameter: return 1;
    case TypeKind::Struct: return d.fields.empty() ? 1 : 2 + static_cast<int>(d.fields.size());
    default: return 2;
  }
}

}  // namespace

Preorder initial_approximation(const TypeUniverse& u, const InitOptions& options) {
  const std::size_t n = u.size();
  Preorder init(n);
  if (!options.layered) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (syntactically_subsumed(u, make_type_id(x), make_type_id(y), options.depth))
          init.insert(make_type_id(x), make_type_id(y));
  } else {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return syntactic_rank(u.desc(make_type_id(a))) < syntactic_rank(u.desc(make_type_id(b)));
    });
    std::vector<std::size_t> processed;
    for (std::size_t y : order) {
      // x <= y implies x <= z for every computed z above y.
      TypeSet candidates(n);
      candidates.set();
      for (std::size_t z : processed)
        if (init.contains(make_type_id(y), make_type_id(z))) candidates &= init.stronger_than(make_type_id(z));
      for (std::size_t x = candidates.find_first(); x != TypeSet::npos; x = candidates.find_next(x))
        if (syntactically_subsumed(u, make_type_id(x), make_type_id(y), options.depth))
          init.insert(make_type_id(x), make_type_id(y));
      processed.push_back(y);
    }
  }
  for (const auto& [a, b] : u.distinct_pairs())
    if (a != b) init.erase(a, b);
  return init;
}

SimulationProblem simulation_problem(const TypeUniverse& u, const InitOptions& options) {
  SimulationProblem p;
  p.size = u.size();
  p.relations = u.relations();
  p.init = initial_approximation(u, options);
  p.top = u.any();
  return p;
}

SubsumptionOrder::SubsumptionOrder(Preorder preorder) : preorder_(std::move(preorder)) {
  const std::size_t n = preorder_.size();
  representative_.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    representative_[t] = make_type_id(t);
    for (std::size_t r = 0; r < t; ++r) {
      if (equivalent(make_type_id(t), make_type_id(r))) {
        representative_[t] = make_type_id(r);
        break;
      }
    }
  }
}

std::vector<std::pair<TypeId, TypeId>> SubsumptionOrder::covers(const std::vector<TypeId>* subset) const {
  std::vector<TypeId> members;
  if (subset) {
    for (TypeId t : *subset) members.push_back(representative(t));
  } else {
    for (std::size_t t = 0; t < size(); ++t)
      if (is_representative(make_type_id(t))) members.push_back(make_type_id(t));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  std::vector<std::pair<TypeId, TypeId>> out;
  for (TypeId weak : members) {
    for (TypeId strong : members) {
      if (!less(strong, weak)) continue;
      bool direct = std::none_of(members.begin(), members.end(),
                                 [&](TypeId c) { return less(strong, c) && less(c, weak); });
      if (direct) out.emplace_back(weak, strong);
    }
  }
  return out;
}

Hierarchy infer_hierarchy(const TypeUniverse& u, const InitOptions& options) {
  Hierarchy h;
  h.problem = simulation_problem(u, options);
  h.relation = greatest_fixed_point(h.problem, &h.stats);
  h.order = SubsumptionOrder(h.relation);
  return h;
}

namespace {

struct Rendered {
  std::string text;
  bool atomic = true;
};

Rendered apply_step(const Rendered& expr, const RelationLabel& label) {
  using Tag = RelationLabel::Tag;
  switch (label.tag) {
    case Tag::FieldSelect:
      return {(expr.atomic ? expr.text : "(" + expr.text + ")") + "." + label.name, true};
    case Tag::PointerDeref:
      return {"*" + expr.text, false};
    case Tag::ArgSignature: {
      std::string out = label.name + "(";
      bool last_ellipsis = false;
      bool first = true;
      for (int k = 1; k <= label.arity; ++k) {
        if (k != label.index && last_ellipsis) continue;
        out += first ? " " : ", ";
        first = false;
        out += k == label.index ? expr.text : "...";
        last_ellipsis = k != label.index;
      }
      out += " )";
      return {out, true};
    }
    default:
      return expr;
  }
}

}  // namespace

std::optional<CounterexamplePath> check_subsumption(const TypeUniverse& u, const Hierarchy& h,
                                                    TypeId strong, TypeId weak) {
  if (h.relation.contains(strong, weak)) return std::nullopt;
  const auto& relations = h.problem.relations;
  const Preorder& R = h.relation;

  struct Node {
    TypeId strong, weak;
    std::optional<std::size_t> parent;
    CounterexampleStep step;  // step that led from the parent to this node
  };
  std::vector<Node> nodes{{strong, weak, std::nullopt, {}}};
  std::map<std::pair<TypeId, TypeId>, bool> seen{{{strong, weak}, true}};

  auto finish = [&](std::size_t node, std::optional<CounterexampleStep> last) {
    CounterexamplePath path;
    for (std::optional<std::size_t> k = node; k && nodes[*k].parent; k = nodes[*k].parent)
      path.steps.push_back(nodes[*k].step);
    std::reverse(path.steps.begin(), path.steps.end());
    if (last) path.steps.push_back(*last);
    Rendered expr{"(" + u.name(strong) + ")", true};
    for (const auto& s : path.steps) expr = apply_step(expr, relations[s.relation].label());
    path.rendered = u.name(weak) + " does not subsume " + u.name(strong) + "\nmissing: " + expr.text + ";";
    return path;
  };

  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const TypeId t = nodes[k].strong;
    const TypeId t2 = nodes[k].weak;
    bool failing = false;
    for (std::size_t r = 0; r < relations.size(); ++r) {
      const TypeRelation& sigma = relations[r];
      auto targets = sigma.successors(t2);
      if (targets.empty()) continue;
      TypeSet reach = reachable_under(R, sigma, t);
      for (const auto& e : targets) {
        if (reach.intersects(R.stronger_than(e.to))) continue;
        failing = true;
        CounterexampleStep step{t, t2, r, e.to};
        if (reach.none()) return finish(k, step);
        for (std::size_t c = reach.find_first(); c != TypeSet::npos; c = reach.find_next(c)) {
          auto key = std::make_pair(make_type_id(c), e.to);
          if (seen.count(key)) continue;
          seen[key] = true;
          nodes.push_back({make_type_id(c), e.to, k, step});
        }
      }
    }
    // Excluded syntactically rather than by simulation: nothing further to explain.
    if (!failing) return finish(k, std::nullopt);
  }
  return finish(0, std::nullopt);
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string hierarchy_dot(const TypeUniverse& u, const SubsumptionOrder& order, const std::vector<TypeId>* subset) {
  std::vector<TypeId> nodes;
  if (subset) {
    for (TypeId t : *subset) nodes.push_back(order.representative(t));
  } else {
    for (std::size_t t = 0; t < order.size(); ++t)
      if (order.is_representative(make_type_id(t))) nodes.push_back(make_type_id(t));
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto edges = order.covers(&nodes);
  std::sort(edges.begin(), edges.end());

  std::string out = "digraph hierarchy {\n";
  for (TypeId t : nodes) out += "  " + quoted(u.name(t)) + ";\n";
  for (const auto& [weak, strong] : edges) out += "  " + quoted(u.name(weak)) + " -> " + quoted(u.name(strong)) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace moot
