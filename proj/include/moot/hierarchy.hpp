#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "moot/type_universe.hpp"

namespace moot {

using TypeSet = boost::dynamic_bitset<>;

// A binary relation over type ids read as "row type is stronger than column type".
class Preorder {
 public:
  Preorder() = default;
  explicit Preorder(std::size_t n);

  std::size_t size() const { return weaker_.size(); }
  bool contains(TypeId strong, TypeId weak) const { return weaker_[strong.index()].test(weak.index()); }
  void insert(TypeId strong, TypeId weak);
  void erase(TypeId strong, TypeId weak);

  // {b : a <= b}
  const TypeSet& weaker_than(TypeId a) const { return weaker_[a.index()]; }
  // {a : a <= b}
  const TypeSet& stronger_than(TypeId b) const { return stronger_[b.index()]; }

  std::size_t pair_count() const;
  bool is_transitive() const;
  bool operator==(const Preorder& other) const { return weaker_ == other.weaker_; }

 private:
  std::vector<TypeSet> weaker_;
  std::vector<TypeSet> stronger_;
};

// The data the simulation fixed point is computed over, independent of any surface syntax.
struct SimulationProblem {
  std::size_t size = 0;
  std::vector<TypeRelation> relations;
  Preorder init;
  std::optional<TypeId> top;  // pairs (t, top) are never eliminated
};

// t simulates t2 under one relation, with respect to the candidate relation R.
bool sigma_simulates(const Preorder& R, const TypeRelation& sigma, TypeId t, TypeId t2);

// One application of F restricted to a single pair: all relations must simulate.
bool simulates(const SimulationProblem& problem, const Preorder& R, TypeId t, TypeId t2);

struct FixedPointStats {
  std::size_t pops = 0;
  std::size_t eliminated = 0;
};

// Largest R within problem.init with F(R) = R, by worklist edge elimination.
Preorder greatest_fixed_point(const SimulationProblem& problem, FixedPointStats* stats = nullptr);

struct InitOptions {
  int depth = 3;
  bool layered = false;  // top-down traversal pruned by already computed columns
};

Preorder initial_approximation(const TypeUniverse& u, const InitOptions& options = {});

SimulationProblem simulation_problem(const TypeUniverse& u, const InitOptions& options = {});

// The inferred order. Queries on members of an equivalence class agree with its representative.
class SubsumptionOrder {
 public:
  SubsumptionOrder() = default;
  explicit SubsumptionOrder(Preorder preorder);

  std::size_t size() const { return preorder_.size(); }
  bool leq(TypeId strong, TypeId weak) const { return preorder_.contains(strong, weak); }
  bool less(TypeId strong, TypeId weak) const { return leq(strong, weak) && !leq(weak, strong); }
  bool equivalent(TypeId a, TypeId b) const { return leq(a, b) && leq(b, a); }
  bool comparable(TypeId a, TypeId b) const { return leq(a, b) || leq(b, a); }

  // Lowest id of the equivalence class, i.e. the first declared member.
  TypeId representative(TypeId t) const { return representative_[t.index()]; }
  bool is_representative(TypeId t) const { return representative(t) == t; }

  const TypeSet& down(TypeId t) const { return preorder_.stronger_than(t); }
  const TypeSet& up(TypeId t) const { return preorder_.weaker_than(t); }
  const Preorder& preorder() const { return preorder_; }

  // Hasse diagram edges (weaker, stronger) between representatives, optionally of the
  // suborder induced by `subset`.
  std::vector<std::pair<TypeId, TypeId>> covers(const std::vector<TypeId>* subset = nullptr) const;

 private:
  Preorder preorder_;
  std::vector<TypeId> representative_;
};

struct Hierarchy {
  SimulationProblem problem;
  Preorder relation;  // the greatest fixed point
  SubsumptionOrder order;
  FixedPointStats stats;
};

Hierarchy infer_hierarchy(const TypeUniverse& u, const InitOptions& options = {});

struct CounterexampleStep {
  TypeId strong;
  TypeId weak;
  std::size_t relation = 0;  // index into the problem's relations
  TypeId witness;            // the successor of `weak` nobody matches
};

struct CounterexamplePath {
  std::vector<CounterexampleStep> steps;
  std::string rendered;
};

// nullopt when strong <= weak holds.
std::optional<CounterexamplePath> check_subsumption(const TypeUniverse& u, const Hierarchy& h,
                                                    TypeId strong, TypeId weak);

// "digraph hierarchy { ... }" over the given types (all representatives by default).
std::string hierarchy_dot(const TypeUniverse& u, const SubsumptionOrder& order,
                          const std::vector<TypeId>* subset = nullptr);

}  // namespace moot
