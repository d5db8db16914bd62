#pragma once

// Reference implementations used only by the tests. They follow the definitions
// literally (explicit sets, full iteration) and share no code with the library
// beyond the plain data types.

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "moot/antichain.hpp"
#include "moot/hierarchy.hpp"
#include "moot/typeflow.hpp"

namespace oracle {

using moot::TypeId;
using Matrix = std::vector<std::vector<bool>>;  // m[a][b]: a <= b
using Pairs = std::set<std::pair<std::size_t, std::size_t>>;

// Greatest fixed point of F below problem.init by repeated whole-relation application.
Matrix naive_gfp(const moot::SimulationProblem& problem);

Matrix to_matrix(const moot::Preorder& p);

// Random preorder on n types: a random DAG closed reflexively and transitively,
// with an occasional equivalence when `equivalences` is set.
moot::Preorder random_preorder(std::mt19937_64& rng, std::size_t n, double density, bool equivalences);

// Adds (t, u) for every crossing pair (t, u'), (t', u) with t' <= t and u' <= u.
Pairs cross_close(Pairs m, const moot::SubsumptionOrder& order);
moot::MatchRelation to_relation(const Pairs& m, std::string name);

std::vector<std::size_t> down(const moot::SubsumptionOrder& order, const std::vector<std::size_t>& set);

// Maximal elements, each replaced by the lowest id of its equivalence class.
std::vector<std::size_t> maxima(const moot::SubsumptionOrder& order, const std::vector<std::size_t>& set);

std::vector<std::size_t> ids(const moot::Antichain& a);

// F(A, B) from its definition over explicit downward closed sets.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> flow(const moot::SubsumptionOrder& order,
                                                                   const Pairs& m,
                                                                   const std::vector<std::size_t>& a,
                                                                   const std::vector<std::size_t>& b);

moot::Antichain random_antichain(std::mt19937_64& rng, const moot::SubsumptionOrder& order, bool allow_empty = false);

moot::SimulationProblem random_problem(std::mt19937_64& rng, std::size_t max_types, std::size_t max_relations,
                                       double strengthenable_share);

}  // namespace oracle
