#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "moot/hierarchy.hpp"

namespace moot {

// Pairwise incomparable representatives, sorted by id. Stands for its downward closure.
class Antichain {
 public:
  Antichain() = default;

  const std::vector<TypeId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool singleton() const { return members_.size() == 1; }
  TypeId front() const { return members_.front(); }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  auto operator<=>(const Antichain&) const = default;

  // Only for callers that already hold a canonical antichain.
  static Antichain from_canonical(std::vector<TypeId> members);

 private:
  std::vector<TypeId> members_;
};

Antichain restrict_maximal(const SubsumptionOrder& order, const std::vector<TypeId>& types);
Antichain restrict_maximal(const SubsumptionOrder& order, const TypeSet& types);
Antichain restrict_maximal(const SubsumptionOrder& order, std::initializer_list<TypeId> types);

TypeSet downward_closure(const SubsumptionOrder& order, const Antichain& a);

bool leq(const SubsumptionOrder& order, const Antichain& a, const Antichain& b);

Antichain join(const SubsumptionOrder& order, const Antichain& a, const Antichain& b);

Antichain top_antichain(const SubsumptionOrder& order);

// "{Ival, int}"
std::string format_antichain(const TypeUniverse& u, const Antichain& a);

}  // namespace moot
