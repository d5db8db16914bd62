#include "moot/antichain.hpp"

#include <algorithm>

namespace moot {

Antichain Antichain::from_canonical(std::vector<TypeId> members) {
  Antichain a;
  a.members_ = std::move(members);
  return a;
}

Antichain restrict_maximal(const SubsumptionOrder& order, const std::vector<TypeId>& types) {
  std::vector<TypeId> reps;
  reps.reserve(types.size());
  for (TypeId t : types) reps.push_back(order.representative(t));
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());

  std::vector<TypeId> out;
  for (TypeId t : reps) {
    bool dominated = std::any_of(reps.begin(), reps.end(), [&](TypeId other) { return order.less(t, other); });
    if (!dominated) out.push_back(t);
  }
  return Antichain::from_canonical(std::move(out));
}

Antichain restrict_maximal(const SubsumptionOrder& order, const TypeSet& types) {
  std::vector<TypeId> list;
  for (std::size_t t = types.find_first(); t != TypeSet::npos; t = types.find_next(t)) list.push_back(make_type_id(t));
  return restrict_maximal(order, list);
}

Antichain restrict_maximal(const SubsumptionOrder& order, std::initializer_list<TypeId> types) {
  return restrict_maximal(order, std::vector<TypeId>(types));
}

TypeSet downward_closure(const SubsumptionOrder& order, const Antichain& a) {
  TypeSet out(order.size());
  for (TypeId t : a) out |= order.down(t);
  return out;
}

bool leq(const SubsumptionOrder& order, const Antichain& a, const Antichain& b) {
  return std::all_of(a.begin(), a.end(), [&](TypeId x) {
    return std::any_of(b.begin(), b.end(), [&](TypeId y) { return order.leq(x, y); });
  });
}

Antichain join(const SubsumptionOrder& order, const Antichain& a, const Antichain& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<TypeId> both(a.begin(), a.end());
  both.insert(both.end(), b.begin(), b.end());
  return restrict_maximal(order, both);
}

Antichain top_antichain(const SubsumptionOrder& order) {
  TypeSet all(order.size());
  all.set();
  return restrict_maximal(order, all);
}

std::string format_antichain(const TypeUniverse& u, const Antichain& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ", " : "") + u.name(a.members()[i]);
  return out + "}";
}

}  // namespace moot
