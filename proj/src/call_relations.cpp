#include <algorithm>

#include "moot/frontend.hpp"

namespace moot {

void saturate_equivalents(MatchRelation& m, const SubsumptionOrder& order) {
  std::vector<std::pair<TypeId, TypeId>> extra;
  for (const auto& [a, b] : m.pairs) {
    TypeSet as = order.down(a) & order.up(a);
    TypeSet bs = order.down(b) & order.up(b);
    for (std::size_t x = as.find_first(); x != TypeSet::npos; x = as.find_next(x))
      for (std::size_t y = bs.find_first(); y != TypeSet::npos; y = bs.find_next(y))
        extra.emplace_back(make_type_id(x), make_type_id(y));
  }
  m.pairs.insert(m.pairs.end(), extra.begin(), extra.end());
  m.normalize();
}

CallRelations derive_call_relations(const TypeUniverse& u, const SubsumptionOrder& order, const std::string& op,
                                    int arity) {
  const auto& overloads = u.overloads(op, arity);
  std::string family = op + "_";
  CallRelations out;
  for (int i = 1; i <= arity; ++i) {
    MatchRelation raw;
    for (const auto& o : overloads) {
      const FunctionArg& p = u.desc(o.signature).args[i - 1];
      raw.add(p.type, o.signature);
      if (!p.strengthenable) continue;
      const TypeSet& below = order.down(p.type);
      for (std::size_t t = below.find_first(); t != TypeSet::npos; t = below.find_next(t))
        raw.add(make_type_id(t), o.signature);
    }
    raw.normalize();
    // Strongest call: drop (t, f) when t also matches some f' whose i-th parameter is strictly stronger.
    MatchRelation m;
    m.name = family + std::to_string(i) + "/" + std::to_string(arity);
    for (const auto& [t, f] : raw.pairs) {
      TypeId param = u.desc(f).args[i - 1].type;
      bool beaten = std::any_of(raw.pairs.begin(), raw.pairs.end(), [&](const auto& other) {
        return other.first == t && order.less(u.desc(other.second).args[i - 1].type, param);
      });
      if (!beaten) m.add(t, f);
    }
    saturate_equivalents(m, order);
    out.args.push_back(std::move(m));
  }
  out.ret.name = family + "ret/" + std::to_string(arity);
  for (const auto& o : overloads) {
    const TypeDesc& sig = u.desc(o.signature);
    out.ret.add(sig.ret, o.signature);
    if (!sig.ret_strengthenable) continue;
    const TypeSet& below = order.down(sig.ret);
    for (std::size_t t = below.find_first(); t != TypeSet::npos; t = below.find_next(t))
      out.ret.add(make_type_id(t), o.signature);
  }
  saturate_equivalents(out.ret, order);
  return out;
}

std::vector<Diagnostic> incomparable_definition_warnings(const TypeUniverse& u, const SubsumptionOrder& order) {
  std::vector<Diagnostic> out;
  for (const auto& [name, arity] : u.function_families()) {
    const auto& overloads = u.overloads(name, arity);
    for (std::size_t a = 0; a < overloads.size(); ++a) {
      for (std::size_t b = a + 1; b < overloads.size(); ++b) {
        const Overload& x = overloads[a];
        const Overload& y = overloads[b];
        if (x.builtin || y.builtin || !x.has_body || !y.has_body) continue;
        if (x.span.file == y.span.file || order.comparable(x.signature, y.signature)) continue;
        const Overload& later = x.declaration < y.declaration ? y : x;
        const Overload& earlier = x.declaration < y.declaration ? x : y;
        out.push_back({Stage::Check, Severity::Warning, later.span,
                       "incomparable definitions of " + name + "/" + std::to_string(arity) + ": " +
                           u.name(later.signature) + " and " + u.name(earlier.signature) + " (" +
                           earlier.span.str() + ")"});
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const Diagnostic& l, const Diagnostic& r) {
    return std::tie(l.span.file, l.span.line, l.span.column) < std::tie(r.span.file, r.span.line, r.span.column);
  });
  return out;
}

GraphContext::GraphContext(const TypeUniverse& u, const SubsumptionOrder& order, GraphOptions options)
    : u_(u), order_(order), options_(options) {}

MatchLabel GraphContext::cached(const std::string& key, const std::function<MatchRelation()>& make) {
  if (auto it = labels_.find(key); it != labels_.end()) return it->second;
  MatchRelation m = make();
  m.normalize();
  auto missing = validate_cross_closed(m, order_);
  if (!missing.empty()) {
    internal_error(Stage::Typing, {},
                   "matching relation " + m.name + " is not cross-closed: missing (" + u_.name(missing[0].first) +
                       ", " + u_.name(missing[0].second) + ")");
  }
  MatchLabel label = table_.add(std::move(m));
  labels_[key] = label;
  return label;
}

void GraphContext::derive(const std::string& op, int arity) {
  std::string key = "ret:" + op + "/" + std::to_string(arity);
  if (labels_.count(key)) return;
  CallRelations rel = derive_call_relations(u_, order_, op, arity);
  for (int i = 1; i <= arity; ++i)
    cached("arg:" + op + "/" + std::to_string(arity) + "/" + std::to_string(i), [&] { return rel.args[i - 1]; });
  cached(key, [&] { return rel.ret; });
}

MatchLabel GraphContext::call_arg(const std::string& op, int arity, int i) {
  derive(op, arity);
  return labels_.at("arg:" + op + "/" + std::to_string(arity) + "/" + std::to_string(i));
}

MatchLabel GraphContext::call_ret(const std::string& op, int arity) {
  derive(op, arity);
  return labels_.at("ret:" + op + "/" + std::to_string(arity));
}

MatchLabel GraphContext::field(const std::string& name) {
  return cached("field:" + name, [&] {
    MatchRelation m;
    m.name = "." + name;
    m.pairs = u_.relation(RelationLabel::field_select(name)).pairs();
    saturate_equivalents(m, order_);
    return m;
  });
}

MatchLabel GraphContext::deref() {
  return cached("deref", [&] {
    MatchRelation m;
    m.name = "*";
    m.pairs = u_.relation(RelationLabel::pointer_deref()).pairs();
    saturate_equivalents(m, order_);
    return m;
  });
}

MatchLabel GraphContext::subsumption() {
  return cached("subsumption", [&] {
    MatchRelation m;
    m.name = "<=";
    for (std::size_t t = 0; t < u_.size(); ++t) {
      const TypeSet& up = order_.up(make_type_id(t));
      for (std::size_t w = up.find_first(); w != TypeSet::npos; w = up.find_next(w))
        m.add(make_type_id(t), make_type_id(w));
    }
    return m;
  });
}

MatchLabel GraphContext::identity() {
  return cached("identity", [&] {
    MatchRelation m;
    m.name = "==";
    for (std::size_t t = 0; t < u_.size(); ++t) m.add(make_type_id(t), make_type_id(t));
    saturate_equivalents(m, order_);
    return m;
  });
}

MatchLabel GraphContext::promote() {
  return cached("promote", [&] {
    MatchRelation m;
    m.name = "promote";
    for (std::size_t t = 0; t < u_.size(); ++t) m.add(make_type_id(t), make_type_id(t));
    m.add(*u_.lookup("char"), *u_.lookup("int"));
    saturate_equivalents(m, order_);
    return m;
  });
}

}  // namespace moot
