#include "moot/type_universe.hpp"

#include <algorithm>
#include <set>

#include "moot/parser.hpp"

namespace moot {

std::optional<TypeId> TypeDesc::field(std::string_view field_name) const {
  for (const auto& [n, t] : fields)
    if (n == field_name) return t;
  return std::nullopt;
}

RelationLabel RelationLabel::arg_signature(std::string op, int i, int j) {
  if (i < 1 || i > j) throw std::invalid_argument("ArgSignature requires 1 <= i <= j");
  return {Tag::ArgSignature, std::move(op), i, j};
}

RelationLabel RelationLabel::arg(int i, int j) {
  if (i < 1 || i > j) throw std::invalid_argument("Arg requires 1 <= i <= j");
  return {Tag::Arg, {}, i, j};
}

std::string RelationLabel::str() const {
  switch (tag) {
    case Tag::FieldSelect: return "." + name;
    case Tag::ArgSignature: return name + "_" + std::to_string(index) + "/" + std::to_string(arity);
    case Tag::PointerDeref: return "*";
    case Tag::Arg: return "arg_" + std::to_string(index) + "/" + std::to_string(arity);
    case Tag::Ret: return "ret_/" + std::to_string(arity);
    case Tag::Promote: return "promote";
  }
  return "?";
}

TypeRelation::TypeRelation(RelationLabel label, std::size_t type_count)
    : label_(std::move(label)), successors_(type_count) {}

void TypeRelation::add(TypeId from, TypeId to, bool strengthenable) {
  auto& edges = successors_[from.index()];
  for (auto& e : edges) {
    if (e.to == to) {
      e.strengthenable = e.strengthenable || strengthenable;
      return;
    }
  }
  auto pos = std::lower_bound(edges.begin(), edges.end(), to,
                              [](const RelationEdge& e, TypeId t) { return e.to < t; });
  edges.insert(pos, RelationEdge{to, strengthenable});
  ++size_;
}

bool TypeRelation::contains(TypeId from, TypeId to) const {
  if (from.index() >= successors_.size()) return false;
  for (const auto& e : successors_[from.index()])
    if (e.to == to) return true;
  return false;
}

bool TypeRelation::strengthenable(TypeId from, TypeId to) const {
  if (from.index() >= successors_.size()) return false;
  for (const auto& e : successors_[from.index()])
    if (e.to == to) return e.strengthenable;
  return false;
}

std::span<const RelationEdge> TypeRelation::successors(TypeId from) const {
  if (from.index() >= successors_.size()) return {};
  return successors_[from.index()];
}

std::vector<std::pair<TypeId, TypeId>> TypeRelation::pairs() const {
  std::vector<std::pair<TypeId, TypeId>> out;
  for (std::size_t i = 0; i < successors_.size(); ++i)
    for (const auto& e : successors_[i]) out.emplace_back(make_type_id(i), e.to);
  return out;
}

std::vector<std::pair<TypeId, TypeId>> TypeRelation::strengthenable_pairs() const {
  std::vector<std::pair<TypeId, TypeId>> out;
  for (std::size_t i = 0; i < successors_.size(); ++i)
    for (const auto& e : successors_[i])
      if (e.strengthenable) out.emplace_back(make_type_id(i), e.to);
  return out;
}

std::vector<TypeId> TypeUniverse::all() const {
  std::vector<TypeId> out;
  for (std::size_t i = 0; i < types_.size(); ++i) out.push_back(make_type_id(i));
  return out;
}

std::optional<TypeId> TypeUniverse::lookup(std::string_view name) const {
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

std::optional<TypeId> TypeUniverse::pointer_to(TypeId pointee) const {
  auto it = pointers_.find(pointee);
  if (it == pointers_.end()) return std::nullopt;
  return it->second;
}

std::optional<TypeId> TypeUniverse::find_function(const std::vector<FunctionArg>& args, TypeId ret,
                                                  bool ret_strengthenable) const {
  auto it = functions_.find({args, ret, ret_strengthenable});
  if (it == functions_.end()) return std::nullopt;
  return it->second;
}

std::optional<TypeId> TypeUniverse::try_resolve(const TypeRef& ref) const {
  std::optional<TypeId> base = lookup(ref.struct_tag ? "struct " + ref.base : ref.base);
  if (!base) return std::nullopt;
  TypeId t = *base;
  for (int i = 0; i < ref.pointer_depth; ++i) {
    auto p = pointer_to(t);
    if (!p) return std::nullopt;
    t = *p;
  }
  return t;
}

TypeId TypeUniverse::resolve(const TypeRef& ref) const {
  if (auto t = try_resolve(ref)) return *t;
  std::string written = ref.struct_tag ? "struct " + ref.base : ref.base;
  if (lookup(written)) written += std::string(ref.pointer_depth, '*');
  fail(Stage::Universe, ref.span, "unknown type '" + written + "'");
}

const TypeRelation& TypeUniverse::relation(const RelationLabel& label) const {
  static const TypeRelation kEmpty;
  auto it = relation_index_.find(label);
  return it == relation_index_.end() ? kEmpty : relations_[it->second];
}

std::optional<std::size_t> TypeUniverse::relation_index(const RelationLabel& label) const {
  auto it = relation_index_.find(label);
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Overload>& TypeUniverse::overloads(const std::string& name, int arity) const {
  static const std::vector<Overload> kNone;
  auto it = overloads_.find({name, arity});
  return it == overloads_.end() ? kNone : it->second;
}

std::vector<std::pair<std::string, int>> TypeUniverse::function_families() const {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& [key, _] : overloads_) out.push_back(key);
  return out;
}

std::string render_call_signature(const TypeUniverse& u, const std::string& name,
                                  const std::vector<TypeId>& args, TypeId ret) {
  std::string out = u.name(ret) + " " + name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : " ") + u.name(args[i]);
  out += args.empty() ? ")" : " )";
  return out;
}

// ---------------------------------------------------------------------------

bool syntactically_subsumed(const TypeUniverse& u, TypeId strong, TypeId weak, int depth) {
  if (strong == weak) return true;
  const TypeDesc& s = u.desc(strong);
  const TypeDesc& w = u.desc(weak);
  if (w.kind == TypeKind::Any) return true;
  if (s.kind == TypeKind::Any) return false;
  if (depth <= 0) return true;

  auto opaque_target = [&] {
    return w.kind == TypeKind::Protocol || w.kind == TypeKind::Parameter ||
           (w.kind == TypeKind::Struct && w.fields.empty());
  };

  switch (w.kind) {
    case TypeKind::Builtin:
      return false;
    case TypeKind::Function: {
      if (s.kind != TypeKind::Function || s.args.size() != w.args.size()) return false;
      for (std::size_t i = 0; i < w.args.size(); ++i) {
        if (w.args[i].strengthenable && !s.args[i].strengthenable) return false;
        if (!syntactically_subsumed(u, s.args[i].type, w.args[i].type, depth - 1)) return false;
      }
      if (w.ret_strengthenable && !s.ret_strengthenable) return false;
      return syntactically_subsumed(u, s.ret, w.ret, depth - 1);
    }
    case TypeKind::Pointer:
      return s.kind == TypeKind::Pointer && syntactically_subsumed(u, s.pointee, w.pointee, depth - 1);
    case TypeKind::Struct:
      if (opaque_target()) return s.kind != TypeKind::Function;
      if (s.kind != TypeKind::Struct) return false;
      for (const auto& [field, wt] : w.fields) {
        auto st = s.field(field);
        if (!st) return false;
        if (!syntactically_subsumed(u, *st, wt, depth - 1)) return false;
      }
      return true;
    case TypeKind::Protocol:
    case TypeKind::Parameter:
      return s.kind != TypeKind::Function;
    case TypeKind::Any:
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

struct BuiltinOperator {
  const char* name;
  const char* ret;
  std::vector<const char*> args;
};

const std::vector<BuiltinOperator>& builtin_operators() {
  static const std::vector<BuiltinOperator> table = [] {
    std::vector<BuiltinOperator> ops;
    for (const char* op : {"+", "-", "*", "/", "%", "+=", "-="}) ops.push_back({op, "int", {"int", "int"}});
    for (const char* op : {"<", ">", "<=", ">=", "==", "!="}) {
      ops.push_back({op, "bool", {"int", "int"}});
      ops.push_back({op, "bool", {"char", "char"}});
    }
    for (const char* op : {"==", "!=", "&&", "||"}) ops.push_back({op, "bool", {"bool", "bool"}});
    ops.push_back({"!", "bool", {"bool"}});
    ops.push_back({"!", "bool", {"int"}});
    ops.push_back({"-", "int", {"int"}});
    for (const char* op : {"++", "--"}) {
      ops.push_back({op, "int", {"int"}});
      ops.push_back({op, "char", {"char"}});
    }
    return ops;
  }();
  return table;
}

class UniverseBuilder {
 public:
  UniverseBuilder(const SurfaceProgram& program, const UniverseOptions& options) : program_(program) {
    u_.options_ = options;
  }

  TypeUniverse build() {
    add_named(TypeKind::Any, "any");
    for (const char* b : {"void", "bool", "char", "int"}) add_named(TypeKind::Builtin, b);

    declare_named_types();
    resolve_typedefs();
    resolve_structs();
    resolve_parameter_bounds();
    declare_functions();
    declare_builtin_operators();
    saturate_pointers();
    record_distinct();
    if (u_.options_.saturate_strengthenings) saturate_strengthenings();
    populate_relations();
    return std::move(u_);
  }

 private:
  TypeId push(TypeDesc desc) {
    TypeId id = make_type_id(u_.types_.size());
    u_.types_.push_back(std::move(desc));
    return id;
  }

  TypeId add_named(TypeKind kind, const std::string& name) {
    TypeDesc d;
    d.kind = kind;
    d.name = d.c_spelling = d.mangled = name;
    TypeId id = push(std::move(d));
    u_.names_[name] = id;
    return id;
  }

  void claim_name(const std::string& name, const Span& span) {
    if (u_.names_.count(name)) fail(Stage::Universe, span, "redefinition of type '" + name + "'");
  }

  void declare_named_types() {
    for (const auto& decl : program_.declarations) {
      if (auto* p = std::get_if<ProtocolTypeDecl>(&decl)) {
        claim_name(p->name, p->span);
        add_named(TypeKind::Protocol, p->name);
      } else if (auto* p = std::get_if<ParameterTypeDecl>(&decl)) {
        claim_name(p->name, p->span);
        add_named(TypeKind::Parameter, p->name);
      } else if (auto* s = std::get_if<StructDecl>(&decl)) {
        std::string key = "struct " + s->tag;
        claim_name(key, s->span);
        TypeDesc d;
        d.kind = TypeKind::Struct;
        d.struct_tag = s->tag;
        d.name = s->tag;
        d.c_spelling = key;
        d.mangled = !s->tag.empty() && s->tag.front() == '_' ? s->tag.substr(1) : s->tag;
        u_.names_[key] = push(std::move(d));
      } else if (auto* p = std::get_if<ParamTypedefDecl>(&decl)) {
        fail(Stage::Universe, p->span, "parameterized typedef '" + p->name + "' was not expanded");
      }
    }
  }

  TypeId pointer(TypeId pointee) {
    if (auto p = u_.pointer_to(pointee)) return *p;
    const TypeDesc& base = u_.desc(pointee);
    TypeDesc d;
    d.kind = TypeKind::Pointer;
    d.pointee = pointee;
    d.name = base.name + "*";
    d.c_spelling = base.c_spelling + "*";
    d.mangled = base.mangled + "p";
    TypeId id = push(std::move(d));
    u_.pointers_[pointee] = id;
    return id;
  }

  // Resolves a written type, interning the explicitly written pointer levels.
  TypeId resolve(const TypeRef& ref) {
    TypeRef base = ref;
    base.pointer_depth = 0;
    TypeId t = u_.resolve(base);
    for (int i = 0; i < ref.pointer_depth; ++i) t = pointer(t);
    used_.insert(t);
    return t;
  }

  void resolve_typedefs() {
    for (const auto& decl : program_.declarations) {
      auto* t = std::get_if<TypedefDecl>(&decl);
      if (!t) continue;
      claim_name(t->name, t->span);
      TypeId target = resolve(t->target);
      u_.names_[t->name] = target;
      TypeDesc& d = u_.types_[target.index()];
      // The first typedef naming a struct becomes its display name.
      if (d.kind == TypeKind::Struct && d.name == d.struct_tag && t->target.pointer_depth == 0) {
        d.name = d.c_spelling = d.mangled = t->name;
      }
    }
  }

  void resolve_structs() {
    for (const auto& decl : program_.declarations) {
      auto* s = std::get_if<StructDecl>(&decl);
      if (!s) continue;
      TypeId id = *u_.lookup("struct " + s->tag);
      std::vector<std::pair<std::string, TypeId>> fields;
      for (const auto& f : s->fields) {
        for (const auto& [existing, _] : fields)
          if (existing == f.name)
            fail(Stage::Universe, f.span, "duplicate field '" + f.name + "' in struct " + s->tag);
        fields.emplace_back(f.name, resolve(f.type));
      }
      u_.types_[id.index()].fields = std::move(fields);
    }
  }

  void resolve_parameter_bounds() {
    for (const auto& decl : program_.declarations) {
      auto* p = std::get_if<ParameterTypeDecl>(&decl);
      if (!p) continue;
      TypeId id = *u_.lookup(p->name);
      for (const auto& b : p->bounds) {
        auto bound = u_.lookup(b);
        if (!bound) fail(Stage::Universe, p->span, "unknown type '" + b + "'");
        if (u_.desc(*bound).kind != TypeKind::Protocol)
          fail(Stage::Universe, p->span, "bound '" + b + "' of " + p->name + " is not a protocoltype");
        u_.types_[id.index()].bounds.push_back(*bound);
      }
    }
  }

  TypeId function_type(std::vector<FunctionArg> args, TypeId ret, bool ret_plus, bool declared) {
    auto key = std::make_tuple(args, ret, ret_plus);
    if (auto it = u_.functions_.find(key); it != u_.functions_.end()) {
      if (declared) u_.types_[it->second.index()].declared_signature = true;
      return it->second;
    }
    TypeDesc d;
    d.kind = TypeKind::Function;
    d.args = std::move(args);
    d.ret = ret;
    d.ret_strengthenable = ret_plus;
    d.declared_signature = declared;
    d.name = u_.name(ret) + (ret_plus ? "+" : "") + "(*)(";
    for (std::size_t i = 0; i < d.args.size(); ++i) {
      d.name += (i ? ", " : "") + u_.name(d.args[i].type) + (d.args[i].strengthenable ? "+" : "");
    }
    d.name += ")";
    d.c_spelling = d.name;
    d.mangled = d.name;
    TypeId id = push(std::move(d));
    u_.functions_[key] = id;
    return id;
  }

  void add_overload(Overload o) {
    auto& family = u_.overloads_[{o.name, static_cast<int>(u_.desc(o.signature).args.size())}];
    for (auto& existing : family) {
      if (existing.signature != o.signature) continue;
      if (existing.has_body && o.has_body)
        fail(Stage::Universe, o.span, "redefinition of " + o.name + " with signature " + u_.name(o.signature));
      if (o.has_body) existing = std::move(o);
      return;
    }
    family.push_back(std::move(o));
  }

  void declare_functions() {
    for (std::size_t i = 0; i < program_.declarations.size(); ++i) {
      auto* f = std::get_if<FunctionDecl>(&program_.declarations[i]);
      if (!f) continue;
      std::vector<FunctionArg> args;
      for (const auto& p : f->params) args.push_back({resolve(p.type), p.type.strengthenable});
      TypeId ret = resolve(f->ret);
      if (f->body) collect_types(*f->body);
      TypeId sig = function_type(std::move(args), ret, f->ret.strengthenable, true);
      Overload o;
      o.name = f->name;
      o.signature = sig;
      o.declaration = i;
      o.span = f->span;
      o.has_body = f->body != nullptr;
      if (!o.has_body) u_.protocol_ops_[f->name] = true;
      add_overload(std::move(o));
    }
  }

  // Local declarations and casts are relevant types as well.
  void collect_types(const Stmt& stmt) {
    if (stmt.kind == Stmt::Kind::Decl) {
      for (const auto& d : stmt.declarators) {
        TypeRef t = stmt.decl_type;
        t.pointer_depth += d.extra_pointer_depth;
        resolve(t);
        if (d.init) collect_types(*d.init);
      }
    }
    if (stmt.expr) collect_types(*stmt.expr);
    if (stmt.for_step) collect_types(*stmt.for_step);
    for (const Stmt* child : {stmt.for_init.get(), stmt.then_branch.get(), stmt.else_branch.get()})
      if (child) collect_types(*child);
    for (const auto& child : stmt.block) collect_types(*child);
  }

  void collect_types(const Expr& expr) {
    if (expr.kind == Expr::Kind::WeakenCast) resolve(expr.cast_type);
    for (const auto& op : expr.operands) collect_types(*op);
  }

  void declare_builtin_operators() {
    for (const auto& op : builtin_operators()) {
      std::vector<FunctionArg> args;
      for (const char* a : op.args) args.push_back({*u_.lookup(a), false});
      Overload o;
      o.name = op.name;
      o.signature = function_type(std::move(args), *u_.lookup(op.ret), false, true);
      o.builtin = true;
      o.has_body = true;
      add_overload(std::move(o));
    }
  }

  void saturate_pointers() {
    std::vector<TypeId> used(used_.begin(), used_.end());
    for (TypeId t : used) {
      TypeKind k = u_.desc(t).kind;
      if (k != TypeKind::Function && k != TypeKind::Pointer) pointer(t);
    }
    pointer(*u_.lookup("char"));  // string literals
  }

  void record_distinct() {
    for (const auto& decl : program_.declarations) {
      auto* d = std::get_if<DistinctDirective>(&decl);
      if (!d) continue;
      std::vector<TypeId> ids;
      for (const auto& t : d->types) ids.push_back(u_.resolve(t));
      for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = 0; b < ids.size(); ++b)
          if (a != b) u_.distinct_.emplace_back(ids[a], ids[b]);
    }
  }

  // Interns the strengthened forms of protocol operation signatures, e.g.
  // int(*)(DirIval+, int) next to int(*)(Ival+, int).
  void saturate_strengthenings() {
    std::vector<TypeId> candidates;
    for (std::size_t i = 0; i < u_.types_.size(); ++i) {
      TypeKind k = u_.types_[i].kind;
      if (k != TypeKind::Function && k != TypeKind::Any) candidates.push_back(make_type_id(i));
    }
    std::vector<TypeId> signatures;
    for (const auto& [key, family] : u_.overloads_) {
      if (!u_.is_protocol_operation(key.first)) continue;
      for (const auto& o : family) signatures.push_back(o.signature);
    }
    int depth = u_.options_.comparison_depth;
    for (TypeId sig : signatures) {
      const TypeDesc base = u_.desc(sig);
      std::vector<std::vector<TypeId>> choices;
      bool any_plus = false;
      for (const auto& a : base.args) {
        std::vector<TypeId> options{a.type};
        if (a.strengthenable) {
          any_plus = true;
          for (TypeId c : candidates)
            if (c != a.type && syntactically_subsumed(u_, c, a.type, depth)) options.push_back(c);
        }
        choices.push_back(std::move(options));
      }
      if (!any_plus) continue;
      std::vector<std::size_t> cursor(choices.size(), 0);
      while (true) {
        std::vector<FunctionArg> args;
        for (std::size_t i = 0; i < choices.size(); ++i)
          args.push_back({choices[i][cursor[i]], base.args[i].strengthenable});
        function_type(std::move(args), base.ret, base.ret_strengthenable, false);
        std::size_t k = 0;
        while (k < cursor.size() && ++cursor[k] == choices[k].size()) cursor[k++] = 0;
        if (k == cursor.size()) break;
      }
    }
  }

  TypeRelation& relation(const RelationLabel& label) {
    auto it = u_.relation_index_.find(label);
    if (it != u_.relation_index_.end()) return u_.relations_[it->second];
    u_.relation_index_[label] = u_.relations_.size();
    u_.relations_.emplace_back(label, u_.types_.size());
    return u_.relations_.back();
  }

  void populate_relations() {
    // Labels are created in source order so diagnostics pick the first-declared operation.
    for (const auto& decl : program_.declarations) {
      if (auto* s = std::get_if<StructDecl>(&decl)) {
        TypeId id = *u_.lookup("struct " + s->tag);
        for (const auto& [field, ft] : u_.desc(id).fields) relation(RelationLabel::field_select(field)).add(id, ft, false);
      } else if (auto* f = std::get_if<FunctionDecl>(&decl)) {
        if (!u_.is_protocol_operation(f->name)) continue;
        int arity = static_cast<int>(f->params.size());
        for (const auto& o : u_.overloads(f->name, arity)) {
          const TypeDesc& sig = u_.desc(o.signature);
          for (int i = 1; i <= arity; ++i) {
            const FunctionArg& a = sig.args[i - 1];
            relation(RelationLabel::arg_signature(f->name, i, arity)).add(a.type, o.signature, a.strengthenable);
          }
        }
      }
    }
    // Parameter types inherit the protocol operations of their bounds.
    for (std::size_t i = 0; i < u_.types_.size(); ++i) {
      const TypeDesc& d = u_.types_[i];
      if (d.kind != TypeKind::Parameter) continue;
      for (TypeId bound : d.bounds) {
        for (auto& rel : u_.relations_) {
          if (rel.label().tag != RelationLabel::Tag::ArgSignature) continue;
          std::vector<RelationEdge> edges(rel.successors(bound).begin(), rel.successors(bound).end());
          for (const auto& e : edges) rel.add(make_type_id(i), e.to, e.strengthenable);
        }
      }
    }
    for (std::size_t i = 0; i < u_.types_.size(); ++i) {
      const TypeDesc d = u_.types_[i];
      TypeId id = make_type_id(i);
      if (d.kind == TypeKind::Pointer) relation(RelationLabel::pointer_deref()).add(id, d.pointee, false);
      if (d.kind == TypeKind::Function) {
        int arity = static_cast<int>(d.args.size());
        for (int a = 1; a <= arity; ++a) relation(RelationLabel::arg(a, arity)).add(id, d.args[a - 1].type, false);
        relation(RelationLabel::ret(arity)).add(id, d.ret, false);
      }
    }
    u_.labels_from_.assign(u_.types_.size(), {});
    for (std::size_t r = 0; r < u_.relations_.size(); ++r)
      for (std::size_t i = 0; i < u_.types_.size(); ++i)
        if (!u_.relations_[r].successors(make_type_id(i)).empty()) u_.labels_from_[i].push_back(r);
  }

  const SurfaceProgram& program_;
  TypeUniverse u_;
  std::set<TypeId> used_;
};

TypeUniverse build_universe(const SurfaceProgram& program, const UniverseOptions& options) {
  return UniverseBuilder(program, options).build();
}

}  // namespace moot
