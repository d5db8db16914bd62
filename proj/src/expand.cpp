#include <map>
#include <set>

#include "moot/frontend.hpp"

namespace moot {
namespace {

class Expander {
 public:
  explicit Expander(const SurfaceProgram& program) : program_(program) {
    for (std::size_t i = 0; i < program.declarations.size(); ++i) {
      if (auto* p = std::get_if<ParameterTypeDecl>(&program.declarations[i])) parameters_.insert(p->name);
      if (auto* p = std::get_if<ParamTypedefDecl>(&program.declarations[i])) later_[p->name] = p;
    }
  }

  ExpandedProgram run() {
    ExpandedProgram out;
    out.program.sources = program_.sources;
    for (const auto& decl : program_.declarations) {
      if (auto* s = std::get_if<StructDecl>(&decl)) {
        record(*s);
      } else if (auto* t = std::get_if<TypedefDecl>(&decl)) {
        record(*t);
      } else if (auto* p = std::get_if<ParamTypedefDecl>(&decl)) {
        expand(*p, out);
        later_.erase(p->name);
        continue;
      }
      out.program.declarations.push_back(decl);
    }
    return out;
  }

 private:
  void record(const StructDecl& s) {
    structs_[s.tag] = s;
    struct_order_.push_back(s.tag);
  }

  void record(const TypedefDecl& t) {
    typedefs_[t.name] = t;
    typedef_order_.push_back(t.name);
  }

  // The struct tag a type name refers to, through at most one typedef.
  std::optional<std::string> struct_of(const TypeRef& ref) const {
    if (ref.struct_tag) return structs_.count(ref.base) ? std::optional(ref.base) : std::nullopt;
    auto it = typedefs_.find(ref.base);
    if (it == typedefs_.end() || !it->second.target.struct_tag) return std::nullopt;
    return it->second.target.base;
  }

  bool cyclic(const std::string& from, const std::string& target) const {
    std::set<std::string> seen;
    std::string cur = from;
    while (later_.count(cur) && seen.insert(cur).second) {
      cur = later_.at(cur)->generic;
      if (cur == target) return true;
    }
    return false;
  }

  void expand(const ParamTypedefDecl& p, ExpandedProgram& out) {
    if (p.generic == p.name || cyclic(p.generic, p.name))
      fail(Stage::Expand, p.span, "cyclic instantiation of '" + p.name + "'");
    std::map<std::string, std::string> subst;
    for (const auto& s : p.substitutions) {
      if (!parameters_.count(s.parameter))
        fail(Stage::Expand, p.span, "'" + s.parameter + "' is not a parametertype");
      subst[s.parameter] = s.concrete;
      out.obligations.push_back({s.concrete, s.parameter, p.name, p.span});
    }

    TypeRef generic_ref;
    generic_ref.base = p.generic;
    std::optional<std::string> root = struct_of(generic_ref);
    if (!root) {
      if (later_.count(p.generic))
        fail(Stage::Expand, p.span, "'" + p.generic + "' is instantiated before it is defined");
      fail(Stage::Expand, p.span, "'" + p.generic + "' does not name a struct type");
    }

    // Clone the root and every struct reachable from it that mentions a substituted parameter.
    std::map<std::string, bool> mentions;
    std::function<bool(const std::string&)> visit = [&](const std::string& tag) {
      if (auto it = mentions.find(tag); it != mentions.end()) return it->second;
      mentions[tag] = false;
      bool any = false;
      for (const auto& f : structs_.at(tag).fields) {
        if (!f.type.struct_tag && subst.count(f.type.base)) any = true;
        if (auto dep = struct_of(f.type); dep && visit(*dep)) any = true;
      }
      return mentions[tag] = any;
    };
    visit(*root);

    auto rename = [&](const std::string& old) {
      auto pos = old.find(p.generic);
      if (pos != std::string::npos) return old.substr(0, pos) + p.name + old.substr(pos + p.generic.size());
      return p.name + "_" + old;
    };
    std::map<std::string, std::string> tag_names;
    for (const auto& [tag, m] : mentions)
      if (m || tag == *root) tag_names[tag] = rename(tag);
    std::map<std::string, std::string> type_names;
    for (const auto& name : typedef_order_) {
      const auto& t = typedefs_.at(name);
      if (t.target.struct_tag && tag_names.count(t.target.base)) type_names[name] = name == p.generic ? p.name : rename(name);
    }

    auto rewrite = [&](TypeRef ref) {
      if (ref.struct_tag) {
        if (auto it = tag_names.find(ref.base); it != tag_names.end()) ref.base = it->second;
      } else if (auto it = subst.find(ref.base); it != subst.end()) {
        ref.base = it->second;
      } else if (auto it = type_names.find(ref.base); it != type_names.end()) {
        ref.base = it->second;
      }
      ref.spec = {};
      return ref;
    };

    bool root_typedef = false;
    for (const auto& tag : struct_order_) {
      if (!tag_names.count(tag)) continue;
      StructDecl clone = structs_.at(tag);
      clone.tag = tag_names.at(tag);
      clone.span = p.span;
      for (auto& f : clone.fields) f.type = rewrite(f.type);
      record(clone);
      out.program.declarations.push_back(clone);
      for (const auto& [old_name, new_name] : type_names) {
        const auto& t = typedefs_.at(old_name);
        if (t.target.base != tag) continue;
        TypedefDecl td = t;
        td.name = new_name;
        td.target = rewrite(t.target);
        td.span = p.span;
        root_typedef = root_typedef || new_name == p.name;
        out.program.declarations.push_back(td);
      }
    }
    // Typedefs are recorded after the loop so type_names stays stable while iterating.
    for (const auto& [old_name, new_name] : type_names) {
      TypedefDecl td = typedefs_.at(old_name);
      td.name = new_name;
      td.target = rewrite(td.target);
      record(td);
    }
    if (!root_typedef) {
      TypedefDecl td;
      td.target.base = tag_names.at(*root);
      td.target.struct_tag = true;
      td.name = p.name;
      td.span = p.span;
      record(td);
      out.program.declarations.push_back(td);
    }
  }

  const SurfaceProgram& program_;
  std::set<std::string> parameters_;
  std::map<std::string, const ParamTypedefDecl*> later_;
  std::map<std::string, StructDecl> structs_;
  std::vector<std::string> struct_order_;
  std::map<std::string, TypedefDecl> typedefs_;
  std::vector<std::string> typedef_order_;
};

}  // namespace

ExpandedProgram expand_param_typedefs(const SurfaceProgram& program) { return Expander(program).run(); }

std::vector<Diagnostic> check_parameter_bounds(const ExpandedProgram& expanded, const TypeUniverse& u,
                                               const Hierarchy& h) {
  std::vector<Diagnostic> out;
  for (const auto& ob : expanded.obligations) {
    auto concrete = u.lookup(ob.concrete);
    auto parameter = u.lookup(ob.parameter);
    if (!concrete) {
      out.push_back({Stage::Check, Severity::Error, ob.span, "unknown type '" + ob.concrete + "'"});
      continue;
    }
    if (auto cx = check_subsumption(u, h, *concrete, *parameter))
      out.push_back({Stage::Check, Severity::Error, ob.span, cx->rendered});
  }
  return out;
}

std::vector<Diagnostic> check_directives(const SurfaceProgram& program, const TypeUniverse& u, const Hierarchy& h) {
  std::vector<Diagnostic> out;
  for (const auto& decl : program.declarations) {
    auto* c = std::get_if<CheckDirective>(&decl);
    if (!c) continue;
    if (auto cx = check_subsumption(u, h, u.resolve(c->strong), u.resolve(c->weak)))
      out.push_back({Stage::Check, Severity::Error, c->span, cx->rendered});
  }
  return out;
}

}  // namespace moot
