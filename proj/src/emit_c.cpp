#include <algorithm>
#include <set>

#include "moot/monomorphizer.hpp"

namespace moot {
namespace {

struct Replacement {
  std::size_t begin;
  std::size_t end;
  std::string text;

  bool operator<(const Replacement& o) const { return begin < o.begin; }
};

void collect_casts(const Expr& e, std::vector<Replacement>& out) {
  if (e.kind == Expr::Kind::WeakenCast) out.push_back({e.token, e.cast_end, ""});
  for (const auto& op : e.operands) collect_casts(*op, out);
}

void collect_casts(const Stmt& s, std::vector<Replacement>& out) {
  for (const auto& d : s.declarators)
    if (d.init) collect_casts(*d.init, out);
  if (s.expr) collect_casts(*s.expr, out);
  if (s.for_init) collect_casts(*s.for_init, out);
  if (s.for_step) collect_casts(*s.for_step, out);
  if (s.then_branch) collect_casts(*s.then_branch, out);
  if (s.else_branch) collect_casts(*s.else_branch, out);
  for (const auto& child : s.block) collect_casts(*child, out);
}

// Source text of tokens [begin, end) with the replacements applied and the
// original spacing kept.
std::string rewrite(const SourceFile& file, std::size_t begin, std::size_t end, std::vector<Replacement> reps) {
  std::sort(reps.begin(), reps.end());
  std::string out;
  std::size_t next = 0;
  std::size_t last_end = file.tokens[begin].offset;
  for (std::size_t i = begin; i < end;) {
    const Token& t = file.tokens[i];
    out += file.text.substr(last_end, t.offset - last_end);
    while (next < reps.size() && reps[next].begin < i) ++next;
    if (next < reps.size() && reps[next].begin == i) {
      const Replacement& r = reps[next++];
      out += r.text;
      const Token& last = file.tokens[r.end - 1];
      last_end = last.offset + last.text.size();
      // An emptied range should not leave a doubled gap behind.
      if (r.text.empty() && r.end < end) last_end = file.tokens[r.end].offset;
      i = r.end;
      continue;
    }
    out += t.text;
    last_end = t.offset + t.text.size();
    ++i;
  }
  return out;
}

std::string spell_base(const TypeUniverse& u, TypeId t, int pointer_depth) {
  while (pointer_depth-- > 0) t = u.desc(t).pointee;
  return u.desc(t).c_spelling;
}

std::string spell(const TypeRef& ref, const std::string& name) {
  std::string out = ref.struct_tag ? "struct " + ref.base : ref.base;
  out += " " + std::string(ref.pointer_depth, '*') + (ref.reference ? "&" : "") + name;
  return out;
}

class Emitter {
 public:
  Emitter(const SurfaceProgram& program, const TypeUniverse& u, const InstantiationTree& tree)
      : program_(program), u_(u), tree_(tree) {}

  std::string declarations() {
    std::string out;
    std::set<std::string> skipped;
    auto usable = [&](const TypeRef& ref) {
      if (ref.struct_tag && skipped.count(ref.base)) return false;
      auto t = u_.try_resolve(ref);
      return t && is_concrete_type(u_, *t);
    };
    for (const auto& decl : program_.declarations) {
      if (auto* s = std::get_if<StructDecl>(&decl)) {
        bool ok = std::all_of(s->fields.begin(), s->fields.end(), [&](const FieldDecl& f) {
          if (f.type.struct_tag && f.type.base == s->tag) return true;
          return usable(f.type);
        });
        if (!ok) {
          skipped.insert(s->tag);
          continue;
        }
        out += "struct " + s->tag + " {\n";
        for (const auto& f : s->fields) out += "  " + spell(f.type, f.name) + ";\n";
        out += "};\n\n";
      } else if (auto* t = std::get_if<TypedefDecl>(&decl)) {
        if (!usable(t->target)) continue;
        out += "typedef " + spell(t->target, t->name) + ";\n\n";
      }
    }
    return out;
  }

  std::string prototype(const Instantiation& inst) const {
    const FunctionDecl& fn = function(inst);
    const SourceFile& file = *fn.tokens.file;
    std::size_t body = fn.name_token;
    while (body < fn.tokens.end && file.tokens[body].text != "{") ++body;
    std::string text = rewrite(file, fn.tokens.begin, body, header_replacements(inst));
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    return text + ";\n";
  }

  std::string definition(const Instantiation& inst) const {
    const FunctionDecl& fn = function(inst);
    std::vector<Replacement> reps = header_replacements(inst);
    const FunctionGraph& g = inst.graph;
    for (std::size_t k = 0; k < g.decls.size(); ++k) {
      const DeclSite& d = g.decls[k];
      if (d.parameter || !d.type.strengthenable) continue;
      if (k > 0 && g.decls[k - 1].stmt == d.stmt) continue;
      reps.push_back({d.type.spec.begin, d.type.spec.end, spell_base(u_, inst.decl_types[k], d.type.pointer_depth)});
    }
    for (std::size_t ci = 0; ci < g.calls.size(); ++ci) {
      if (!inst.callees[ci]) continue;
      const Expr& e = *g.calls[ci].expr;
      reps.push_back({e.token, e.token + 1, tree_.nodes[*inst.callees[ci]].mangled});
    }
    collect_casts(*fn.body, reps);
    return rewrite(*fn.tokens.file, fn.tokens.begin, fn.tokens.end, std::move(reps)) + "\n";
  }

 private:
  const FunctionDecl& function(const Instantiation& inst) const {
    return std::get<FunctionDecl>(program_.declarations[inst.declaration]);
  }

  std::vector<Replacement> header_replacements(const Instantiation& inst) const {
    const FunctionDecl& fn = function(inst);
    std::vector<Replacement> reps;
    reps.push_back({fn.name_token, fn.name_token + 1, inst.mangled});
    if (fn.ret.strengthenable)
      reps.push_back({fn.ret.spec.begin, fn.ret.spec.end, spell_base(u_, inst.ret, fn.ret.pointer_depth)});
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      const TypeRef& t = fn.params[i].type;
      if (t.strengthenable) reps.push_back({t.spec.begin, t.spec.end, spell_base(u_, inst.args[i], t.pointer_depth)});
    }
    return reps;
  }

  const SurfaceProgram& program_;
  const TypeUniverse& u_;
  const InstantiationTree& tree_;
};

}  // namespace

std::string emit_c(const SurfaceProgram& program, const TypeUniverse& u, const InstantiationTree& tree,
                   const EmitOptions& options) {
  Emitter emitter(program, u, tree);
  std::string out = "/* generated by mootc";
  if (!options.tool_version.empty()) out += " " + options.tool_version;
  if (!options.sources.empty()) {
    out += " from";
    for (const auto& s : options.sources) out += " " + s;
  }
  out += " */\n\n#include <stdio.h>\n#include <stdbool.h>\n\n";
  out += emitter.declarations();
  bool any_prototype = false;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (i == tree.entry) continue;
    out += emitter.prototype(tree.nodes[i]);
    any_prototype = true;
  }
  if (any_prototype) out += "\n";
  for (const auto& inst : tree.nodes) out += emitter.definition(inst) + "\n";
  return out;
}

}  // namespace moot
