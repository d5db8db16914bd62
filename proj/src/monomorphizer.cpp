#include "moot/monomorphizer.hpp"

#include <ostream>
#include <set>

namespace moot {
namespace {

using Key = std::pair<std::size_t, std::vector<TypeId>>;

}  // namespace

bool is_concrete_type(const TypeUniverse& u, TypeId t) {
  const TypeDesc& d = u.desc(t);
  switch (d.kind) {
    case TypeKind::Any:
    case TypeKind::Protocol:
    case TypeKind::Parameter:
    case TypeKind::Function:
      return false;
    case TypeKind::Pointer:
      return is_concrete_type(u, d.pointee);
    default:
      return true;
  }
}

namespace {

class Monomorphizer {
 public:
  Monomorphizer(const SurfaceProgram& program, const TypeUniverse& u, GraphContext& ctx,
                const MonomorphizeOptions& options)
      : program_(program), u_(u), ctx_(ctx), order_(ctx.order()), options_(options) {}

  InstantiationTree run() {
    const Overload* entry = nullptr;
    for (const auto& [name, arity] : u_.function_families()) {
      if (name != options_.entry) continue;
      for (const auto& o : u_.overloads(name, arity)) {
        if (!o.has_body) continue;
        if (entry) fail(Stage::Typing, o.span, "more than one definition of entry function '" + name + "'");
        entry = &o;
      }
    }
    Span where;
    if (!program_.sources.empty()) where.file = program_.sources.front()->name;
    if (!entry) fail(Stage::Typing, where, "no entry function '" + options_.entry + "'");
    const FunctionDecl& fn = function(*entry->declaration);
    std::vector<TypeId> args;
    for (const auto& p : fn.params) {
      TypeId t = u_.resolve(p.type);
      if (p.type.strengthenable || !is_concrete_type(u_, t))
        fail(Stage::Typing, p.span, "entry function '" + fn.name + "' must have concrete parameter types");
      args.push_back(t);
    }
    if (fn.ret.strengthenable)
      fail(Stage::Typing, fn.ret.span, "entry function '" + fn.name + "' must not strengthen its result");

    std::size_t root = instantiate(*entry->declaration, args);
    return finish(root);
  }

 private:
  struct Pending {
    std::vector<std::optional<Key>> callees;
  };

  const FunctionDecl& function(std::size_t declaration) const {
    return std::get<FunctionDecl>(program_.declarations[declaration]);
  }

  TypeId concrete(const FunctionGraph& g, const Typing& typing, NodeId n) const {
    TypeId t = typing[n].front();
    if (g.seeds[n] && order_.equivalent(*g.seeds[n], t)) return *g.seeds[n];
    return t;
  }

  std::string trace_line(const FunctionDecl& fn, const std::vector<TypeId>& args) const {
    TypeId ret = u_.resolve(fn.ret);
    if (!trace_.empty()) return render_call_signature(u_, fn.name, args, ret);
    std::string out = u_.name(ret) + " " + fn.name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + u_.name(args[i]);
    return out + ")";
  }

  [[noreturn]] void type_error(const Span& at, std::vector<Diagnostic> notes) const {
    std::string message = "type error after call sequence:";
    for (std::size_t i = 0; i < trace_.size(); ++i) message += "\n" + std::to_string(i + 1) + ": " + trace_[i];
    message += "\n...";
    throw CompileError({Stage::Typing, Severity::Error, at, message}, std::move(notes));
  }

  // `start` is the typing the last run began from; replaying it finds the
  // first flow that left a node without types.
  void check_valid(const FunctionGraph& g, const Typing& start, const Typing& typing) const {
    Classification c = classify_typing(typing);
    if (c.kind == Classification::Kind::Valid) return;
    std::vector<Diagnostic> notes;
    if (c.kind == Classification::Kind::Inconsistent) {
      std::optional<std::pair<std::size_t, Flow>> culprit;
      TypingOptions replay;
      replay.trace = [&](std::size_t e, const Flow& before, const Flow&after) {
        if (!culprit && (after.left.empty() || after.right.empty())) culprit.emplace(e, before);
      };
      run_typing(g.graph, ctx_.table(), order_, start, nullptr, replay);
      if (culprit) {
        const auto& edge = g.graph.edges[culprit->first];
        const auto& from = g.graph.nodes[edge.from];
        const auto& to = g.graph.nodes[edge.to];
        notes.push_back({Stage::Typing, Severity::Note, to.span,
                         from.role + " " + format_antichain(u_, culprit->second.left) + " does not match " +
                             to.role + " " + format_antichain(u_, culprit->second.right) + " under " +
                             ctx_.table()[edge.label].name});
      }
      notes.push_back({Stage::Typing, Severity::Note, g.graph.nodes[c.nodes.front()].span,
                       std::to_string(c.nodes.size()) + " expression(s) left without a consistent type"});
      Span at = notes.front().span;
      type_error(at, std::move(notes));
    }
    for (NodeId n : c.nodes) {
      const auto& node = g.graph.nodes[n];
      notes.push_back({Stage::Typing, Severity::Note, node.span,
                       "ambiguous type for " + node.role + ": " + format_antichain(u_, typing[n])});
      if (notes.size() == 8) break;
    }
    Span at = notes.front().span;
    type_error(at, std::move(notes));
  }

  const Overload& select(const CallSite& c, TypeId sig) const {
    const Overload* chosen = nullptr;
    bool prototype = false;
    for (const auto& o : u_.overloads(c.name, c.arity)) {
      if (!order_.equivalent(o.signature, sig)) continue;
      if (!o.has_body) {
        prototype = true;
        continue;
      }
      if (chosen)
        type_error(c.span, {{Stage::Typing, Severity::Note, c.span,
                             "ambiguous call to " + c.name + ": " + u_.name(chosen->signature) + " and " +
                                 u_.name(o.signature)}});
      chosen = &o;
    }
    if (!chosen) {
      std::string why = prototype ? "only a prototype of " : "no definition of ";
      type_error(c.span, {{Stage::Typing, Severity::Note, c.span, why + c.name + " matches " + u_.name(sig)}});
    }
    return *chosen;
  }

  // Narrows `n` to `t` when t is strictly stronger than its current type.
  static bool narrow(const SubsumptionOrder& order, Typing& typing, NodeId n, TypeId t) {
    if (!order.less(t, typing[n].front())) return false;
    typing[n] = restrict_maximal(order, {t});
    return true;
  }

  std::size_t instantiate(std::size_t declaration, const std::vector<TypeId>& args) {
    Key key{declaration, args};
    if (auto it = done_.find(key); it != done_.end()) return it->second;
    const FunctionDecl& fn = function(declaration);
    trace_.push_back(trace_line(fn, args));
    active_.insert(key);

    FunctionGraph g = build_syntax_graph(fn, ctx_, &args);
    Typing start = g.initial;
    Typing typing = run_typing(g.graph, ctx_.table(), order_, start).typing;
    Pending pending;
    for (;;) {
      check_valid(g, start, typing);
      pending.callees.assign(g.calls.size(), std::nullopt);
      bool changed = false;
      for (std::size_t ci = 0; ci < g.calls.size(); ++ci) {
        const CallSite& c = g.calls[ci];
        if (c.builtin) continue;
        const Overload& o = select(c, typing[c.signature].front());
        const TypeDesc& sig = u_.desc(o.signature);
        std::vector<TypeId> actuals;
        for (int i = 0; i < c.arity; ++i)
          actuals.push_back(sig.args[i].strengthenable ? concrete(g, typing, c.value_nodes[i]) : sig.args[i].type);
        Key callee{*o.declaration, actuals};
        pending.callees[ci] = callee;
        if (active_.count(callee)) continue;  // recursion: collapsed onto the open instantiation
        std::size_t idx = instantiate(*o.declaration, actuals);
        const Instantiation& inst = nodes_[idx];
        for (int i = 0; i < c.arity; ++i)
          if (sig.args[i].strengthenable) changed |= narrow(order_, typing, c.value_nodes[i], inst.args[i]);
        if (sig.ret_strengthenable) changed |= narrow(order_, typing, c.result, inst.ret);
      }
      if (!changed) break;
      start = typing;
      typing = run_typing(g.graph, ctx_.table(), order_, start).typing;
    }

    Instantiation inst;
    inst.name = fn.name;
    inst.declaration = declaration;
    inst.signature = *u_.find_function(
        [&] {
          std::vector<FunctionArg> a;
          for (const auto& p : fn.params) a.push_back({u_.resolve(p.type), p.type.strengthenable});
          return a;
        }(),
        u_.resolve(fn.ret), fn.ret.strengthenable);
    for (const DeclSite& d : g.decls) {
      TypeId declared = u_.resolve(d.type);
      TypeId t = d.type.strengthenable ? concrete(g, typing, d.node) : declared;
      if (!d.type.strengthenable && !order_.equivalent(typing[d.node].front(), declared)) {
        std::string what = d.parameter ? "parameter '" : "variable '";
        type_error(d.span, {{Stage::Typing, Severity::Note, d.span,
                             what + d.name + "' is declared " + u_.name(declared) + " but must be " +
                                 u_.name(typing[d.node].front())}});
      }
      if (d.parameter && !d.type.strengthenable) t = args[d.declarator];
      if (!is_concrete_type(u_, t)) {
        type_error(d.span, {{Stage::Typing, Severity::Note, d.span,
                             "no concrete type for '" + d.name + "': " + u_.name(t)}});
      }
      inst.decl_types.push_back(t);
    }
    for (std::size_t k = 1; k < g.decls.size(); ++k) {
      const DeclSite& d = g.decls[k];
      if (d.stmt && d.stmt == g.decls[k - 1].stmt && inst.decl_types[k] != inst.decl_types[k - 1])
        type_error(d.span, {{Stage::Typing, Severity::Note, d.span,
                             "'" + g.decls[k - 1].name + "' and '" + d.name +
                                 "' share a declaration but strengthen to different types"}});
    }
    inst.args = args;
    for (const DeclSite& d : g.decls)
      if (d.parameter) inst.args[d.declarator] = inst.decl_types[&d - g.decls.data()];
    inst.ret = fn.ret.strengthenable && g.ret ? concrete(g, typing, *g.ret) : u_.resolve(fn.ret);
    if (!is_concrete_type(u_, inst.ret) && u_.name(inst.ret) != "void")
      type_error(fn.ret.span, {{Stage::Typing, Severity::Note, fn.ret.span,
                                "no concrete return type for " + fn.name + ": " + u_.name(inst.ret)}});
    inst.graph = std::move(g);
    inst.typing = std::move(typing);

    if (options_.trace) {
      *options_.trace << "instantiation " << render_call_signature(u_, fn.name, inst.args, inst.ret) << "\n";
      for (NodeId n = 0; n < inst.graph.graph.nodes.size(); ++n) {
        const auto& node = inst.graph.graph.nodes[n];
        *options_.trace << "  " << n << " " << node.role << " " << node.span.str() << ": "
                        << format_antichain(u_, inst.typing[n]) << "\n";
      }
    }

    std::size_t idx = nodes_.size();
    Key final_key{declaration, inst.args};
    nodes_.push_back(std::move(inst));
    pending_.push_back(std::move(pending));
    done_[key] = idx;
    done_.emplace(final_key, idx);
    active_.erase(key);
    trace_.pop_back();
    return idx;
  }

  InstantiationTree finish(std::size_t root) {
    InstantiationTree tree;
    // Keep only instantiations reachable from the entry through the final call resolutions.
    std::vector<bool> reachable(nodes_.size(), false);
    std::vector<std::size_t> stack{root};
    reachable[root] = true;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (const auto& k : pending_[i].callees) {
        if (!k) continue;
        std::size_t j = done_.at(*k);
        if (!reachable[j]) {
          reachable[j] = true;
          stack.push_back(j);
        }
      }
    }
    std::vector<std::optional<std::size_t>> renumber(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!reachable[i]) continue;
      renumber[i] = tree.nodes.size();
      tree.nodes.push_back(std::move(nodes_[i]));
    }
    std::map<std::string, int> used;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!renumber[i]) continue;
      Instantiation& inst = tree.nodes[*renumber[i]];
      std::string base = i == root ? inst.name : mangle(u_, inst.name, inst.args);
      int n = ++used[base];
      inst.mangled = n == 1 ? base : base + "__" + std::to_string(n);
      inst.callees.clear();
      for (std::size_t ci = 0; ci < pending_[i].callees.size(); ++ci) {
        const auto& k = pending_[i].callees[ci];
        if (!k) {
          inst.callees.push_back(std::nullopt);
          continue;
        }
        std::size_t callee = *renumber[done_.at(*k)];
        inst.callees.push_back(callee);
        tree.edges.push_back({*renumber[i], callee, inst.graph.calls[ci].span});
      }
    }
    tree.entry = *renumber[root];
    return tree;
  }

  const SurfaceProgram& program_;
  const TypeUniverse& u_;
  GraphContext& ctx_;
  const SubsumptionOrder& order_;
  MonomorphizeOptions options_;

  std::vector<Instantiation> nodes_;
  std::vector<Pending> pending_;
  std::map<Key, std::size_t> done_;
  std::set<Key> active_;
  std::vector<std::string> trace_;
};

}  // namespace

const Instantiation* InstantiationTree::find(const std::string& mangled) const {
  for (const auto& n : nodes)
    if (n.mangled == mangled) return &n;
  return nullptr;
}

std::string mangle(const TypeUniverse& u, const std::string& name, const std::vector<TypeId>& args) {
  std::string out = name;
  for (TypeId a : args) out += "_" + u.desc(a).mangled;
  return out;
}

InstantiationTree monomorphize(const SurfaceProgram& program, const TypeUniverse& u, GraphContext& ctx,
                               const MonomorphizeOptions& options) {
  return Monomorphizer(program, u, ctx, options).run();
}

}  // namespace moot
