#include <map>

#include "moot/frontend.hpp"

namespace moot {
namespace {


class GraphBuilder {
 public:
  GraphBuilder(const FunctionDecl& fn, GraphContext& ctx) : fn_(fn), ctx_(ctx), u_(ctx.universe()) {
    g_.function = &fn;
  }

  FunctionGraph build(const std::vector<TypeId>* actuals) {
    scopes_.emplace_back();
    for (std::size_t i = 0; i < fn_.params.size(); ++i) {
      const ParamDecl& p = fn_.params[i];
      TypeId declared = u_.resolve(p.type);
      TypeId seed = actuals ? (*actuals)[i] : declared;
      NodeId n = node("parameter " + (p.name.empty() ? std::to_string(i + 1) : p.name), p.span, seed);
      g_.params.push_back(n);
      g_.decls.push_back({p.name, p.type, n, true, nullptr, i, p.span});
      if (!p.name.empty()) scopes_.back()[p.name] = {n, p.type.strengthenable};
    }
    TypeId ret = u_.resolve(fn_.ret);
    if (u_.name(ret) != "void") ret_ = g_.ret = node("return value", fn_.ret.span, ret);
    if (fn_.body) statement(*fn_.body);
    return std::move(g_);
  }

 private:
  struct Binding {
    NodeId node;
    bool strengthenable;
  };

  NodeId node(std::string role, const Span& span, std::optional<TypeId> seed = std::nullopt) {
    NodeId n = g_.graph.add_node(std::move(role), span);
    g_.seeds.push_back(seed);
    g_.initial.push_back(seed ? restrict_maximal(ctx_.order(), {*seed}) : Antichain::from_canonical({ctx_.universe().any()}));
    return n;
  }

  void edge(NodeId from, NodeId to, MatchLabel label) { g_.graph.add_edge(from, to, label); }

  TypeId builtin(const char* name) { return *u_.lookup(name); }

  std::optional<Binding> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto found = it->find(name); found != it->end()) return found->second;
    return std::nullopt;
  }

  void condition(const Expr& e) {
    NodeId value = expr(e);
    NodeId b = node("condition", e.span, builtin("bool"));
    edge(value, b, ctx_.subsumption());
  }

  void statement(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
        for (std::size_t i = 0; i < s.declarators.size(); ++i) {
          const Declarator& d = s.declarators[i];
          TypeRef type = s.decl_type;
          type.pointer_depth += d.extra_pointer_depth;
          type.reference = d.reference;
          TypeId declared = u_.resolve(type);
          std::optional<NodeId> init;
          if (d.init) init = expr(*d.init);
          NodeId n = node("declaration " + d.name, d.span, declared);
          if (init) edge(*init, n, type.strengthenable ? ctx_.identity() : ctx_.subsumption());
          g_.decls.push_back({d.name, type, n, false, &s, i, d.span});
          scopes_.back()[d.name] = {n, type.strengthenable};
        }
        break;
      case Stmt::Kind::ExprStmt:
        if (s.expr) expr(*s.expr);
        break;
      case Stmt::Kind::If:
        condition(*s.expr);
        scoped(*s.then_branch);
        if (s.else_branch) scoped(*s.else_branch);
        break;
      case Stmt::Kind::While:
        condition(*s.expr);
        scoped(*s.then_branch);
        break;
      case Stmt::Kind::For:
        scopes_.emplace_back();
        if (s.for_init) statement(*s.for_init);
        if (s.expr) condition(*s.expr);
        if (s.for_step) expr(*s.for_step);
        scoped(*s.then_branch);
        scopes_.pop_back();
        break;
      case Stmt::Kind::Return:
        if (s.expr) {
          NodeId value = expr(*s.expr);
          if (!ret_) fail(Stage::Typing, s.span, "void function '" + fn_.name + "' returns a value");
          edge(value, *ret_, fn_.ret.strengthenable ? ctx_.identity() : ctx_.subsumption());
        }
        break;
      case Stmt::Kind::Block:
        scopes_.emplace_back();
        for (const auto& child : s.block) statement(*child);
        scopes_.pop_back();
        break;
      case Stmt::Kind::Empty:
        break;
    }
  }

  void scoped(const Stmt& s) {
    scopes_.emplace_back();
    statement(s);
    scopes_.pop_back();
  }

  NodeId call(const std::string& name, const std::vector<const Expr*>& args, const Expr& at, bool builtin_op) {
    int arity = static_cast<int>(args.size());
    if (u_.overloads(name, arity).empty()) {
      std::string what = builtin_op ? "operator '" + name + "'" : "function '" + name + "'";
      fail(Stage::Typing, at.span,
           "no " + what + " taking " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s"));
    }
    CallSite site;
    site.name = name;
    site.arity = arity;
    site.builtin = builtin_op;
    site.expr = &at;
    site.span = at.span;
    for (const Expr* a : args) {
      if (a->kind == Expr::Kind::WeakenCast) {
        NodeId inner = expr(*a->operands[0]);
        NodeId cast = node("cast", a->span, u_.resolve(a->cast_type));
        edge(inner, cast, ctx_.subsumption());
        site.value_nodes.push_back(inner);
        site.match_nodes.push_back(cast);
      } else if (ctx_.options().promote) {
        NodeId outer = expr(*a);
        NodeId promoted = node("promoted argument", a->span);
        edge(outer, promoted, ctx_.promote());
        site.value_nodes.push_back(promoted);
        site.match_nodes.push_back(promoted);
      } else {
        NodeId n = expr(*a);
        site.value_nodes.push_back(n);
        site.match_nodes.push_back(n);
      }
    }
    site.signature = node("signature of " + name, at.span);
    site.result = node("result of " + name, at.span);
    for (int i = 0; i < arity; ++i) edge(site.match_nodes[i], site.signature, ctx_.call_arg(name, arity, i + 1));
    edge(site.result, site.signature, ctx_.call_ret(name, arity));
    NodeId result = site.result;
    g_.calls.push_back(std::move(site));
    return result;
  }

  NodeId expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var: {
        auto b = lookup(e.text);
        if (!b) fail(Stage::Typing, e.span, "use of undeclared identifier '" + e.text + "'");
        return b->node;
      }
      case Expr::Kind::IntLit:
        return node("literal " + e.text, e.span, builtin("int"));
      case Expr::Kind::CharLit:
        return node("literal " + e.text, e.span, builtin("char"));
      case Expr::Kind::StringLit:
        return node("literal " + e.text, e.span, *u_.pointer_to(builtin("char")));
      case Expr::Kind::Field: {
        NodeId base = expr(*e.operands[0]);
        NodeId r = node("." + e.text, e.span);
        edge(base, r, ctx_.field(e.text));
        return r;
      }
      case Expr::Kind::Arrow: {
        NodeId base = expr(*e.operands[0]);
        NodeId pointee = node("*", e.span);
        edge(base, pointee, ctx_.deref());
        NodeId r = node("->" + e.text, e.span);
        edge(pointee, r, ctx_.field(e.text));
        return r;
      }
      case Expr::Kind::Deref: {
        NodeId base = expr(*e.operands[0]);
        NodeId r = node("*", e.span);
        edge(base, r, ctx_.deref());
        return r;
      }
      case Expr::Kind::AddressOf: {
        NodeId base = expr(*e.operands[0]);
        NodeId r = node("&", e.span);
        edge(r, base, ctx_.deref());
        return r;
      }
      case Expr::Kind::Call: {
        std::vector<const Expr*> args;
        for (const auto& a : e.operands) args.push_back(a.get());
        if (e.text == "printf") {
          CallSite site;
          site.name = e.text;
          site.arity = static_cast<int>(args.size());
          site.builtin = true;
          site.expr = &e;
          site.span = e.span;
          for (const Expr* a : args) {
            NodeId n = expr(*a);
            site.value_nodes.push_back(n);
            site.match_nodes.push_back(n);
          }
          site.result = node("result of printf", e.span, builtin("int"));
          site.signature = site.result;
          NodeId r = site.result;
          g_.calls.push_back(std::move(site));
          return r;
        }
        return call(e.text, args, e, false);
      }
      case Expr::Kind::WeakenCast: {
        NodeId inner = expr(*e.operands[0]);
        NodeId cast = node("cast", e.span, u_.resolve(e.cast_type));
        edge(inner, cast, ctx_.subsumption());
        return cast;
      }
      case Expr::Kind::Assign: {
        NodeId lhs = expr(*e.operands[0]);
        NodeId rhs = expr(*e.operands[1]);
        bool exact = false;
        if (e.operands[0]->kind == Expr::Kind::Var) exact = lookup(e.operands[0]->text)->strengthenable;
        edge(rhs, lhs, exact ? ctx_.identity() : ctx_.subsumption());
        return lhs;
      }
      case Expr::Kind::CompoundAssign:
      case Expr::Kind::Binary:
      case Expr::Kind::Unary:
      case Expr::Kind::IncDec: {
        std::vector<const Expr*> args;
        for (const auto& a : e.operands) args.push_back(a.get());
        return call(e.text, args, e, true);
      }
      case Expr::Kind::Conditional: {
        condition(*e.operands[0]);
        NodeId r = node("?:", e.span);
        NodeId a = expr(*e.operands[1]);
        NodeId b = expr(*e.operands[2]);
        edge(a, r, ctx_.identity());
        edge(b, r, ctx_.identity());
        return r;
      }
    }
    internal_error(Stage::Typing, e.span, "unhandled expression");
  }

  const FunctionDecl& fn_;
  GraphContext& ctx_;
  const TypeUniverse& u_;
  FunctionGraph g_;
  std::optional<NodeId> ret_;
  std::vector<std::map<std::string, Binding>> scopes_;
};

}  // namespace

FunctionGraph build_syntax_graph(const FunctionDecl& fn, GraphContext& ctx, const std::vector<TypeId>* actuals) {
  return GraphBuilder(fn, ctx).build(actuals);
}

}  // namespace moot
