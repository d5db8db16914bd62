#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moot/ast.hpp"
#include "moot/hierarchy.hpp"
#include "moot/typeflow.hpp"
#include "moot/type_universe.hpp"

namespace moot {

// ---- parameterized typedef expansion ----

// "C must be subsumed by P", recorded for every substitution of a parametertype.
struct BoundObligation {
  std::string concrete;
  std::string parameter;
  std::string instance;  // the typedef that requested it
  Span span;
};

struct ExpandedProgram {
  SurfaceProgram program;
  std::vector<BoundObligation> obligations;
};

ExpandedProgram expand_param_typedefs(const SurfaceProgram& program);

// ---- checks against the inferred hierarchy ----

std::vector<Diagnostic> check_parameter_bounds(const ExpandedProgram& expanded, const TypeUniverse& u,
                                               const Hierarchy& h);

// Evaluates every <check A subsumed by B> directive.
std::vector<Diagnostic> check_directives(const SurfaceProgram& program, const TypeUniverse& u, const Hierarchy& h);

// ---- call matching ----

struct CallRelations {
  std::vector<MatchRelation> args;  // positions 1..j
  MatchRelation ret;
};

// M_i = R_i ∪ (⪯ ; R†_i) over the declared signatures of op/j, filtered to
// pointwise-strongest calls; M_ret pairs declared (or strengthened) return types.
CallRelations derive_call_relations(const TypeUniverse& u, const SubsumptionOrder& order, const std::string& op,
                                    int arity);

// Incomparable signatures of one name and arity that come from different source files.
std::vector<Diagnostic> incomparable_definition_warnings(const TypeUniverse& u, const SubsumptionOrder& order);

// Adds (a', b') for every a' equivalent to a and b' equivalent to b.
void saturate_equivalents(MatchRelation& m, const SubsumptionOrder& order);

// ---- syntax graphs ----

struct GraphOptions {
  bool promote = false;
};

// Match relations shared by all function graphs of one compilation.
class GraphContext {
 public:
  GraphContext(const TypeUniverse& u, const SubsumptionOrder& order, GraphOptions options = {});

  const TypeUniverse& universe() const { return u_; }
  const SubsumptionOrder& order() const { return order_; }
  const MatchTable& table() const { return table_; }
  const GraphOptions& options() const { return options_; }

  MatchLabel call_arg(const std::string& op, int arity, int i);
  MatchLabel call_ret(const std::string& op, int arity);
  MatchLabel field(const std::string& name);
  MatchLabel deref();
  MatchLabel subsumption();  // {(t, u) | t ⪯ u}
  MatchLabel identity();     // {(t, u) | t ≡ u}
  MatchLabel promote();

 private:
  MatchLabel cached(const std::string& key, const std::function<MatchRelation()>& make);
  void derive(const std::string& op, int arity);

  const TypeUniverse& u_;
  const SubsumptionOrder& order_;
  GraphOptions options_;
  MatchTable table_;
  std::map<std::string, MatchLabel> labels_;
};

struct CallSite {
  std::string name;
  int arity = 0;
  bool builtin = false;  // operator or printf: nothing to instantiate
  NodeId signature = 0;
  NodeId result = 0;
  std::vector<NodeId> match_nodes;  // nodes the call relation sees (casts, promotions)
  std::vector<NodeId> value_nodes;  // nodes carrying the actual argument types
  const Expr* expr = nullptr;
  Span span;
};

struct DeclSite {
  std::string name;
  TypeRef type;  // as written, pointer depth including declarator stars
  NodeId node = 0;
  bool parameter = false;
  const Stmt* stmt = nullptr;  // null for parameters
  std::size_t declarator = 0;  // index within stmt, or parameter index
  Span span;
};

struct FunctionGraph {
  const FunctionDecl* function = nullptr;
  SyntaxGraph graph;
  Typing initial;
  std::vector<std::optional<TypeId>> seeds;  // seed type as written, before mapping to representatives
  std::vector<NodeId> params;
  std::optional<NodeId> ret;
  std::vector<CallSite> calls;
  std::vector<DeclSite> decls;
};

// One graph per function body; parameter nodes are seeded with `actuals` when given,
// otherwise with their declared types.
FunctionGraph build_syntax_graph(const FunctionDecl& fn, GraphContext& ctx,
                                 const std::vector<TypeId>* actuals = nullptr);

}  // namespace moot
