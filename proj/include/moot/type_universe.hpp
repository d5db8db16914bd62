#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "moot/ast.hpp"

namespace moot {

// Dense index into a TypeUniverse.
struct TypeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const TypeId&) const = default;
  constexpr std::size_t index() const { return value; }
};

constexpr TypeId make_type_id(std::size_t index) { return TypeId{static_cast<std::uint32_t>(index)}; }

enum class TypeKind { Any, Builtin, Protocol, Parameter, Struct, Pointer, Function };

struct FunctionArg {
  TypeId type;
  bool strengthenable = false;

  auto operator<=>(const FunctionArg&) const = default;
};

struct TypeDesc {
  TypeKind kind = TypeKind::Builtin;
  std::string name;        // display: "Ival", "char*", "int(*)(Ival+, int)"
  std::string c_spelling;  // "Ival", "struct _Node", "char*"
  std::string mangled;     // "Ival", "charp"

  std::vector<TypeId> bounds;                            // Parameter
  std::string struct_tag;                                // Struct
  std::vector<std::pair<std::string, TypeId>> fields;    // Struct, declaration order
  TypeId pointee;                                        // Pointer
  std::vector<FunctionArg> args;                         // Function
  TypeId ret;                                            // Function
  bool ret_strengthenable = false;                       // Function
  bool declared_signature = false;  // false for strengthening variants

  std::optional<TypeId> field(std::string_view field_name) const;
};

struct RelationLabel {
  enum class Tag { FieldSelect, ArgSignature, PointerDeref, Arg, Ret, Promote };

  Tag tag = Tag::FieldSelect;
  std::string name;  // field or operation name
  int index = 0;     // i in arg_{i/j}
  int arity = 0;     // j

  auto operator<=>(const RelationLabel&) const = default;

  static RelationLabel field_select(std::string field) { return {Tag::FieldSelect, std::move(field), 0, 0}; }
  static RelationLabel arg_signature(std::string op, int i, int j);
  static RelationLabel pointer_deref() { return {Tag::PointerDeref, {}, 0, 0}; }
  static RelationLabel arg(int i, int j);
  static RelationLabel ret(int j) { return {Tag::Ret, {}, 0, j}; }
  static RelationLabel promote() { return {Tag::Promote, {}, 0, 0}; }

  std::string str() const;
};

struct RelationEdge {
  TypeId to;
  bool strengthenable = false;
};

// R_sigma with its strengthenable subset, indexed by first coordinate.
class TypeRelation {
 public:
  TypeRelation() = default;
  TypeRelation(RelationLabel label, std::size_t type_count);

  const RelationLabel& label() const { return label_; }

  void add(TypeId from, TypeId to, bool strengthenable);
  bool contains(TypeId from, TypeId to) const;
  bool strengthenable(TypeId from, TypeId to) const;
  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }

  std::span<const RelationEdge> successors(TypeId from) const;
  // All pairs in (from, to) order.
  std::vector<std::pair<TypeId, TypeId>> pairs() const;
  std::vector<std::pair<TypeId, TypeId>> strengthenable_pairs() const;

 private:
  RelationLabel label_;
  std::vector<std::vector<RelationEdge>> successors_;
  std::size_t size_ = 0;
};

// One definition or prototype of a named function (or builtin operator).
struct Overload {
  std::string name;
  TypeId signature;
  std::optional<std::size_t> declaration;  // index into SurfaceProgram::declarations
  bool builtin = false;
  Span span;

  bool has_body = false;
};

struct UniverseOptions {
  int comparison_depth = 3;
  bool saturate_strengthenings = true;
};

class TypeUniverse {
 public:
  std::size_t size() const { return types_.size(); }
  const TypeDesc& desc(TypeId id) const { return types_[id.index()]; }
  const std::string& name(TypeId id) const { return desc(id).name; }
  TypeId any() const { return TypeId{0}; }
  std::vector<TypeId> all() const;

  std::optional<TypeId> lookup(std::string_view name) const;
  std::optional<TypeId> pointer_to(TypeId pointee) const;
  std::optional<TypeId> find_function(const std::vector<FunctionArg>& args, TypeId ret,
                                      bool ret_strengthenable) const;

  // Resolves a written type (including stars). Throws CompileError on unknown names.
  TypeId resolve(const TypeRef& ref) const;
  std::optional<TypeId> try_resolve(const TypeRef& ref) const;

  const std::vector<TypeRelation>& relations() const { return relations_; }
  // Returns the relation, or an empty one when nothing was recorded under `label`.
  const TypeRelation& relation(const RelationLabel& label) const;
  std::optional<std::size_t> relation_index(const RelationLabel& label) const;
  // Indices of relations in which `t` has at least one outgoing pair, in creation order.
  const std::vector<std::size_t>& labels_from(TypeId t) const { return labels_from_[t.index()]; }

  const std::vector<Overload>& overloads(const std::string& name, int arity) const;
  bool is_protocol_operation(const std::string& name) const { return protocol_ops_.count(name) > 0; }
  std::vector<std::pair<std::string, int>> function_families() const;

  const std::vector<std::pair<TypeId, TypeId>>& distinct_pairs() const { return distinct_; }
  const UniverseOptions& options() const { return options_; }

 private:
  friend class UniverseBuilder;

  std::vector<TypeDesc> types_;
  std::map<std::string, TypeId, std::less<>> names_;
  std::map<TypeId, TypeId> pointers_;
  std::map<std::tuple<std::vector<FunctionArg>, TypeId, bool>, TypeId> functions_;
  std::vector<TypeRelation> relations_;
  std::map<RelationLabel, std::size_t> relation_index_;
  std::vector<std::vector<std::size_t>> labels_from_;
  std::map<std::pair<std::string, int>, std::vector<Overload>> overloads_;
  std::map<std::string, bool, std::less<>> protocol_ops_;
  std::vector<std::pair<TypeId, TypeId>> distinct_;
  UniverseOptions options_;
};

TypeUniverse build_universe(const SurfaceProgram& program, const UniverseOptions& options = {});

// Bounded-depth syntactic comparison: can `strong` possibly be subsumed by `weak`?
// Struct field names, pointer structure, function arity and `+` positions are compared;
// everything deeper than `depth` is assumed compatible.
bool syntactically_subsumed(const TypeUniverse& u, TypeId strong, TypeId weak, int depth);

// Renders a function signature for diagnostics, e.g. "void print( DirIval, char* )".
std::string render_call_signature(const TypeUniverse& u, const std::string& name,
                                  const std::vector<TypeId>& args, TypeId ret);

}  // namespace moot

template <>
struct std::hash<moot::TypeId> {
  std::size_t operator()(moot::TypeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
