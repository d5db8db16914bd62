#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "moot/frontend.hpp"

namespace moot {

// A function body typed at one concrete argument list.
struct Instantiation {
  std::string name;
  std::size_t declaration = 0;  // index into the program's declarations
  TypeId signature;             // the overload's declared signature
  std::vector<TypeId> args;     // concrete argument types
  TypeId ret;                   // concrete return type
  std::string mangled;
  FunctionGraph graph;
  Typing typing;  // valid: every node a singleton

  std::vector<std::optional<std::size_t>> callees;  // per call site; empty for builtins
  std::vector<TypeId> decl_types;                    // per DeclSite
};

struct InstantiationEdge {
  std::size_t caller;
  std::size_t callee;
  Span span;
};

struct InstantiationTree {
  std::vector<Instantiation> nodes;  // in completion order: callees before callers
  std::vector<InstantiationEdge> edges;
  std::size_t entry = 0;

  const Instantiation* find(const std::string& mangled) const;
};

struct MonomorphizeOptions {
  std::string entry = "main";
  std::ostream* trace = nullptr;  // per-instantiation typing dump
};

// Types the entry function and, depth-first, every function it reaches.
// Type errors are reported with the chain of instantiations that led to them.
InstantiationTree monomorphize(const SurfaceProgram& program, const TypeUniverse& u, GraphContext& ctx,
                               const MonomorphizeOptions& options = {});

// False for any, protocol, parameter and function types (and pointers to them).
bool is_concrete_type(const TypeUniverse& u, TypeId t);

// "FIRST_DirIval_int"; the entry function keeps its name.
std::string mangle(const TypeUniverse& u, const std::string& name, const std::vector<TypeId>& args);

struct EmitOptions {
  std::string tool_version;
  std::vector<std::string> sources;
};

std::string emit_c(const SurfaceProgram& program, const TypeUniverse& u, const InstantiationTree& tree,
                   const EmitOptions& options = {});

}  // namespace moot
