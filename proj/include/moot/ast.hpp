#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "moot/diagnostics.hpp"

namespace moot {

enum class TokenKind {
  Identifier,
  Keyword,
  IntLiteral,
  CharLiteral,
  StringLiteral,
  Punct,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t offset = 0;  // byte offset into the source text
  int line = 1;
  int column = 1;
};

struct SourceFile {
  std::string name;
  std::string text;
  std::vector<Token> tokens;
};

// Half-open token index range within one source file. The file is owned by
// SurfaceProgram::sources.
struct TokenRange {
  const SourceFile* file = nullptr;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool valid() const { return file != nullptr && begin < end; }
};

// A type as written: base name, `+` qualifier, declarator stars and `&`.
struct TypeRef {
  std::string base;
  bool struct_tag = false;
  bool strengthenable = false;
  int pointer_depth = 0;
  bool reference = false;
  TokenRange spec;  // base name tokens plus the `+`
  Span span;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind {
    Var,
    IntLit,
    CharLit,
    StringLit,
    Field,      // a.f
    Arrow,      // a->f
    Deref,      // *a
    AddressOf,  // &a
    Call,
    WeakenCast,  // [^T]a
    Assign,
    CompoundAssign,  // +=, -=
    Binary,
    Unary,  // !, -
    IncDec,  // ++/-- prefix or postfix
    Conditional,
  };

  Kind kind = Kind::Var;
  std::string text;  // identifier, literal spelling, operator, field or callee name
  bool postfix = false;
  TypeRef cast_type;
  std::vector<ExprPtr> operands;
  Span span;
  const SourceFile* file = nullptr;
  std::size_t token = 0;  // callee / identifier token
  std::size_t cast_end = 0;  // token after `]` of a weakening cast
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Declarator {
  std::string name;
  int extra_pointer_depth = 0;
  bool reference = false;
  ExprPtr init;
  Span span;
};

struct Stmt {
  enum class Kind { Decl, ExprStmt, If, While, For, Return, Block, Empty };

  Kind kind = Kind::Empty;
  TypeRef decl_type;
  std::vector<Declarator> declarators;
  ExprPtr expr;  // ExprStmt / Return value / If-While-For condition
  StmtPtr for_init;
  ExprPtr for_step;
  StmtPtr then_branch;  // also loop body
  StmtPtr else_branch;
  std::vector<StmtPtr> block;
  Span span;
};

struct ProtocolTypeDecl {
  std::string name;
  Span span;
};

struct ParameterTypeDecl {
  std::string name;
  std::vector<std::string> bounds;
  Span span;
};

struct FieldDecl {
  TypeRef type;
  std::string name;
  Span span;
};

struct StructDecl {
  std::string tag;
  std::vector<FieldDecl> fields;
  Span span;
};

struct TypedefDecl {
  TypeRef target;
  std::string name;
  Span span;
};

struct Substitution {
  std::string concrete;
  std::string parameter;
};

struct ParamTypedefDecl {
  std::string generic;
  std::vector<Substitution> substitutions;
  std::string name;
  Span span;
};

struct ParamDecl {
  TypeRef type;
  std::string name;
  Span span;
};

struct FunctionDecl {
  TypeRef ret;
  std::string name;
  std::vector<ParamDecl> params;
  std::shared_ptr<const Stmt> body;  // null for a prototype
  Span span;
  TokenRange tokens;  // whole declaration, for text-preserving emission
  std::size_t name_token = 0;
};

struct CheckDirective {
  TypeRef strong;
  TypeRef weak;
  Span span;
};

struct DistinctDirective {
  std::vector<TypeRef> types;
  Span span;
};

using Declaration = std::variant<ProtocolTypeDecl, ParameterTypeDecl, StructDecl, TypedefDecl,
                                 ParamTypedefDecl, FunctionDecl, CheckDirective, DistinctDirective>;

struct SurfaceProgram {
  std::vector<std::shared_ptr<const SourceFile>> sources;
  std::vector<Declaration> declarations;
};

const Span& span_of(const Declaration& decl);

}  // namespace moot
