#include <gtest/gtest.h>

#include "moot/parser.hpp"

using namespace moot;

namespace {

template <class T>
const T& decl(const SurfaceProgram& p, std::size_t i) {
  return std::get<T>(p.declarations.at(i));
}

}  // namespace

TEST(Lexer, SkipsCommentsAndTracksPositions) {
  auto toks = lex("int x; // trailing\n/* block\n */ Ival+ *p;", "f.moot");
  std::vector<std::string> text;
  for (const auto& t : toks) text.push_back(t.text);
  std::vector<std::string> expected{"int", "x", ";", "Ival", "+", "*", "p", ";", ""};
  EXPECT_EQ(text, expected);
  EXPECT_EQ(toks[3].line, 3);
  EXPECT_EQ(toks[3].column, 5);
  EXPECT_EQ(toks.back().kind, TokenKind::End);
}

TEST(Lexer, MultiCharacterOperators) {
  auto toks = lex("a->b += c++ <= d && e != f", "f");
  std::vector<std::string> punct;
  for (const auto& t : toks)
    if (t.kind == TokenKind::Punct) punct.push_back(t.text);
  EXPECT_EQ(punct, (std::vector<std::string>{"->", "+=", "++", "<=", "&&", "!="}));
}

TEST(Lexer, Literals) {
  auto toks = lex(R"(42 'a' "x\n")", "f");
  EXPECT_EQ(toks[0].kind, TokenKind::IntLiteral);
  EXPECT_EQ(toks[1].kind, TokenKind::CharLiteral);
  EXPECT_EQ(toks[2].kind, TokenKind::StringLiteral);
}

TEST(Parser, TopLevelDeclarations) {
  auto p = parse(R"(
protocoltype Iterable;
protocoltype Iterator;
parametertype Elem : Iterable, Iterator;
struct _Node { Elem data; struct _Node *next; };
typedef struct _Node Node;
typedef Node<int Elem> IntNode;
void FIRST( Iterable c, Iterator &e );
int main( int argc, char** argv ) { return 0; }
<check int subsumed by any>
<distinct Node, IntNode>
)",
                 "t.moot");
  ASSERT_EQ(p.declarations.size(), 10u);
  EXPECT_EQ(decl<ProtocolTypeDecl>(p, 0).name, "Iterable");
  EXPECT_EQ(decl<ParameterTypeDecl>(p, 2).bounds, (std::vector<std::string>{"Iterable", "Iterator"}));
  const auto& node = decl<StructDecl>(p, 3);
  EXPECT_EQ(node.tag, "_Node");
  ASSERT_EQ(node.fields.size(), 2u);
  EXPECT_TRUE(node.fields[1].type.struct_tag);
  EXPECT_EQ(node.fields[1].type.pointer_depth, 1);
  EXPECT_EQ(decl<TypedefDecl>(p, 4).name, "Node");
  const auto& inst = decl<ParamTypedefDecl>(p, 5);
  EXPECT_EQ(inst.generic, "Node");
  ASSERT_EQ(inst.substitutions.size(), 1u);
  EXPECT_EQ(inst.substitutions[0].concrete, "int");
  EXPECT_EQ(inst.substitutions[0].parameter, "Elem");
  const auto& first = decl<FunctionDecl>(p, 6);
  EXPECT_FALSE(first.body);
  EXPECT_TRUE(first.params[1].type.reference);
  const auto& main_fn = decl<FunctionDecl>(p, 7);
  EXPECT_TRUE(main_fn.body);
  EXPECT_EQ(main_fn.params[1].type.pointer_depth, 2);
  EXPECT_EQ(decl<CheckDirective>(p, 8).weak.base, "any");
  EXPECT_EQ(decl<DistinctDirective>(p, 9).types.size(), 2u);
}

TEST(Parser, StrengthenableQualifier) {
  auto p = parse("void print( char+ *s ) { }", "t");
  const auto& fn = decl<FunctionDecl>(p, 0);
  EXPECT_TRUE(fn.params[0].type.strengthenable);
  EXPECT_EQ(fn.params[0].type.base, "char");
  EXPECT_EQ(fn.params[0].type.pointer_depth, 1);
}

TEST(Parser, WeakeningCast) {
  auto p = parse("protocoltype Iterable;\nint main( int a, char** b ) { print( [^Iterable]3 ); return 0; }", "t");
  const auto& body = *decl<FunctionDecl>(p, 1).body;
  const Expr& call = *body.block[0]->expr;
  ASSERT_EQ(call.kind, Expr::Kind::Call);
  const Expr& cast = *call.operands[0];
  EXPECT_EQ(cast.kind, Expr::Kind::WeakenCast);
  EXPECT_EQ(cast.cast_type.base, "Iterable");
}

TEST(Parser, ReportsLocationOfSyntaxError) {
  try {
    parse("int main( int a ) {\n  return 0\n}", "bad.moot");
    FAIL() << "expected a parse error";
  } catch (const CompileError& e) {
    EXPECT_EQ(e.diagnostic().stage, Stage::Parse);
    EXPECT_EQ(e.diagnostic().span.file, "bad.moot");
    EXPECT_EQ(e.diagnostic().span.line, 3);
  }
}

TEST(Parser, MergeKeepsFileSpans) {
  auto merged = merge({parse("protocoltype A;", "a.moot"), parse("protocoltype B;", "b.moot")});
  ASSERT_EQ(merged.declarations.size(), 2u);
  EXPECT_EQ(span_of(merged.declarations[1]).file, "b.moot");
  EXPECT_EQ(merged.sources.size(), 2u);
}

TEST(Parser, SpellType) {
  TypeRef t;
  t.base = "char";
  t.pointer_depth = 2;
  EXPECT_EQ(spell_type(t), "char **");
}
