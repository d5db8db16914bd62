#include <gtest/gtest.h>

#include "moot/driver.hpp"
#include "moot/monomorphizer.hpp"
#include "support/fixtures.hpp"

using namespace moot;

namespace {

CompileResult compile_text(const std::string& text, DriverConfig config = {}) {
  config.output = "out.c";
  return compile_sources({{"t.moot", text}}, config);
}

std::string all_messages(const CompileResult& r) {
  std::string out;
  for (const auto& d : r.diagnostics) out += d.render() + "\n";
  return out;
}

const char* kPrintInt = R"(
void print( int+ i ) { printf( "%d", i ); }
void print( char+ c ) { printf( "%c", c ); }
)";

}  // namespace

TEST(Mangle, ArgumentNamesAppended) {
  auto a = fixture::analyze_file("running_example.moot");
  EXPECT_EQ(mangle(a->universe, "FIRST", {a->type("DirIval"), a->type("int")}), "FIRST_DirIval_int");
  TypeId charp = *a->universe.pointer_to(a->type("char"));
  EXPECT_EQ(mangle(a->universe, "print", {charp}), "print_charp");
}

TEST(Mangle, ConcreteTypes) {
  auto a = fixture::analyze_file("running_example.moot");
  EXPECT_TRUE(is_concrete_type(a->universe, a->type("Ival")));
  EXPECT_TRUE(is_concrete_type(a->universe, a->type("int")));
  EXPECT_FALSE(is_concrete_type(a->universe, a->type("Iterable")));
  EXPECT_FALSE(is_concrete_type(a->universe, a->universe.any()));
}

TEST(Emit, RunningExampleIsPlainC) {
  DriverConfig config;
  auto r = compile_sources({{"running_example.moot", fixture::read_file(fixture::data_path("running_example.moot"))}},
                           config);
  ASSERT_EQ(r.exit_code, 0) << all_messages(r);
  EXPECT_EQ(r.c_code.find("protocoltype"), std::string::npos);
  EXPECT_EQ(r.c_code.find("+ "), std::string::npos);
  EXPECT_EQ(r.c_code.find("Iterable"), std::string::npos);
  EXPECT_EQ(r.c_code.rfind("/* generated by mootc ", 0), 0u);
  EXPECT_NE(r.c_code.find("int main( int argc, char** argv )"), std::string::npos);
  EXPECT_NE(r.c_code.find("void print_Ival_charp( Ival a, char* b )"), std::string::npos) << r.c_code;
}

TEST(Emit, Deterministic) {
  std::string src = fixture::read_file(fixture::data_path("running_example.moot"));
  auto first = compile_sources({{"r.moot", src}}, {});
  auto second = compile_sources({{"r.moot", src}}, {});
  ASSERT_EQ(first.exit_code, 0);
  EXPECT_EQ(first.c_code, second.c_code);
}

TEST(Emit, OnlyReachableInstancesEmitted) {
  auto r = compile_text(std::string(kPrintInt) + "int main( int argc, char** argv ) { print( argc ); return 0; }");
  ASSERT_EQ(r.exit_code, 0) << all_messages(r);
  EXPECT_NE(r.c_code.find("print_int("), std::string::npos);
  EXPECT_EQ(r.c_code.find("print_char("), std::string::npos);
}

TEST(Emit, EmptyTreeKeepsDeclarations) {
  auto a = fixture::analyze_text("struct _P { int x; }; typedef struct _P P;");
  InstantiationTree empty;
  std::string code = emit_c(a->expanded.program, a->universe, empty, {"0.1.0", {"t.moot"}});
  EXPECT_NE(code.find("struct _P"), std::string::npos);
  EXPECT_NE(code.find("typedef struct _P P;"), std::string::npos);
}

TEST(Emit, CastRemovedAndCollisionSuffixed) {
  auto r = compile_sources({{"weaken_cast.moot", fixture::read_file(fixture::data_path("weaken_cast.moot"))}}, {});
  ASSERT_EQ(r.exit_code, 0) << all_messages(r);
  EXPECT_EQ(r.c_code.find("[^"), std::string::npos);
  EXPECT_NE(r.c_code.find("print_int__2"), std::string::npos);
}

TEST(Monomorphize, RecursionSharesOneInstance) {
  auto r = compile_text(R"(
int fact( int+ n ) { if (n < 2) return 1; return n * fact( n - 1 ); }
int main( int argc, char** argv ) { printf( "%d\n", fact( argc ) ); return 0; }
)");
  ASSERT_EQ(r.exit_code, 0) << all_messages(r);
  EXPECT_NE(r.c_code.find("return n * fact_int( n - 1 );"), std::string::npos) << r.c_code;
}

TEST(Monomorphize, MissingEntry) {
  auto r = compile_text("void f( int x ) { }");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(all_messages(r).find("no entry function 'main'"), std::string::npos);
}

TEST(Monomorphize, AlternativeEntry) {
  DriverConfig config;
  config.entry = "start";
  auto r = compile_text(std::string(kPrintInt) + "int start( int n ) { print( n ); return 0; }", config);
  ASSERT_EQ(r.exit_code, 0) << all_messages(r);
  EXPECT_NE(r.c_code.find("int start( int n )"), std::string::npos);
}

TEST(Monomorphize, TypeErrorShowsCallSequence) {
  auto r = compile_sources({{"broken_data.moot", fixture::read_file(fixture::data_path("broken_data.moot"))}}, {});
  EXPECT_EQ(r.exit_code, 1);
  std::string msg = all_messages(r);
  EXPECT_NE(msg.find("type error after call sequence:\n1: int main(int, char**)"), std::string::npos) << msg;
}

TEST(Driver, ParseErrorExitCode) {
  auto r = compile_text("int main( {");
  EXPECT_EQ(r.exit_code, 2);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].stage, Stage::Parse);
}

TEST(Driver, PromoteWidensCharToInt) {
  std::string src = R"(
void show( int+ i ) { printf( "%d", i ); }
int main( int argc, char** argv ) { char c = 'a'; show( c ); return 0; }
)";
  EXPECT_EQ(compile_text(src).exit_code, 1);
  DriverConfig config;
  config.promote = true;
  auto r = compile_text(src, config);
  EXPECT_EQ(r.exit_code, 0) << all_messages(r);
  EXPECT_NE(r.c_code.find("show_int( c )"), std::string::npos) << r.c_code;
}

TEST(Driver, ExitCodeRanking) {
  Diagnostic warning{Stage::Check, Severity::Warning, {}, "w"};
  Diagnostic parse{Stage::Parse, Severity::Error, {}, "p"};
  Diagnostic internal{Stage::Emit, Severity::Internal, {}, "i"};
  EXPECT_EQ(exit_code_for({warning}), 0);
  EXPECT_EQ(exit_code_for({warning, parse}), 2);
  EXPECT_EQ(exit_code_for({parse, internal}), 3);
}
