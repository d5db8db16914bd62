#include <fstream>

#include <gtest/gtest.h>

#include <json.hpp>
#include "support/fixtures.hpp"

namespace {

std::string write_scratch(const std::string& name, const std::string& text) {
  std::string path = fixture::scratch_path(name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, CompilesRunningExample) {
  std::string out = fixture::scratch_path("cli_running_example.c");
  auto r = fixture::run_mootc(fixture::data_path("running_example.moot") + " -o " + out);
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(fixture::read_file(out).find("DATA_DirIval_int"), std::string::npos);
}

TEST(Cli, DumpHierarchy) {
  std::string dot = fixture::scratch_path("cli_hierarchy.dot");
  auto r = fixture::run_mootc(fixture::data_path("running_example.moot") + " -o " +
                              fixture::scratch_path("cli_dump.c") + " --dump-hierarchy " + dot);
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(fixture::read_file(dot).rfind("digraph hierarchy {", 0), 0u);
}

TEST(Cli, TypeErrorExitsOne) {
  auto r = fixture::run_mootc(fixture::data_path("broken_data.moot") + " -o " + fixture::scratch_path("cli_broken.c"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("type error after call sequence"), std::string::npos);
}

TEST(Cli, ParseErrorExitsTwo) {
  std::string src = write_scratch("cli_parse.moot", "int main( {\n");
  auto r = fixture::run_mootc(src + " -o " + fixture::scratch_path("cli_parse.c"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("cli_parse.moot:1:"), std::string::npos) << r.output;
}

TEST(Cli, EmptyInputHasNoEntry) {
  std::string src = write_scratch("cli_empty.moot", "");
  auto r = fixture::run_mootc(src + " -o " + fixture::scratch_path("cli_empty.c"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("no entry function 'main'"), std::string::npos) << r.output;
}

TEST(Cli, MissingOutputIsUsageError) {
  auto r = fixture::run_mootc(fixture::data_path("running_example.moot"));
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, JsonDiagnostics) {
  std::string src = write_scratch("cli_json.moot", "int main( int argc, char** argv ) { return y; }\n");
  auto r = fixture::run_mootc(src + " -o " + fixture::scratch_path("cli_json.c") + " --json-diagnostics");
  EXPECT_EQ(r.exit_code, 1);
  auto line = r.output.substr(0, r.output.find('\n'));
  auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["severity"], "error");
  EXPECT_EQ(j["span"]["line"], 1);
  EXPECT_EQ(j["message"], "use of undeclared identifier 'y'");
}

TEST(Cli, Version) {
  auto r = fixture::run_mootc("--version");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("0.1.0"), std::string::npos);
}

TEST(Cli, EmittedProgramRuns) {
  std::string out = fixture::scratch_path("cli_intersect.c");
  auto r = fixture::run_mootc(fixture::data_path("intersect_1234.moot") + " -o " + out);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  auto run = fixture::compile_and_run(out, fixture::scratch_path("cli_intersect"));
  EXPECT_EQ(run.exit_code, 0) << run.output;
  EXPECT_EQ(fixture::trim_lines(run.output), "4 9\n");
}
