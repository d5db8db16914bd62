#pragma once

#include <memory>
#include <string>
#include <vector>

#include "moot/frontend.hpp"
#include "moot/monomorphizer.hpp"

namespace fixture {

std::string read_file(const std::string& path);
std::string data_path(const std::string& name);    // tests/data/<name>
std::string golden_path(const std::string& name);  // tests/golden/<name>
std::string scratch_path(const std::string& name);  // inside the build tree

// Collapses every whitespace run to one space and trims both ends.
std::string normalize_ws(const std::string& text);

// Trailing blanks removed from every line.
std::string trim_lines(const std::string& text);

// Parse, expand, build the universe and infer the hierarchy.
struct Analysis {
  moot::ExpandedProgram expanded;
  moot::TypeUniverse universe;
  moot::Hierarchy hierarchy;

  moot::TypeId type(const std::string& name) const;
  // A function type by its display name, e.g. "int(*)(Ival+, int)".
  moot::TypeId signature(const std::string& name) const;
};

std::unique_ptr<Analysis> analyze_text(const std::string& text, const std::string& file = "<test>");
std::unique_ptr<Analysis> analyze_file(const std::string& name);

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CommandResult run_command(const std::string& command);

// Runs the mootc binary with the given arguments.
CommandResult run_mootc(const std::string& args);

// Compiles C emitted by mootc with the host C++ compiler and runs it.
CommandResult compile_and_run(const std::string& c_file, const std::string& exe);

// The function definition whose name is `name`, from its header line to the closing brace.
std::string extract_function(const std::string& code, const std::string& name);

}  // namespace fixture
