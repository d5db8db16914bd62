#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moot/diagnostics.hpp"

namespace moot {

struct DriverConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::optional<std::string> dump_hierarchy;
  bool trace = false;
  bool promote = false;
  int depth = 3;
  std::string entry = "main";
};

struct SourceText {
  std::string name;
  std::string text;
};

struct CompileResult {
  int exit_code = 0;
  std::vector<Diagnostic> diagnostics;
  std::string c_code;
  std::string hierarchy_dot;  // filled once the hierarchy is known
  std::string trace;
};

// 0 success, 1 type or check error, 2 parse error, 3 internal error.
int exit_code_for(const std::vector<Diagnostic>& diagnostics);

// The whole pipeline on in-memory sources; stops at the first stage that reports an error.
CompileResult compile_sources(const std::vector<SourceText>& sources, const DriverConfig& config);

// Reads config.inputs and writes config.output / config.dump_hierarchy.
CompileResult compile(const DriverConfig& config);

extern const char* const kToolVersion;

}  // namespace moot
