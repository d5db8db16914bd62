#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "moot/driver.hpp"

int main(int argc, char** argv) {
  moot::DriverConfig config;
  bool json = false;
  std::string dump;

  CLI::App app{"mootc: compiles moot sources to C"};
  app.set_version_flag("--version", moot::kToolVersion);
  app.add_option("inputs", config.inputs, "source files (one translation unit)")->required()->check(CLI::ExistingFile);
  app.add_option("-o,--output", config.output, "C output file")->required();
  app.add_option("--dump-hierarchy", dump, "write the inferred subsumption order as DOT");
  app.add_flag("--trace", config.trace, "print every instantiation's typing to standard error");
  app.add_flag("--promote", config.promote, "allow char arguments where int is expected");
  app.add_option("--depth", config.depth, "syntactic comparison depth for the initial approximation")
      ->check(CLI::PositiveNumber);
  app.add_option("--entry", config.entry, "entry function");
  app.add_flag("--json-diagnostics", json, "one JSON object per diagnostic on standard error");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (!dump.empty()) config.dump_hierarchy = dump;

  moot::CompileResult result = moot::compile(config);
  if (config.trace) std::cerr << result.trace;
  for (const auto& d : result.diagnostics) {
    if (json) {
      nlohmann::json j = {{"stage", moot::to_string(d.stage)},
                          {"severity", moot::to_string(d.severity)},
                          {"span", {{"file", d.span.file}, {"line", d.span.line}, {"column", d.span.column}}},
                          {"message", d.message}};
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << d.render() << "\n";
    }
  }
  return result.exit_code;
}
