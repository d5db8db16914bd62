#include "moot/driver.hpp"

#include <fstream>
#include <sstream>

#include "moot/monomorphizer.hpp"
#include "moot/parser.hpp"

namespace moot {

const char* const kToolVersion = "0.1.0";

int exit_code_for(const std::vector<Diagnostic>& diagnostics) {
  int code = 0;
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Internal) code = std::max(code, 3);
    if (d.severity == Severity::Error) code = std::max(code, d.stage == Stage::Parse ? 2 : 1);
  }
  return code;
}

namespace {

bool has_error(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity >= Severity::Error; });
}

void run(const std::vector<SourceText>& sources, const DriverConfig& config, CompileResult& result) {
  if (config.depth < 1) fail(Stage::Driver, {}, "comparison depth must be at least 1");
  std::vector<SurfaceProgram> parts;
  for (const auto& s : sources) parts.push_back(parse(s.text, s.name));
  SurfaceProgram surface = merge(std::move(parts));

  ExpandedProgram expanded = expand_param_typedefs(surface);
  UniverseOptions uo;
  uo.comparison_depth = config.depth;
  TypeUniverse u = build_universe(expanded.program, uo);
  Hierarchy h = infer_hierarchy(u, {config.depth, false});
  result.hierarchy_dot = hierarchy_dot(u, h.order);

  auto warnings = incomparable_definition_warnings(u, h.order);
  result.diagnostics.insert(result.diagnostics.end(), warnings.begin(), warnings.end());
  std::vector<Diagnostic> checks = check_parameter_bounds(expanded, u, h);
  auto directives = check_directives(expanded.program, u, h);
  checks.insert(checks.end(), directives.begin(), directives.end());
  std::stable_sort(checks.begin(), checks.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.file, a.span.line, a.span.column) < std::tie(b.span.file, b.span.line, b.span.column);
  });
  result.diagnostics.insert(result.diagnostics.end(), checks.begin(), checks.end());
  if (has_error(checks)) return;

  GraphContext ctx(u, h.order, {config.promote});
  std::ostringstream trace;
  MonomorphizeOptions mo;
  mo.entry = config.entry;
  if (config.trace) mo.trace = &trace;
  InstantiationTree tree;
  try {
    tree = monomorphize(expanded.program, u, ctx, mo);
  } catch (...) {
    result.trace = trace.str();
    throw;
  }
  result.trace = trace.str();

  EmitOptions eo;
  eo.tool_version = kToolVersion;
  for (const auto& s : sources) eo.sources.push_back(s.name);
  result.c_code = emit_c(expanded.program, u, tree, eo);
}

}  // namespace

CompileResult compile_sources(const std::vector<SourceText>& sources, const DriverConfig& config) {
  CompileResult result;
  try {
    run(sources, config, result);
  } catch (const CompileError& e) {
    auto all = e.all();
    result.diagnostics.insert(result.diagnostics.end(), all.begin(), all.end());
  } catch (const std::exception& e) {
    result.diagnostics.push_back({Stage::Driver, Severity::Internal, {}, e.what()});
  }
  result.exit_code = exit_code_for(result.diagnostics);
  if (result.exit_code != 0) result.c_code.clear();
  return result;
}

CompileResult compile(const DriverConfig& config) {
  std::vector<SourceText> sources;
  for (const auto& path : config.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      CompileResult r;
      r.diagnostics.push_back({Stage::Driver, Severity::Error, {path, 0, 0}, "cannot read input file"});
      r.exit_code = 1;
      return r;
    }
    std::ostringstream text;
    text << in.rdbuf();
    sources.push_back({path, text.str()});
  }
  CompileResult result = compile_sources(sources, config);
  auto write = [&](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
      result.diagnostics.push_back({Stage::Driver, Severity::Error, {path, 0, 0}, "cannot write output file"});
      result.exit_code = std::max(result.exit_code, 1);
    }
  };
  if (config.dump_hierarchy && !result.hierarchy_dot.empty()) write(*config.dump_hierarchy, result.hierarchy_dot);
  if (result.exit_code == 0 && !config.output.empty()) write(config.output, result.c_code);
  return result;
}

}  // namespace moot
