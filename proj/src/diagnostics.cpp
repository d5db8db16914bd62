#include "moot/diagnostics.hpp"

namespace moot {

std::string Span::str() const {
  std::string out = file.empty() ? std::string("<input>") : file;
  out += ':' + std::to_string(line) + ':' + std::to_string(column);
  return out;
}

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::Parse: return "parse";
    case Stage::Expand: return "expand";
    case Stage::Universe: return "universe";
    case Stage::Hierarchy: return "hierarchy";
    case Stage::Check: return "check";
    case Stage::Typing: return "typing";
    case Stage::Emit: return "emit";
    case Stage::Driver: return "driver";
  }
  return "?";
}

const char* to_string(Severity severity) {
  switch (severity) {
    case Severity::Note: return "note";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
    case Severity::Internal: return "internal";
  }
  return "?";
}

std::string Diagnostic::render() const {
  std::string out = span.line > 0 ? span.str() : span.file.empty() ? std::string("mootc") : span.file;
  out += ": ";
  if (severity == Severity::Warning) out += "warning: ";
  if (severity == Severity::Note) out += "note: ";
  if (severity == Severity::Internal) out += "internal error: ";
  // Multi-line bodies start on their own line so the block stays verbatim.
  if (message.find('\n') != std::string::npos) out += '\n';
  out += message;
  return out;
}

void fail(Stage stage, const Span& span, std::string message) {
  throw CompileError(Diagnostic{stage, Severity::Error, span, std::move(message)});
}

void internal_error(Stage stage, const Span& span, std::string message) {
  throw CompileError(Diagnostic{stage, Severity::Internal, span, std::move(message)});
}

std::vector<Diagnostic> CompileError::all() const {
  std::vector<Diagnostic> out{diagnostic_};
  out.insert(out.end(), notes_.begin(), notes_.end());
  return out;
}

}  // namespace moot
