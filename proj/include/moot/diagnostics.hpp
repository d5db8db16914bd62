#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace moot {

struct Span {
  std::string file;
  int line = 0;
  int column = 0;

  std::string str() const;
};

enum class Stage { Parse, Expand, Universe, Hierarchy, Check, Typing, Emit, Driver };
enum class Severity { Note, Warning, Error, Internal };

const char* to_string(Stage stage);
const char* to_string(Severity severity);

struct Diagnostic {
  Stage stage = Stage::Driver;
  Severity severity = Severity::Error;
  Span span;
  std::string message;

  // "file:line:col: message", multi-line bodies kept verbatim.
  std::string render() const;
};

// Carries one diagnostic out of a stage that cannot continue.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(Diagnostic diagnostic, std::vector<Diagnostic> notes = {})
      : std::runtime_error(diagnostic.message), diagnostic_(std::move(diagnostic)), notes_(std::move(notes)) {}

  const Diagnostic& diagnostic() const { return diagnostic_; }
  // Follow-up notes, rendered after the main diagnostic.
  const std::vector<Diagnostic>& notes() const { return notes_; }
  // The main diagnostic followed by its notes.
  std::vector<Diagnostic> all() const;

 private:
  Diagnostic diagnostic_;
  std::vector<Diagnostic> notes_;
};

[[noreturn]] void fail(Stage stage, const Span& span, std::string message);
[[noreturn]] void internal_error(Stage stage, const Span& span, std::string message);

}  // namespace moot
