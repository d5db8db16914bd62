#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "moot/ast.hpp"

namespace moot {

// Tokenizes one file. `//` and `/* */` comments are skipped.
std::vector<Token> lex(std::string_view text, const std::string& file);

// Parses one translation unit. Throws CompileError (Stage::Parse) on malformed input.
SurfaceProgram parse(std::string text, std::string file = "<input>");

// Concatenates several parsed files into one program, keeping per-declaration file spans.
SurfaceProgram merge(std::vector<SurfaceProgram> parts);

// Renders a type the way a declaration would spell it, e.g. "char *" + name.
std::string spell_type(const TypeRef& type);

// Pretty-prints declarations; function bodies are reproduced from their source text.
std::string print_program(const SurfaceProgram& program);

bool is_builtin_type_name(std::string_view name);

}  // namespace moot
