#include "fixtures.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

#include "moot/parser.hpp"

namespace fixture {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data_path(const std::string& name) { return std::string(MOOT_TEST_DIR) + "/data/" + name; }
std::string golden_path(const std::string& name) { return std::string(MOOT_TEST_DIR) + "/golden/" + name; }
std::string scratch_path(const std::string& name) { return std::string(MOOT_SCRATCH_DIR) + "/" + name; }

std::string normalize_ws(const std::string& text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

std::string trim_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    out += line + "\n";
  }
  return out;
}

moot::TypeId Analysis::type(const std::string& name) const {
  auto t = universe.lookup(name);
  if (!t) throw std::runtime_error("no type " + name);
  return *t;
}

moot::TypeId Analysis::signature(const std::string& name) const {
  for (auto t : universe.all())
    if (universe.name(t) == name) return t;
  throw std::runtime_error("no type " + name);
}

std::unique_ptr<Analysis> analyze_text(const std::string& text, const std::string& file) {
  auto expanded = moot::expand_param_typedefs(moot::parse(text, file));
  auto universe = moot::build_universe(expanded.program);
  auto hierarchy = moot::infer_hierarchy(universe);
  return std::make_unique<Analysis>(Analysis{std::move(expanded), std::move(universe), std::move(hierarchy)});
}

std::unique_ptr<Analysis> analyze_file(const std::string& name) {
  return analyze_text(read_file(data_path(name)), name);
}

CommandResult run_command(const std::string& command) {
  CommandResult r;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

CommandResult run_mootc(const std::string& args) { return run_command(std::string(MOOTC_PATH) + " " + args); }

CommandResult compile_and_run(const std::string& c_file, const std::string& exe) {
  auto built = run_command(std::string(MOOT_HOST_CXX) + " -x c++ -w " + c_file + " -o " + exe);
  if (built.exit_code != 0) return built;
  return run_command(exe);
}

std::string extract_function(const std::string& code, const std::string& name) {
  std::size_t pos = 0;
  for (;;) {
    pos = code.find(" " + name + "(", pos);
    if (pos == std::string::npos) return {};
    std::size_t line = code.rfind('\n', pos);
    line = line == std::string::npos ? 0 : line + 1;
    std::size_t open = code.find_first_of(";{", pos);
    if (open == std::string::npos) return {};
    if (code[open] == ';') {  // a prototype
      pos = open;
      continue;
    }
    int depth = 0;
    for (std::size_t i = open; i < code.size(); ++i) {
      if (code[i] == '{') ++depth;
      if (code[i] == '}' && --depth == 0) return code.substr(line, i + 1 - line);
    }
    return {};
  }
}

}  // namespace fixture
