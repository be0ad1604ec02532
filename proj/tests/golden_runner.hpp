#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pfaff::testing {

struct GoldenCase {
  std::string name;
  int expected;
  std::string args;
};

struct Run {
  int code;
  std::string out;
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// Lines `name | code | args`; `#` starts a comment line.
inline std::vector<GoldenCase> read_manifest(const std::string& dir) {
  std::ifstream in(dir + "/manifest.txt");
  std::vector<GoldenCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    auto a = line.find('|'), b = line.find('|', a + 1);
    out.push_back({trim(line.substr(0, a)), std::stoi(line.substr(a + 1, b - a - 1)), trim(line.substr(b + 1))});
  }
  return out;
}

// Runs the binary inside dir; stderr is discarded.
inline Run run_tool(const std::string& binary, const std::string& dir, const std::string& args) {
  std::string command = "cd '" + dir + "' && '" + binary + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct GoldenResult {
  GoldenCase c;
  Run first, second;
  std::optional<std::string> expected;
  bool code_ok() const { return first.code == c.expected && second.code == c.expected; }
  bool deterministic() const { return first.out == second.out; }
  bool matches_snapshot() const { return !expected || *expected == first.out; }
  bool ok() const { return code_ok() && deterministic() && matches_snapshot(); }
};

// Each case runs twice; expected/<name>.out holds the stdout snapshot.
inline std::vector<GoldenResult> run_golden(const std::string& binary, const std::string& dir) {
  std::vector<GoldenResult> out;
  for (const auto& c : read_manifest(dir)) {
    GoldenResult r{c, run_tool(binary, dir, c.args), run_tool(binary, dir, c.args),
                   read_file(dir + "/expected/" + c.name + ".out")};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pfaff::testing
