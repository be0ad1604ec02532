#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace pfaff::cli {

// Outcome of one command: a property that holds or fails, with printed
// defects and certificates.
struct Report {
  explicit Report(std::string n) : name(std::move(n)) {}

  std::string name;
  bool holds = true;
  std::vector<std::pair<std::string, std::string>> defects;
  std::vector<std::pair<std::string, std::string>> certificates;
  std::vector<std::string> trace;
};

enum ExitCode { Holds = 0, Fails = 1, UsageError = 2 };

std::string render_text(const Report& r);
std::string render_json(const Report& r);

// Runs the command line argv[1..] and returns the exit code.  Reports go to
// out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfaff::cli
