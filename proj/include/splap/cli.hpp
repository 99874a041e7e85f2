#pragma once

// Command-line front end: `splap exact1d|solve|check key=value ...`.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace splap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNonexistence = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitCheck = 4;

/// Key/value settings with the line each came from (0 for the command line).
struct Setting {
  std::string value;
  std::string origin;
};
using Settings = std::map<std::string, Setting>;

/// Reads `key=value` lines ('#' starts a comment). ConfigError names file and line.
Settings read_config_file(const std::string& path);

/// Merges `key=value` arguments over an optional `config=<file>`; the command
/// line wins. Keys outside `allowed` raise ConfigError with their origin.
Settings collect_settings(const std::vector<std::string>& args, const std::vector<std::string>& allowed);

/// Runs one invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace splap::cli
