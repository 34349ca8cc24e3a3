#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace geobs::cli {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"solve", "verify", "decay", "hodge", "wente", "so-solve", "export"};
  return names;
}

/// Exit codes of a run.
enum ExitCode : int {
  kOk = 0,
  kContractFailed = 1,  ///< non-convergence or a failed check; reports are still written
  kUsage = 2,           ///< unknown command, unreadable or invalid configuration
};

/// Executes `command` for `cfg`, writing artifacts and manifest.json into
/// output_dir(cfg). Progress goes to `log`.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log);

/// Loads the configuration and calls run_command; parse errors give kUsage.
int run(const std::string& command, const std::filesystem::path& config_path, std::ostream& log);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace geobs::cli
