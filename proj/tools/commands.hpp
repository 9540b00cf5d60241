#pragma once

#include "run_config.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace barrier::cli {

// File system failure. Maps to exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  std::vector<std::string> files;  // relative to the output directory
  nlohmann::json metadata = nlohmann::json::object();
};

// Config must already be validated; the directory must exist.
RunResult run_command(const RunConfig& config, const std::filesystem::path& dir);

void write_manifest(const RunConfig& config, const std::filesystem::path& dir,
                    const RunResult& result, double wall_seconds);

}  // namespace barrier::cli
