#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mixsde/config.hpp"

namespace mixsde {

std::string library_version();

std::vector<std::string> cli_commands();

/// Fixed CSV header of each subcommand; the first column is manifest_hash.
std::vector<std::string> csv_columns(const std::string& command);

/// FNV-1a of the canonical config without workers and output.
std::string manifest_hash(const Config& config);

struct Manifest {
  std::string tool;
  std::string version;
  std::string command;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string hash;
  std::string csv;
  Config config;
};

std::string manifest_yaml(const std::string& command, const Config& config, const std::string& csv_name);
Manifest parse_manifest(const std::string& text);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;
};

/// Runs one subcommand and writes <out>/<command>.csv and
/// <out>/<command>.manifest.yaml. Returns 0, 2 (config) or 3 (estimation).
int run_command(const std::string& command, Config config, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err);

/// Entry point behind the mixsde executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixsde
