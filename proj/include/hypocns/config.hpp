#pragma once

// JSON form of RunConfig. Every field is written on output, so a snapshot
// re-parses to an equal config. Unknown keys and wrong types raise ConfigError.

#include <filesystem>
#include <string>

#include "hypocns/experiments.hpp"

namespace hypocns {

std::string config_to_string(const RunConfig& config);
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace hypocns
