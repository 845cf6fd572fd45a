#pragma once

// JSON configuration for the command-line tool: parsing with unknown-key
// rejection, canonical serialization and the config hash.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "levylap/harness.hpp"

namespace levylap::cli {

using json = nlohmann::json;

/// Parses a config document. Missing keys keep their defaults; unknown keys,
/// unknown sections and wrongly typed values throw ConfigError naming the
/// offending path.
ExperimentConfig config_from_json(const json& doc);
ExperimentConfig load_config(const std::string& path);

/// Every field, with sorted keys (nlohmann objects are ordered maps).
json config_to_json(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical dump.
std::uint64_t fnv1a(const std::string& bytes);
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace levylap::cli
