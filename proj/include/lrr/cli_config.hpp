#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace lrr {

/// One experiment invocation: the subcommand plus everything needed to
/// reproduce its outputs byte for byte. `params` holds the
/// subcommand-specific settings as a JSON object.
struct ExperimentConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  long trials = 1;
  int threads = 1;
  std::string out = ".";
  nlohmann::json params = nlohmann::json::object();

  bool operator==(const ExperimentConfig& other) const = default;
};

/// Emits all fields, so from(to(cfg)) is the identity.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Accepts the subset {subcommand, seed, trials, threads, out, params};
/// subcommand and params are required, the rest default. Unknown keys are
/// rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

} // namespace lrr
