#include "lrr/cli_config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace lrr {

namespace {

using nlohmann::json;

const std::vector<std::string> kKeys = {"subcommand", "seed", "trials",
                                        "threads", "out", "params"};

} // namespace

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  j["params"] = cfg.params;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (!j.contains("subcommand") || !j["subcommand"].is_string()) {
    throw std::invalid_argument("config: missing or malformed 'subcommand'");
  }
  if (!j.contains("params") || !j["params"].is_object()) {
    throw std::invalid_argument("config: missing or malformed 'params'");
  }
  ExperimentConfig cfg;
  cfg.subcommand = j["subcommand"].get<std::string>();
  cfg.params = j["params"];
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw std::invalid_argument("config: 'seed' must be a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("trials")) {
    if (!j["trials"].is_number_integer() || j["trials"].get<long>() < 1) {
      throw std::invalid_argument("config: 'trials' must be a positive integer");
    }
    cfg.trials = j["trials"].get<long>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer() || j["threads"].get<int>() < 1) {
      throw std::invalid_argument("config: 'threads' must be a positive integer");
    }
    cfg.threads = j["threads"].get<int>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string() || j["out"].get<std::string>().empty()) {
      throw std::invalid_argument("config: 'out' must be a non-empty string");
    }
    cfg.out = j["out"].get<std::string>();
  }
  if (cfg.subcommand.empty()) {
    throw std::invalid_argument("config: 'subcommand' must be non-empty");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: malformed JSON in " + path.string() +
                                ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("config: cannot open " + path.string() +
                                " for writing");
  }
  out << config_to_json(cfg).dump(2) << '\n';
  if (!out) {
    throw std::invalid_argument("config: write failed for " + path.string());
  }
}

} // namespace lrr
