#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace narrow::cli {

using Json = nlohmann::ordered_json;

struct ExperimentConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string out;                       // output directory; empty writes nothing
  std::string mode = "exact";            // exact | sampled
  std::uint64_t budget = 0;              // sample budget in sampled mode
  std::optional<double> tolerance;       // overrides the experiment's default
  std::optional<double> time_budget;     // seconds; exceeded -> incomplete report
  Json params = Json::object();          // experiment parameters, defaults filled in

  bool sampled() const { return mode == "sampled"; }
  bool operator==(const ExperimentConfig& other) const;
};

const std::vector<std::string>& subcommands();

// Parameter keys and defaults for one subcommand. Throws ConfigError for an
// unknown subcommand.
const Json& default_params(const std::string& subcommand);

// Defaults merged with `overrides`; unknown keys raise ConfigError naming the
// key.
ExperimentConfig make_config(const std::string& subcommand, const Json& overrides = Json::object());

// Applies one key=value override. The value is read as JSON when it parses,
// otherwise as a string.
void set_param(ExperimentConfig& cfg, const std::string& key, const std::string& value);

void validate(const ExperimentConfig& cfg);

Json serialize(const ExperimentConfig& cfg);
ExperimentConfig parse_config(const Json& j);

// Scales derived from the ambient size N' in a named regime.
struct PresetValues {
  std::string name;
  std::int64_t n_prime = 0;
  double L = 0;
  double eps0 = 0;
  std::int64_t w = 0;
  std::int64_t W = 0;
  std::int64_t N = 0;
  double log_N = 0;
  std::int64_t M = 0;       // floor(log^L N)
  std::int64_t H = 0;       // floor(log^{sqrt L} N)
  std::int64_t R = 0;       // floor(N^eps0)
  std::int64_t sqrt_M = 0;  // floor(M^{1/2})
  std::int64_t quarter_M = 0;  // floor(M^{1/4})
  bool scales_coincide = false;  // M == H, as for L = 1
};

// "paper-regime" uses w = max(3, floor(log log log N' / 10)); "desk" uses w = 5.
// Throws ConfigError for N' < 1000 or an unknown name.
PresetValues preset(const std::string& name, std::int64_t n_prime, double L, double eps0);

Json to_json(const PresetValues& v);

}  // namespace narrow::cli
