#include "narrow/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "narrow/arith.hpp"
#include "narrow/errors.hpp"

namespace narrow::cli {

namespace {

Json sieve_keys(std::int64_t n_prime, std::int64_t w, double eps0) {
  return Json{{"n_prime", n_prime}, {"w", w}, {"eps0", eps0}, {"b", 1}, {"chi", "cosine"}};
}

Json merged(Json base, const Json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) base[it.key()] = it.value();
  return base;
}

const std::map<std::string, Json>& schemas() {
  static const std::map<std::string, Json> table = [] {
    std::map<std::string, Json> s;
    s["sieve-mean"] = merged(sieve_keys(1000000, 5, 0.1), {{"reference_n_prime", 10000},
                                                          {"oracle_points", 0},
                                                          {"domination", false},
                                                          {"export", false}});
    s["shifted-product"] = merged(sieve_keys(1000000, 5, 0.1), {{"shifts", {0, 1}}, {"assert", false}});
    s["forms-condition"] = merged(sieve_keys(1000000, 5, 0.1), {{"t", 1},
                                                               {"polys", {"h1", "2*h1"}},
                                                               {"L", 4.0},
                                                               {"box_lo", nullptr},
                                                               {"box_hi", nullptr},
                                                               {"samples", 100000},
                                                               {"max_stderr", 0.05}});
    s["gowers-norm"] = merged(sieve_keys(10000, 3, 0.5),
                              {{"function", "random"}, {"N", 64}, {"directions", {1, 2}}, {"S", 2}});
    s["avg-gowers-norm"] = merged(sieve_keys(10000, 3, 0.5), {{"function", "random"},
                                                             {"N", 64},
                                                             {"t", 1},
                                                             {"H", 4},
                                                             {"W", 1},
                                                             {"S", 2},
                                                             {"polys", {"h1", "h1+1"}}});
    s["dual"] = Json{{"N", 64}, {"t", 1}, {"H", 3}, {"W", 1}, {"S", 2}, {"polys", {"h1", "2*h1+1"}}};
    s["duality-check"] =
        Json{{"N", 64}, {"t", 1}, {"H", 3}, {"W", 1}, {"S", 2}, {"polys", {"h1", "2*h1+1"}}, {"trials", 50}};
    s["dual-square-check"] =
        Json{{"N", 32}, {"t", 1}, {"H", 2}, {"W", 1}, {"S", 2}, {"polys", {"h1", "h1+1"}}, {"trials", 20}};
    s["gcs-suite"] = Json{{"N", 64}, {"d", 2}, {"S_max", 4}, {"trials", 1000}};
    s["lambda"] = Json{{"N", 64}, {"k", 3}, {"M", 16}, {"W", 1}, {"polys", nullptr}};
    s["singular"] = Json{{"k", 2}, {"r", 2}, {"cutoff", 1000000}, {"compare_cutoff", 0}};
    s["singular-sum"] = Json{{"k", 3}, {"M", 10000}, {"cutoff", 100000}, {"compare_M", 1000}};
    s["narrowless"] = Json{{"N", 100000}, {"k", 3}, {"eps", 0.05}, {"expected_fraction", nullptr}};
    s["cramer"] = Json{{"N", 100000},
                       {"k", 3},
                       {"C", 20.0},
                       {"delta", 0.5},
                       {"adversaries", {"greedy", "random", "interval"}},
                       {"trials", 100},
                       {"inclusion_probability", nullptr},
                       {"min_found_rate", nullptr}};
    s["find-prog"] = Json{{"set", "primes"}, {"N", 100}, {"k", 3}, {"polys", nullptr}, {"r_max", 4},
                          {"limit", 1000}, {"expected_count", nullptr}};
    s["min-step"] = Json{{"set", "primes"}, {"N", 100}, {"k", 4}, {"polys", nullptr}, {"r_max", 100},
                         {"expected", nullptr}};
    s["preset"] = Json{{"name", "paper-regime"}, {"n_prime", 1000000}, {"L", 4.0}, {"eps0", 0.1}};
    return s;
  }();
  return table;
}

const char* kind(const Json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

// Coerces `value` to the type of the default, or throws naming the key.
Json coerce(const std::string& key, const Json& def, const Json& value) {
  auto bad = [&] {
    return ConfigError("parameter '" + key + "': expected " + kind(def) + ", got " + kind(value));
  };
  if (def.is_null()) return value;  // optional; any kind accepted, checked by the experiment
  if (def.is_number_integer()) {
    if (value.is_number_integer()) return value;
    if (value.is_number_float()) {
      const double x = value.get<double>();
      if (std::floor(x) == x && std::abs(x) < 9.0e18) return Json(std::int64_t(x));
    }
    throw bad();
  }
  if (def.is_number_float()) {
    if (value.is_number()) return Json(value.get<double>());
    throw bad();
  }
  if (def.is_string() && value.is_array() && key == "set") return value;
  if (std::string(kind(def)) != kind(value)) throw bad();
  return value;
}

std::optional<double> optional_number(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number or null");
  return j.at(key).get<double>();
}

}  // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return subcommand == o.subcommand && seed == o.seed && out == o.out && mode == o.mode && budget == o.budget &&
         tolerance == o.tolerance && time_budget == o.time_budget && params == o.params;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "sieve-mean", "shifted-product", "forms-condition", "gowers-norm", "avg-gowers-norm", "dual",
      "duality-check", "dual-square-check", "gcs-suite", "lambda", "singular", "singular-sum",
      "narrowless", "cramer", "find-prog", "min-step", "preset"};
  return names;
}

const Json& default_params(const std::string& subcommand) {
  const auto& s = schemas();
  auto it = s.find(subcommand);
  if (it == s.end()) throw ConfigError("unknown subcommand '" + subcommand + "'");
  return it->second;
}

ExperimentConfig make_config(const std::string& subcommand, const Json& overrides) {
  ExperimentConfig cfg;
  cfg.subcommand = subcommand;
  cfg.params = default_params(subcommand);
  if (!overrides.is_object()) throw ConfigError("params must be a JSON object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!cfg.params.contains(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' for subcommand " + subcommand);
    }
    cfg.params[it.key()] = coerce(it.key(), default_params(subcommand).at(it.key()), it.value());
  }
  return cfg;
}

void set_param(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  Json v = Json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (v.is_discarded()) v = value;
  Json o = Json::object();
  o[key] = v;
  for (auto it = cfg.params.begin(); it != cfg.params.end(); ++it) {
    if (it.key() != key) o[it.key()] = it.value();
  }
  cfg = [&] {
    ExperimentConfig c = make_config(cfg.subcommand, o);
    c.seed = cfg.seed;
    c.out = cfg.out;
    c.mode = cfg.mode;
    c.budget = cfg.budget;
    c.tolerance = cfg.tolerance;
    c.time_budget = cfg.time_budget;
    return c;
  }();
}

void validate(const ExperimentConfig& cfg) {
  const Json& def = default_params(cfg.subcommand);
  for (auto it = cfg.params.begin(); it != cfg.params.end(); ++it) {
    if (!def.contains(it.key())) throw ConfigError("unknown key '" + it.key() + "' for subcommand " + cfg.subcommand);
    coerce(it.key(), def.at(it.key()), it.value());
  }
  for (auto it = def.begin(); it != def.end(); ++it) {
    if (!cfg.params.contains(it.key())) throw ConfigError("missing key '" + it.key() + "'");
  }
  if (cfg.mode != "exact" && cfg.mode != "sampled") {
    throw ConfigError("key 'mode': expected exact or sampled, got '" + cfg.mode + "'");
  }
  if (cfg.sampled() && cfg.budget < 1000) throw ConfigError("key 'budget': sampled mode needs at least 1000");
  if (cfg.tolerance && !(*cfg.tolerance > 0)) throw ConfigError("key 'tolerance': must be positive");
  if (cfg.time_budget && !(*cfg.time_budget > 0)) throw ConfigError("key 'time_budget': must be positive");
}

Json serialize(const ExperimentConfig& cfg) {
  Json j;
  j["subcommand"] = cfg.subcommand;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  j["mode"] = cfg.mode;
  j["budget"] = cfg.budget;
  j["tolerance"] = cfg.tolerance ? Json(*cfg.tolerance) : Json(nullptr);
  j["time_budget"] = cfg.time_budget ? Json(*cfg.time_budget) : Json(nullptr);
  j["params"] = cfg.params;
  return j;
}

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {"subcommand", "seed", "out", "mode",
                                                 "budget", "tolerance", "time_budget", "params"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError("unknown key '" + it.key() + "'");
    }
  }
  if (!j.contains("subcommand") || !j.at("subcommand").is_string()) {
    throw ConfigError("key 'subcommand': missing or not a string");
  }
  try {
    ExperimentConfig cfg = make_config(j.at("subcommand").get<std::string>(), j.value("params", Json::object()));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
    if (j.contains("budget")) cfg.budget = j.at("budget").get<std::uint64_t>();
    cfg.tolerance = optional_number(j, "tolerance");
    cfg.time_budget = optional_number(j, "time_budget");
    validate(cfg);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

PresetValues preset(const std::string& name, std::int64_t n_prime, double L, double eps0) {
  if (n_prime < 1000) throw ConfigError("preset: n_prime must be at least 1000");
  if (!(L >= 1)) throw ConfigError("preset: L must be at least 1");
  if (!(eps0 > 0 && eps0 < 1)) throw ConfigError("preset: eps0 must lie in (0, 1)");
  PresetValues v;
  v.name = name;
  v.n_prime = n_prime;
  v.L = L;
  v.eps0 = eps0;
  if (name == "paper-regime") {
    const double lll = std::log(std::log(std::log(double(n_prime))));
    v.w = std::max<std::int64_t>(3, std::int64_t(std::floor(lll / 10)));
  } else if (name == "desk") {
    v.w = 5;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected paper-regime or desk)");
  }
  v.W = primorial(v.w);
  v.N = n_prime / v.W;
  v.log_N = std::log(double(v.N));
  v.M = std::int64_t(std::floor(std::pow(v.log_N, L)));
  v.H = std::int64_t(std::floor(std::pow(v.log_N, std::sqrt(L))));
  v.R = std::int64_t(std::floor(std::pow(double(v.N), eps0)));
  v.sqrt_M = std::int64_t(std::floor(std::sqrt(double(v.M))));
  v.quarter_M = std::int64_t(std::floor(std::pow(double(v.M), 0.25)));
  v.scales_coincide = v.M == v.H;
  return v;
}

Json to_json(const PresetValues& v) {
  return Json{{"name", v.name},       {"n_prime", v.n_prime},   {"L", v.L},         {"eps0", v.eps0},
              {"w", v.w},             {"W", v.W},               {"N", v.N},         {"log_N", v.log_N},
              {"M", v.M},             {"H", v.H},               {"R", v.R},         {"sqrt_M", v.sqrt_M},
              {"quarter_M", v.quarter_M}, {"scales_coincide", v.scales_coincide}};
}

}  // namespace narrow::cli
