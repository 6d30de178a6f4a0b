#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "narrow/cli/experiments.hpp"
#include "narrow/errors.hpp"
#include "narrow/parallel.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;

narrow::cli::Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw narrow::ConfigError("cannot open config file " + path);
  auto j = narrow::cli::Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw narrow::ConfigError("config file " + path + " is not valid JSON");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"narrowlab: experiments on narrow progressions in the primes"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed, sampled;
  std::optional<double> tolerance, time_budget;
  std::vector<std::string> params;
  bool exact = false, print_config = false;
  unsigned threads = 1;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "global seed");
  app.add_option("--out", out_dir, "directory for report.json and artifacts");
  auto* ex = app.add_flag("--exact", exact, "exact evaluation");
  app.add_option("--sampled", sampled, "sampled evaluation with the given budget")->excludes(ex);
  app.add_option("--tolerance", tolerance, "override the experiment's tolerance");
  app.add_option("--time-budget", time_budget, "seconds before the report is marked incomplete");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--param", params, "parameter override key=value (repeatable)");
  app.add_flag("--print-config", print_config, "print the resolved config and exit");
  for (const auto& name : narrow::cli::subcommands()) app.add_subcommand(name, "run " + name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    narrow::cli::ExperimentConfig cfg;
    std::string name;
    if (!app.get_subcommands().empty()) name = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
      cfg = narrow::cli::parse_config(load_json(config_path));
      if (!name.empty() && name != cfg.subcommand) {
        throw narrow::ConfigError("subcommand " + name + " does not match config subcommand " + cfg.subcommand);
      }
    } else if (!name.empty()) {
      cfg = narrow::cli::make_config(name);
    } else {
      std::cerr << app.help();
      return kExitConfig;
    }
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw narrow::ConfigError("--param expects key=value, got '" + kv + "'");
      narrow::cli::set_param(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (exact) {
      cfg.mode = "exact";
      cfg.budget = 0;
    }
    if (sampled) {
      cfg.mode = "sampled";
      cfg.budget = *sampled;
    }
    if (tolerance) cfg.tolerance = tolerance;
    if (time_budget) cfg.time_budget = time_budget;
    narrow::cli::validate(cfg);
    if (print_config) {
      std::cout << narrow::cli::serialize(cfg).dump(2) << '\n';
      return 0;
    }

    narrow::set_thread_count(threads);
    const auto report = narrow::cli::run(cfg);
    if (!cfg.out.empty()) narrow::cli::write_report(report, cfg.out);
    std::cout << report.to_json().dump(2) << '\n';
    for (const auto& c : report.checks) {
      std::cerr << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.measured.dump() << '\n';
    }
    if (!report.complete) std::cerr << "[INCOMPLETE] time budget exceeded\n";
    return report.passed() ? 0 : kExitChecksFailed;
  } catch (const narrow::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const narrow::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
