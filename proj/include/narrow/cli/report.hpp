#pragma once

#include <map>
#include <string>
#include <vector>

#include "narrow/cli/config.hpp"

namespace narrow::cli {

struct Check {
  std::string name;
  bool passed = false;
  Json measured;
  Json threshold;
};

struct Report {
  ExperimentConfig config;
  Json results = Json::object();
  std::vector<Check> checks;
  bool complete = true;
  std::string version;
  std::string timestamp;
  std::map<std::string, std::string> artifacts;  // file name -> contents

  void check(std::string name, bool passed, Json measured, Json threshold = nullptr);
  bool passed() const;

  // Config echo, results, checks and completeness; everything that must be
  // reproducible. The footer (version, timestamp) is left out.
  Json records() const;
  Json to_json() const;
};

// Writes report.json and every artifact into `dir`, creating it if needed.
void write_report(const Report& report, const std::string& dir);

// Re-parses and validates the config embedded in a report.
ExperimentConfig embedded_config(const Json& report);

std::string utc_timestamp();

}  // namespace narrow::cli
