#include "narrow/cli/report.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>

#include "narrow/errors.hpp"

namespace narrow::cli {

void Report::check(std::string name, bool ok, Json measured, Json threshold) {
  checks.push_back({std::move(name), ok, std::move(measured), std::move(threshold)});
}

bool Report::passed() const {
  if (!complete) return false;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

Json Report::records() const {
  Json j;
  j["config"] = serialize(config);
  j["results"] = results;
  Json cs = Json::array();
  for (const auto& c : checks) {
    cs.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"threshold", c.threshold}});
  }
  j["checks"] = cs;
  j["complete"] = complete;
  return j;
}

Json Report::to_json() const {
  Json j = records();
  j["footer"] = {{"version", version}, {"timestamp", timestamp}};
  return j;
}

void write_report(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "report.json");
    out << report.to_json().dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / "report.json").string());
  }
  for (const auto& [name, contents] : report.artifacts) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << contents;
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
  }
}

ExperimentConfig embedded_config(const Json& report) {
  if (!report.is_object() || !report.contains("config")) throw ConfigError("report carries no config");
  return parse_config(report.at("config"));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace narrow::cli
