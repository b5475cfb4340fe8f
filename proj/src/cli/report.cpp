#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "phasebell/cli.hpp"
#include "phasebell/grid.hpp"

namespace phasebell::cli {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  return v.dump();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void ExperimentReport::check(const std::string& name, bool pass, nlohmann::json value, std::string detail) {
  checks.push_back(Check{name, pass, std::move(value), std::move(detail)});
}

bool ExperimentReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json tabs = nlohmann::json::object();
  for (const auto& t : tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    tabs[t.name] = {{"columns", t.columns}, {"rows", rows}};
  }
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) {
    cs.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"detail", c.detail}});
  }
  return {{"tool", "phasebell"},
          {"version", kVersion},
          {"command", config.command},
          {"config", config.to_json()},
          {"results", results},
          {"tables", tabs},
          {"checks", cs},
          {"pass", pass()},
          {"wall_time_seconds", wall_time_seconds}};
}

std::string table_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_cell(t.columns[i]);
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
  return out.str();
}

void emit(const ExperimentReport& report) {
  const auto& cfg = report.config;
  std::filesystem::path target;
  if (!cfg.out.empty()) {
    target = cfg.out;
  } else if (const char* dir = std::getenv("PHASEBELL_OUT"); dir && *dir) {
    target = std::filesystem::path(dir) / (cfg.command + (cfg.format == "csv" ? "" : ".json"));
  }
  const std::string json_text = report.to_json().dump(2) + "\n";
  if (cfg.format == "json") {
    if (target.empty()) {
      std::cout << json_text;
    } else {
      write_file(target, json_text);
    }
    return;
  }
  // csv: one file per table next to the JSON report
  if (target.empty()) {
    for (const auto& t : report.tables) std::cout << "# " << t.name << "\n" << table_csv(t) << "\n";
    return;
  }
  std::filesystem::path stem = target;
  stem.replace_extension();
  write_file(stem.string() + ".json", json_text);
  for (const auto& t : report.tables) write_file(stem.string() + "." + t.name + ".csv", table_csv(t));
}

}  // namespace phasebell::cli
