#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasebell/grid.hpp"

namespace phasebell::cli {

struct ExperimentConfig {
  std::string command;
  std::optional<std::size_t> n;      // points per axis; command default when unset
  std::optional<double> box;         // half-width of the symmetric box [-box, box]
  std::string state;                 // state spec, command default when empty
  std::string pattern = "theta";     // "theta" or "half:c1,c2,c1p,c2p"
  std::vector<double> L;             // cutoffs for quantum-violation
  double grid_L = 10.0;              // cutoff of the grid-route cross-check
  int sign = 1;
  std::uint64_t seed = 1;
  double epsilon = 1e-12;
  std::string drop_marginal = "qp";
  std::size_t families = 20;
  std::string tamper;                // state spec whose last chain member replaces the true one
  std::vector<double> atoms{0, 0, 1, 1, 0, 0, 1, 1};  // a1 a2 a1' a2' b1 b2 b1' b2'
  std::string out;
  std::string format = "json";

  /// Throws phasebell::Error on out-of-range values.
  void validate() const;
  nlohmann::json to_json() const;
};

struct Check {
  std::string name;
  bool pass;
  nlohmann::json value;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct ExperimentReport {
  ExperimentConfig config;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Table> tables;
  std::vector<Check> checks;
  double wall_time_seconds = 0.0;

  void check(const std::string& name, bool pass, nlohmann::json value = nullptr, std::string detail = {});
  bool pass() const;
  nlohmann::json to_json() const;
};

/// JSON number, or null for non-finite values.
nlohmann::json number(double v);

std::string table_csv(const Table& t);
/// Writes the report per config.out / config.format, falling back to $PHASEBELL_OUT, then stdout.
void emit(const ExperimentReport& report);

ExperimentReport cmd_classical_counterexample(const ExperimentConfig& config);
ExperimentReport cmd_quantum_violation(const ExperimentConfig& config);
ExperimentReport cmd_operator_checks(const ExperimentConfig& config);
ExperimentReport cmd_three_marginal(const ExperimentConfig& config);
ExperimentReport cmd_wigner(const ExperimentConfig& config);
/// Every command with its default config; one check per command.
ExperimentReport cmd_selftest(const ExperimentConfig& config);

/// Dispatches on config.command and records wall time.
ExperimentReport run(const ExperimentConfig& config);

}  // namespace phasebell::cli
