#ifndef BUDGETDAG_CONFIG_HPP
#define BUDGETDAG_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "budgetdag/bank.hpp"
#include "budgetdag/logistic.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag {

enum class RunMode { kFullDag, kSubsetSelect };

struct SensorGroupConfig {
  std::string name;
  std::vector<int> columns;
  double cost = 1.0;
};

struct SubsetSelectConfig {
  int t = 7;
  int budget_units = 8;
  bool append_full_subset = true;
  double val_fraction = 0.25;  // carved from the train split for reward evaluation
};

struct ExperimentConfig {
  std::string train_csv;
  std::string test_csv;  // empty: seeded split of train_csv
  bool has_header = false;
  int label_column = -1;  // -1: last column
  std::vector<SensorGroupConfig> sensors;
  bool sensors_per_column = false;  // one unit-cost sensor per feature column
  int poly_degree = 3;
  bool homogeneous = true;
  RunMode mode = RunMode::kFullDag;
  SubsetSelectConfig subset_select;
  std::vector<double> sweep_deltas;  // empty: default grid
  int sweep_points = 20;             // log-spaced points in (0, M]
  std::uint64_t seed = 13;
  double split_fraction = 0.75;
  std::string output_dir = "out";
  OptimizerConfig optimizer;
  std::string csl_backend = "filter-tree";  // or "memorizing"
  int dag_cap = 12;

  // 0 plus sweep_points log-spaced values up to M, unless given explicitly.
  // The hint supplies M when sensors are generated per column at ingest.
  std::vector<double> deltas(int num_sensors_hint = -1) const;
  int num_sensors() const { return static_cast<int>(sensors.size()); }
};

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

// Structural checks that need no data: disjoint groups, non-negative costs
// and sweep values, sane fractions. Column-range checks happen at ingest.
void validate_config(const ExperimentConfig& config);

struct IngestResult {
  Dataset train;
  Dataset test;
  std::vector<SensorSpec> sensors;
  Standardizer standardizer;
};

// Loads CSVs, splits when no test file is given, standardizes both splits
// with train-side statistics, and materializes the sensor specs.
IngestResult ingest(const ExperimentConfig& config);

}  // namespace budgetdag

#endif
