#include "budgetdag/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "budgetdag/csv.hpp"
#include "budgetdag/graph_reduce.hpp"

namespace budgetdag {

void write_curve_csv(const BudgetCurve& curve, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("curve: cannot write " + tmp.string());
    out << "delta,avg_sensors,avg_cost,test_error,train_error\n";
    for (const CurveRow& r : curve.rows)
      out << format_double(r.delta) << "," << format_double(r.avg_sensors) << ","
          << format_double(r.avg_cost) << "," << format_double(r.test_error) << ","
          << format_double(r.train_error) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

std::vector<SensorSpec> scaled_sensors(std::span<const SensorSpec> sensors, double delta) {
  std::vector<SensorSpec> scaled(sensors.begin(), sensors.end());
  for (SensorSpec& s : scaled) s.cost *= delta;
  return scaled;
}

AcquisitionDag prepare_dag(const ExperimentConfig& config, const IngestResult& data,
                           std::vector<SensorSubset>* selected) {
  const int num_sensors = static_cast<int>(data.sensors.size());
  if (config.mode == RunMode::kFullDag) {
    if (selected) selected->clear();
    return build_full_dag(num_sensors, config.dag_cap);
  }

  PolyMap poly{config.poly_degree, {}, true, config.homogeneous};
  // Selection never sees the test split; the reward is scored on a
  // validation carve-out of the training data.
  auto [sub_train, val] =
      split_dataset(data.train, 1.0 - config.subset_select.val_fraction, config.seed + 1);
  SubsetCollection picked =
      greedy_select(sub_train, val, data.sensors, config.subset_select.t,
                    config.subset_select.budget_units, poly, config.optimizer);

  std::vector<SensorSubset> sigmas;
  for (const SensorSubset& s : picked.subsets)
    if (!s.empty()) sigmas.push_back(s);
  if (config.subset_select.append_full_subset) {
    const SensorSubset full = SensorSubset::full_set(num_sensors);
    bool present = false;
    for (const SensorSubset& s : sigmas) present = present || s == full;
    if (!present) sigmas.push_back(full);
  }
  if (sigmas.empty()) throw TrainError("subset selection produced no usable subsets");
  if (selected) *selected = sigmas;
  return build_union_dag(sigmas, num_sensors);
}

TrainedModel train_at_delta(const ExperimentConfig& config, const IngestResult& data,
                            const AcquisitionDag& dag,
                            std::shared_ptr<const ClassifierBank> bank, double delta) {
  CslConfig csl;
  csl.backend = config.csl_backend == "memorizing" ? CslBackend::kMemorizing
                                                   : CslBackend::kFilterTree;
  csl.poly = PolyMap{config.poly_degree, {}, true, config.homogeneous};
  csl.opt = config.optimizer;

  const std::vector<SensorSpec> effective = scaled_sensors(data.sensors, delta);
  TrainedModel model;
  model.config = config;
  model.delta = delta;
  model.standardizer = data.standardizer;
  model.policy = graph_reduce_train(data.train, dag, std::move(bank), effective, csl);
  return model;
}

BudgetCurve run_sweep(const ExperimentConfig& config) {
  const IngestResult data = ingest(config);
  std::filesystem::create_directories(config.output_dir);

  std::vector<SensorSubset> selected;
  const AcquisitionDag dag = prepare_dag(config, data, &selected);
  if (config.mode == RunMode::kSubsetSelect) {
    nlohmann::json sel = nlohmann::json::array();
    for (const SensorSubset& s : selected)
      sel.push_back({{"sensor_bits", s.bits()}, {"members", s.members()}});
    std::ofstream out(std::filesystem::path(config.output_dir) / "selected_subsets.json");
    out << sel.dump(2) << "\n";
  }

  // The bank is delta-independent: classifier fits never see sensor prices.
  PolyMap poly{config.poly_degree, {}, true, config.homogeneous};
  auto bank = std::make_shared<const ClassifierBank>(
      train_bank(data.train, dag, data.sensors, poly, config.optimizer));

  const std::vector<double> grid = config.deltas(static_cast<int>(data.sensors.size()));
  BudgetCurve curve;
  int index = 0;
  for (double delta : grid) {
    try {
      TrainedModel model = train_at_delta(config, data, dag, bank, delta);
      const RiskSummary test = empirical_risk(model.policy, data.test);
      const RiskSummary train = empirical_risk(model.policy, data.train);

      char name[32];
      std::snprintf(name, sizeof(name), "model_%03d.json", index);
      save_model(model, std::filesystem::path(config.output_dir) / name);

      curve.rows.push_back(
          {delta, test.avg_sensors, test.avg_cost, test.avg_error, train.avg_error});
    } catch (const std::exception& e) {
      std::cerr << "sweep: delta " << format_double(delta) << " failed: " << e.what()
                << "; continuing\n";
    }
    ++index;
  }

  write_curve_csv(curve, std::filesystem::path(config.output_dir) / "curve.csv");
  save_config(config, std::filesystem::path(config.output_dir) / "config.json");
  return curve;
}

}  // namespace budgetdag
