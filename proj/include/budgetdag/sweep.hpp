#ifndef BUDGETDAG_SWEEP_HPP
#define BUDGETDAG_SWEEP_HPP

#include <filesystem>
#include <optional>
#include <vector>

#include "budgetdag/config.hpp"
#include "budgetdag/model_io.hpp"
#include "budgetdag/subset_select.hpp"

namespace budgetdag {

struct CurveRow {
  double delta = 0.0;
  double avg_sensors = 0.0;
  double avg_cost = 0.0;
  double test_error = 0.0;
  double train_error = 0.0;
};

struct BudgetCurve {
  std::vector<CurveRow> rows;
};

// Fixed header `delta,avg_sensors,avg_cost,test_error,train_error`; values
// in shortest round-trip form so identical sweeps produce identical bytes.
void write_curve_csv(const BudgetCurve& curve, const std::filesystem::path& path);

// Effective sensor specs at one sweep point: base costs scaled by delta.
std::vector<SensorSpec> scaled_sensors(std::span<const SensorSpec> sensors, double delta);

// Trains bank and policies at a single delta over prepared data.
TrainedModel train_at_delta(const ExperimentConfig& config, const IngestResult& data,
                            const AcquisitionDag& dag,
                            std::shared_ptr<const ClassifierBank> bank, double delta);

// Runs subset selection when configured and builds the experiment's DAG.
AcquisitionDag prepare_dag(const ExperimentConfig& config, const IngestResult& data,
                           std::vector<SensorSubset>* selected = nullptr);

// The full protocol: ingest, optional subset selection, bank training, one
// policy training per delta, evaluation rows, model files and curve.csv
// under config.output_dir. A failed delta is logged and skipped; the sweep
// continues.
BudgetCurve run_sweep(const ExperimentConfig& config);

}  // namespace budgetdag

#endif
