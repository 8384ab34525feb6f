#ifndef BUDGETDAG_MODEL_IO_HPP
#define BUDGETDAG_MODEL_IO_HPP

#include <filesystem>
#include <memory>

#include "budgetdag/config.hpp"
#include "budgetdag/graph_reduce.hpp"

namespace budgetdag {

inline constexpr const char* kModelMagic = "budgetdag.model";
inline constexpr int kModelFormatVersion = 1;

// A trained system: policy (which owns DAG, bank and effective sensor
// costs), the standardizer for raw inputs, the config it was trained under
// and the delta it was trained at.
struct TrainedModel {
  ExperimentConfig config;
  double delta = 0.0;
  Standardizer standardizer;
  PolicyModel policy;

  // Standardizes a raw feature row, then walks the policy.
  PathTrace infer_raw(std::span<const double> x) const;
};

// Self-describing versioned JSON. Doubles are written in shortest
// round-trip form, so a loaded model reproduces bit-identical predictions.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace budgetdag

#endif
