#ifndef BUDGETDAG_SUBSET_SELECT_HPP
#define BUDGETDAG_SUBSET_SELECT_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "budgetdag/bank.hpp"
#include "budgetdag/logistic.hpp"
#include "budgetdag/poly.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag {

// Supplies the 0/1 reward row (correct-classification indicators on the
// evaluation split) for a candidate sensor subset. Rows are cached by
// bitmask; the same candidate recurs across greedy iterations.
class RewardOracle {
 public:
  virtual ~RewardOracle() = default;
  virtual std::size_t num_examples() const = 0;
  std::span<const std::uint8_t> rewards(const SensorSubset& sigma);

  // Materializes reward rows for every uncached candidate. Candidate
  // evaluations are independent and run concurrently; the cache commit is
  // serialized afterwards.
  void prefetch(std::span<const SensorSubset> candidates);

 protected:
  virtual std::vector<std::uint8_t> compute(const SensorSubset& sigma) = 0;

 private:
  std::map<Mask, std::vector<std::uint8_t>> cache_;
};

// Rewards from per-subset classifiers trained on the train split and scored
// on the validation split.
class TrainedRewardOracle : public RewardOracle {
 public:
  TrainedRewardOracle(const Dataset& train, const Dataset& val,
                      std::span<const SensorSpec> sensors, const PolyMap& base_poly,
                      const OptimizerConfig& opt);
  std::size_t num_examples() const override { return val_->size(); }
  const std::map<Mask, SubsetClassifier>& trained() const { return classifiers_; }

 protected:
  std::vector<std::uint8_t> compute(const SensorSubset& sigma) override;

 private:
  const Dataset* train_;
  const Dataset* val_;
  std::span<const SensorSpec> sensors_;
  PolyMap base_poly_;
  OptimizerConfig opt_;
  std::map<Mask, SubsetClassifier> classifiers_;
  std::mutex mutex_;  // guards classifiers_ during concurrent prefetch
};

// Frozen rewards from a lookup function; the oracle mode used by tests.
class LookupRewardOracle : public RewardOracle {
 public:
  LookupRewardOracle(std::size_t n, std::function<bool(std::size_t, const SensorSubset&)> fn)
      : n_(n), fn_(std::move(fn)) {}
  std::size_t num_examples() const override { return n_; }

 protected:
  std::vector<std::uint8_t> compute(const SensorSubset& sigma) override;

 private:
  std::size_t n_;
  std::function<bool(std::size_t, const SensorSubset&)> fn_;
};

struct SubsetCollection {
  std::vector<SensorSubset> subsets;            // sigma_1..sigma_t
  std::vector<SubsetClassifier> classifiers;    // aligned with subsets (trained mode)
  std::vector<std::vector<std::uint8_t>> rewards;  // per subset, per eval example
  double reward_g = 0.0;
};

// (1/N) sum_i max_j r[i][j]; zero for an empty collection.
double reward_value(std::span<const std::vector<std::uint8_t>> reward_rows, std::size_t n);

// Recomputes the reward of a trained collection on an evaluation split.
double reward_G(const SubsetCollection& collection, const Dataset& eval);

struct GreedyResult {
  std::vector<SensorSubset> subsets;
  std::vector<std::vector<std::uint8_t>> rewards;
  double reward_g = 0.0;
};

// Greedy maximization of the reward: repeatedly evaluates every
// (slot, sensor-not-in-slot) candidate in fixed order and commits the best,
// ties to the lowest (slot, sensor) pair. Stops at the unit budget or when
// no candidate strictly improves the reward. budget_units above t*M is
// clipped with a warning.
GreedyResult greedy_select_core(RewardOracle& oracle, int num_sensors, int t, int budget_units);

// Trained-classifier variant over a train/validation split pair.
SubsetCollection greedy_select(const Dataset& train, const Dataset& val,
                               std::span<const SensorSpec> sensors, int t, int budget_units,
                               const PolyMap& base_poly, const OptimizerConfig& opt);

// Diminishing-returns probe on a frozen reward matrix (rows: examples,
// columns: candidate subsets): G(S+a) - G(S) >= G(S+a+b) - G(S+b).
bool marginal_gain_check(const std::vector<std::vector<std::uint8_t>>& rewards,
                         std::span<const int> s, int a, int b);

}  // namespace budgetdag

#endif
