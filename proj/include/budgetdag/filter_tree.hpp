#ifndef BUDGETDAG_FILTER_TREE_HPP
#define BUDGETDAG_FILTER_TREE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "budgetdag/logistic.hpp"
#include "budgetdag/poly.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag {

// k-action cost-sensitive instance: one cost per action per example.
struct CslInstance {
  MatrixD x;      // n x raw feature dim
  MatrixD costs;  // n x k, finite and non-negative

  std::size_t size() const { return x.rows; }
  int num_actions() const { return static_cast<int>(costs.cols); }
};

// One tournament match: entries index the previous level (or actions at the
// lowest level). Score >= 0 routes to the left entry.
struct FilterTreeMatch {
  int left = 0;
  int right = 0;
  std::vector<double> weights;
};

// Tournament of importance-weighted binary classifiers over k actions.
// Bracket is fixed by action id order; an odd entry gets a bye to the next
// level. k = 1 predicts the single action unconditionally.
class FilterTree {
 public:
  FilterTree() = default;
  FilterTree(int k, PolyMap poly, std::vector<std::vector<FilterTreeMatch>> levels)
      : k_(k), poly_(std::move(poly)), levels_(std::move(levels)) {}

  int num_actions() const { return k_; }
  const PolyMap& poly() const { return poly_; }
  const std::vector<std::vector<FilterTreeMatch>>& levels() const { return levels_; }

  int predict(std::span<const double> x) const;
  int predict_expanded(std::span<const double> phi_row) const;

 private:
  int k_ = 1;
  PolyMap poly_;
  std::vector<std::vector<FilterTreeMatch>> levels_;
};

// Zero-regret oracle backend: exact lookup keyed by the training vector,
// summed costs per duplicate key, global cost argmin for unseen inputs.
class MemorizingPredictor {
 public:
  MemorizingPredictor() = default;
  MemorizingPredictor(int k, std::map<std::vector<double>, int> table, int fallback)
      : k_(k), table_(std::move(table)), fallback_(fallback) {}

  int num_actions() const { return k_; }
  int fallback() const { return fallback_; }
  const std::map<std::vector<double>, int>& table() const { return table_; }
  int predict(std::span<const double> x) const;

 private:
  int k_ = 1;
  std::map<std::vector<double>, int> table_;
  int fallback_ = 0;
};

struct ConstantAction {
  int action = 0;
  int k = 1;
  int num_actions() const { return k; }
  int predict(std::span<const double>) const { return action; }
};

enum class CslBackend { kFilterTree, kMemorizing };

struct CslConfig {
  CslBackend backend = CslBackend::kFilterTree;
  PolyMap poly;
  OptimizerConfig opt;
};

// Any trained k-action cost-sensitive policy.
class CslModel {
 public:
  CslModel() : impl_(ConstantAction{}) {}
  CslModel(ConstantAction m) : impl_(std::move(m)) {}
  CslModel(FilterTree m) : impl_(std::move(m)) {}
  CslModel(MemorizingPredictor m) : impl_(std::move(m)) {}

  int predict(std::span<const double> x) const;
  int num_actions() const;

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&impl_);
  }

 private:
  std::variant<ConstantAction, FilterTree, MemorizingPredictor> impl_;
};

// Trains the filter tree bottom-up. At each match the binary label is the
// side whose subtree winner has lower cost, with importance equal to the
// cost gap; zero-importance examples are skipped. Matches at the same level
// are independent and train concurrently.
FilterTree filter_tree_learn(const CslInstance& instance, const PolyMap& poly,
                             const OptimizerConfig& opt);

MemorizingPredictor memorizing_learn(const CslInstance& instance);

// The Learn primitive: dispatches on the configured backend. Throws
// ConfigError for k = 0, DataError for an empty instance.
CslModel learn(const CslInstance& instance, const CslConfig& config);

}  // namespace budgetdag

#endif
