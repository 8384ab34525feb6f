#ifndef BUDGETDAG_GRAPH_REDUCE_HPP
#define BUDGETDAG_GRAPH_REDUCE_HPP

#include <memory>
#include <span>
#include <vector>

#include "budgetdag/bank.hpp"
#include "budgetdag/dag.hpp"
#include "budgetdag/filter_tree.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag {

// Result of one inference walk: starts at the empty set, ends at stop-and-
// classify. acquisition_cost is the canonical cost of the final raw subset
// (ascending sensor order, no double charging of overlapping units).
struct PathTrace {
  std::vector<Mask> visited_units;  // non-sink states in visit order
  std::vector<int> actions;         // chosen action index at each state
  SensorSubset final_units;
  SensorSubset final_sensors;
  double acquisition_cost = 0.0;
  int predicted_label = 0;

  std::size_t steps() const { return visited_units.size(); }
};

struct RiskSummary {
  double avg_loss = 0.0;   // avg_error + avg_cost, exactly
  double avg_error = 0.0;
  double avg_cost = 0.0;
  double avg_sensors = 0.0;
};

// Node policies pi_1..pi_K over a DAG plus the classifier bank they stop
// into. Immutable after training; inference is pure and thread-safe.
class PolicyModel {
 public:
  PolicyModel() = default;
  PolicyModel(AcquisitionDag dag, std::shared_ptr<const ClassifierBank> bank,
              std::vector<SensorSpec> sensors, std::vector<CslModel> node_models)
      : dag_(std::move(dag)), bank_(std::move(bank)), sensors_(std::move(sensors)),
        node_models_(std::move(node_models)) {}

  const AcquisitionDag& dag() const { return dag_; }
  const ClassifierBank& bank() const { return *bank_; }
  std::shared_ptr<const ClassifierBank> bank_ptr() const { return bank_; }
  std::span<const SensorSpec> sensors() const { return sensors_; }
  const std::vector<CslModel>& node_models() const { return node_models_; }

  PathTrace infer(std::span<const double> x) const;

 private:
  AcquisitionDag dag_;
  std::shared_ptr<const ClassifierBank> bank_;
  std::vector<SensorSpec> sensors_;  // effective (already scaled) costs
  std::vector<CslModel> node_models_;
};

// Leaf-to-root training: nodes are processed in decreasing subset
// cardinality (ties by bitmask). Each node becomes a k-action CSL problem
// over its outgoing-edge costs; the chosen-action cost is then folded into
// every incoming edge exactly once. When out_costs is non-null the final
// cost table (with propagation counters) is copied out for auditing.
PolicyModel graph_reduce_train(const Dataset& train, const AcquisitionDag& dag,
                               std::shared_ptr<const ClassifierBank> bank,
                               std::span<const SensorSpec> sensors, const CslConfig& csl,
                               CostTable* out_costs = nullptr);

PathTrace infer(const PolicyModel& policy, std::span<const double> x);

RiskSummary empirical_risk(const PolicyModel& policy, const Dataset& data);

// Constant-action policy over every node (used for baselines and tests):
// each node takes `action` when available, else its classify edge.
PolicyModel make_constant_policy(const AcquisitionDag& dag,
                                 std::shared_ptr<const ClassifierBank> bank,
                                 std::vector<SensorSpec> sensors, bool acquire_first_unit);

}  // namespace budgetdag

#endif
