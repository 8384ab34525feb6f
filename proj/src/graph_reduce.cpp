#include "budgetdag/graph_reduce.hpp"

#include <algorithm>

#include "parallel_guard.hpp"

namespace budgetdag {

namespace {

// Filter-tree policies see only the columns acquired at their node. The
// memorizing backend keys on the full vector instead: it stands in for the
// unrestricted measurable policies of the exact dynamic program.
CslConfig node_csl_config(const CslConfig& base, const SensorSubset& node_sensors,
                          std::span<const SensorSpec> sensors) {
  CslConfig cfg = base;
  cfg.poly.input_columns = columns_of(node_sensors, sensors);
  return cfg;
}

}  // namespace

PolicyModel graph_reduce_train(const Dataset& train, const AcquisitionDag& dag,
                               std::shared_ptr<const ClassifierBank> bank,
                               std::span<const SensorSpec> sensors, const CslConfig& csl,
                               CostTable* out_costs) {
  const std::size_t n = train.size();
  if (n == 0) throw TrainError("graph_reduce_train: empty training set");
  if (dag.num_nodes() == 0 || dag.num_edges() == 0)
    throw ConfigError("graph_reduce_train: DAG has no classify edges");
  for (int j = 0; j < dag.num_nodes(); ++j)
    if (!bank->has(dag.node(j).sensors))
      throw ConfigError("graph_reduce_train: bank missing classifier for node " +
                        dag.node(j).sensors.to_string());

  CostTable costs = CostTable::initialize(dag, *bank, train, sensors);
  std::vector<CslModel> node_models(dag.num_nodes());

  // Leaf-to-root schedule: by the time a node is visited, every acquisition
  // child has been trained and its cost-to-go folded into the shared table,
  // which is exactly the all-children-are-leaves condition.
  for (int card = dag.num_units(); card >= 0; --card) {
    const std::vector<int> round = dag.nodes_with_cardinality(card);
    const int round_size = static_cast<int>(round.size());
    std::vector<std::vector<double>> chosen(round_size);

    detail::ParallelGuard guard;
#pragma omp parallel for if (round_size > 1) schedule(dynamic)
    for (int r = 0; r < round_size; ++r) {
      guard.run([&, r] {
        const int j = round[r];
        const std::vector<int>& actions = dag.node(j).out_edges;
        const int k = static_cast<int>(actions.size());
        std::vector<double>& chosen_cost = chosen[r];
        chosen_cost.resize(n);

        if (k == 1) {
          // Full subset: stop and classify is the only transition.
          node_models[j] = CslModel(ConstantAction{0, 1});
          for (std::size_t i = 0; i < n; ++i) chosen_cost[i] = costs.at(i, actions[0]);
          return;
        }

        CslInstance instance;
        instance.x = train.features;
        instance.costs = MatrixD(n, k);
        for (std::size_t i = 0; i < n; ++i)
          for (int a = 0; a < k; ++a) instance.costs.at(i, a) = costs.at(i, actions[a]);

        CslModel model = learn(instance, node_csl_config(csl, dag.node(j).sensors, sensors));
        for (std::size_t i = 0; i < n; ++i)
          chosen_cost[i] = instance.costs.at(i, model.predict(train.x(i)));
        node_models[j] = std::move(model);
      });
    }
    guard.rethrow_if_failed();

    // Barrier: costs-to-go land on incoming edges only after the whole
    // round is fixed. Each acquisition edge is written exactly once, when
    // its target node is processed.
    for (int r = 0; r < round_size; ++r)
      for (int e : dag.node(round[r]).in_edges) costs.add_cost_to_go(e, chosen[r]);
  }

  if (out_costs) *out_costs = costs;
  return PolicyModel(dag, std::move(bank),
                     std::vector<SensorSpec>(sensors.begin(), sensors.end()),
                     std::move(node_models));
}

PathTrace PolicyModel::infer(std::span<const double> x) const {
  PathTrace trace;
  int node = dag_.root();
  while (true) {
    trace.visited_units.push_back(dag_.node(node).units.bits());
    const int action = node_models_[node].predict(x);
    trace.actions.push_back(action);
    const int e = dag_.node(node).out_edges[action];
    if (dag_.is_classify_edge(e)) break;
    node = dag_.edge(e).to;
  }
  trace.final_units = dag_.node(node).units;
  trace.final_sensors = dag_.node(node).sensors;
  trace.acquisition_cost = subset_cost(trace.final_sensors, sensors_);
  trace.predicted_label = bank_->predict(trace.final_sensors, x);
  return trace;
}

PathTrace infer(const PolicyModel& policy, std::span<const double> x) {
  return policy.infer(x);
}

RiskSummary empirical_risk(const PolicyModel& policy, const Dataset& data) {
  const std::size_t n = data.size();
  if (n == 0) throw DataError("empirical_risk: empty dataset");

  std::vector<double> err(n), cost(n), acquired(n);
  detail::ParallelGuard guard;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    guard.run([&, i] {
      const PathTrace t = policy.infer(data.x(i));
      err[i] = t.predicted_label != data.y(i) ? 1.0 : 0.0;
      cost[i] = t.acquisition_cost;
      acquired[i] = static_cast<double>(t.final_sensors.count());
    });
  }
  guard.rethrow_if_failed();

  RiskSummary r;
  double sum_err = 0.0, sum_cost = 0.0, sum_acq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_err += err[i];
    sum_cost += cost[i];
    sum_acq += acquired[i];
  }
  r.avg_error = sum_err / static_cast<double>(n);
  r.avg_cost = sum_cost / static_cast<double>(n);
  r.avg_sensors = sum_acq / static_cast<double>(n);
  r.avg_loss = r.avg_error + r.avg_cost;
  return r;
}

PolicyModel make_constant_policy(const AcquisitionDag& dag,
                                 std::shared_ptr<const ClassifierBank> bank,
                                 std::vector<SensorSpec> sensors, bool acquire_first_unit) {
  std::vector<CslModel> models(dag.num_nodes());
  for (int j = 0; j < dag.num_nodes(); ++j) {
    const int k = static_cast<int>(dag.node(j).out_edges.size());
    // Acquisition edges precede the classify edge, so action 0 acquires the
    // lowest missing unit whenever one exists; action k-1 classifies.
    const int action = acquire_first_unit && k > 1 ? 0 : k - 1;
    models[j] = CslModel(ConstantAction{action, k});
  }
  return PolicyModel(dag, std::move(bank), std::move(sensors), std::move(models));
}

}  // namespace budgetdag
