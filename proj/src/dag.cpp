#include "budgetdag/dag.hpp"

#include <algorithm>
#include <cassert>

#include "budgetdag/bank.hpp"

namespace budgetdag {

AcquisitionDag::AcquisitionDag(Kind kind, std::vector<DagUnit> units, int num_sensors)
    : kind_(kind), num_sensors_(num_sensors), units_(std::move(units)) {
  const int t = static_cast<int>(units_.size());
  const Mask num_states = Mask{1} << t;

  // States ordered by (cardinality, bitmask); the empty set is node 0.
  std::vector<Mask> order(num_states);
  for (Mask m = 0; m < num_states; ++m) order[m] = m;
  std::sort(order.begin(), order.end(), [](Mask a, Mask b) {
    const int ca = std::popcount(a), cb = std::popcount(b);
    return ca != cb ? ca < cb : a < b;
  });

  node_index_.assign(num_states, -1);
  nodes_.resize(num_states);
  for (Mask i = 0; i < num_states; ++i) {
    node_index_[order[i]] = static_cast<int>(i);
    DagNode& n = nodes_[i];
    n.units = SensorSubset(order[i], t);
    SensorSubset raw = SensorSubset::empty_set(num_sensors);
    for (int u : n.units.members()) raw = raw.set_union(units_[u].sensors);
    n.sensors = raw;
  }

  // Acquisition edges add one unit (ascending unit id), classify edge last.
  for (int j = 0; j < static_cast<int>(nodes_.size()); ++j) {
    DagNode& n = nodes_[j];
    for (int u = 0; u < t; ++u) {
      if (n.units.has(u)) continue;
      const int target = node_index_[n.units.with(u).bits()];
      const int e = static_cast<int>(edges_.size());
      edges_.push_back({j, target});
      n.out_edges.push_back(e);
      nodes_[target].in_edges.push_back(e);
    }
    const int e = static_cast<int>(edges_.size());
    edges_.push_back({j, kSinkNode});
    n.out_edges.push_back(e);
  }
}

std::vector<int> AcquisitionDag::nodes_with_cardinality(int card) const {
  std::vector<int> out;
  for (int j = 0; j < num_nodes(); ++j)
    if (nodes_[j].units.count() == card) out.push_back(j);
  return out;
}

AcquisitionDag build_full_dag(int num_sensors, int cap) {
  if (num_sensors < 1) throw ConfigError("build_full_dag: need at least one sensor");
  if (num_sensors > cap)
    throw CapacityError("build_full_dag: " + std::to_string(num_sensors) +
                        " sensors exceed the cap of " + std::to_string(cap) +
                        " (2^M nodes); run subset selection first");
  std::vector<DagUnit> units;
  units.reserve(num_sensors);
  for (int m = 0; m < num_sensors; ++m)
    units.push_back({"sensor" + std::to_string(m),
                     SensorSubset::empty_set(num_sensors).with(m)});
  return AcquisitionDag(AcquisitionDag::Kind::kFull, std::move(units), num_sensors);
}

AcquisitionDag build_union_dag(std::span<const SensorSubset> sigmas, int num_sensors) {
  const int t = static_cast<int>(sigmas.size());
  if (t < 1 || t > 8)
    throw ConfigError("build_union_dag: subset count " + std::to_string(t) +
                      " outside 1..8");
  std::vector<DagUnit> units;
  units.reserve(t);
  for (int j = 0; j < t; ++j) {
    if (sigmas[j].width() != num_sensors)
      throw ConfigError("build_union_dag: sigma width mismatch");
    units.push_back({"sigma" + std::to_string(j), sigmas[j]});
  }
  return AcquisitionDag(AcquisitionDag::Kind::kUnion, std::move(units), num_sensors);
}

double acquisition_cost(const SensorSubset& from, const SensorSubset& to,
                        std::span<const SensorSpec> sensors) {
  double c = 0.0;
  for (int m : to.set_minus(from).members()) c += sensors[m].cost;
  return c;
}

double subset_cost(const SensorSubset& s, std::span<const SensorSpec> sensors) {
  double c = 0.0;
  for (int m : s.members()) c += sensors[m].cost;
  return c;
}

double edge_cost(std::span<const double> x, int label, const SensorSubset& from,
                 const std::optional<SensorSubset>& to, const ClassifierBank& bank,
                 std::span<const SensorSpec> sensors) {
  if (to.has_value()) return acquisition_cost(from, *to, sensors);
  return bank.at(from).predict(x) != label ? 1.0 : 0.0;
}

double subset_loss(std::span<const double> x, int label, const SensorSubset& s,
                   const ClassifierBank& bank, std::span<const SensorSpec> sensors) {
  const double err = bank.at(s).predict(x) != label ? 1.0 : 0.0;
  return err + subset_cost(s, sensors);
}

CostTable CostTable::initialize(const AcquisitionDag& dag, const ClassifierBank& bank,
                                const Dataset& data, std::span<const SensorSpec> sensors) {
  const std::size_t n = data.size();
  CostTable table(n, dag.num_edges());

  for (int e = 0; e < dag.num_edges(); ++e) {
    const DagEdge& edge = dag.edge(e);
    if (!dag.is_classify_edge(e)) {
      const double c = acquisition_cost(dag.node(edge.from).sensors,
                                        dag.node(edge.to).sensors, sensors);
      for (std::size_t i = 0; i < n; ++i) table.at(i, e) = c;
    }
  }

  // Classify edges carry the bank's 0/1 errors; one prediction pass per
  // distinct raw subset covers every node that shares it.
  std::map<Mask, std::vector<int>> predictions;
  for (int j = 0; j < dag.num_nodes(); ++j) {
    const SensorSubset& raw = dag.node(j).sensors;
    auto it = predictions.find(raw.bits());
    if (it == predictions.end())
      it = predictions.emplace(raw.bits(), bank.at(raw).predict_rows(data.features)).first;
    const std::vector<int>& pred = it->second;
    const int e = dag.classify_edge_of(j);
    for (std::size_t i = 0; i < n; ++i)
      table.at(i, e) = pred[i] != data.y(i) ? 1.0 : 0.0;
  }
  return table;
}

void CostTable::add_cost_to_go(int e, std::span<const double> per_example) {
  assert(per_example.size() == n_);
  for (std::size_t i = 0; i < n_; ++i) values_[i * num_edges_ + e] += per_example[i];
  ++propagations_[e];
}

}  // namespace budgetdag
