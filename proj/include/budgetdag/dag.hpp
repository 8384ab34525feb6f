#ifndef BUDGETDAG_DAG_HPP
#define BUDGETDAG_DAG_HPP

#include <optional>
#include <span>
#include <vector>

#include "budgetdag/types.hpp"

namespace budgetdag {

class ClassifierBank;

// One acquirable unit in the DAG: a single sensor in the full lattice, or a
// selected sensor subset (super-sensor) in the union construction.
struct DagUnit {
  std::string name;
  SensorSubset sensors;  // raw sensor ids covered by this unit
};

// to == kSinkNode marks a classify edge.
struct DagEdge {
  int from = 0;
  int to = 0;
};

struct DagNode {
  SensorSubset units;    // mask over DagUnit ids; identifies the state
  SensorSubset sensors;  // union of the units' raw sensors
  std::vector<int> out_edges;  // acquisition edges by added unit id, classify edge last
  std::vector<int> in_edges;
};

// States are subset nodes ordered by (cardinality, bitmask); node 0 is the
// empty set and the root. The stop-and-classify sink is implicit: classify
// edges point at kSinkNode and the sink has no outgoing edges.
class AcquisitionDag {
 public:
  static constexpr int kSinkNode = -1;

  enum class Kind { kFull, kUnion };

  AcquisitionDag() = default;
  AcquisitionDag(Kind kind, std::vector<DagUnit> units, int num_sensors);

  Kind kind() const { return kind_; }
  int num_units() const { return static_cast<int>(units_.size()); }
  int num_sensors() const { return num_sensors_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int root() const { return 0; }

  const DagUnit& unit(int u) const { return units_[u]; }
  std::span<const DagUnit> units() const { return units_; }
  const DagNode& node(int id) const { return nodes_[id]; }
  const DagEdge& edge(int id) const { return edges_[id]; }
  int node_id(Mask unit_bits) const { return node_index_[unit_bits]; }

  bool is_classify_edge(int e) const { return edges_[e].to == kSinkNode; }
  int classify_edge_of(int node) const { return nodes_[node].out_edges.back(); }

  // Node ids of a given subset cardinality, ascending bitmask (contiguous).
  std::vector<int> nodes_with_cardinality(int card) const;

 private:
  Kind kind_ = Kind::kFull;
  int num_sensors_ = 0;
  std::vector<DagUnit> units_;
  std::vector<DagNode> nodes_;
  std::vector<DagEdge> edges_;
  std::vector<int> node_index_;  // unit bits -> node id
};

inline constexpr int kDefaultFullDagCap = 12;

// Full lattice over all 2^M sensor subsets. Throws CapacityError beyond the
// cap; large sensor counts go through subset selection instead.
AcquisitionDag build_full_dag(int num_sensors, int cap = kDefaultFullDagCap);

// Union DAG over selected subsets: each sigma acts as one unit, states are
// unions of acquired sigmas at the raw-sensor level. 1 <= t <= 8.
AcquisitionDag build_union_dag(std::span<const SensorSubset> sigmas, int num_sensors);

// Sum of c_t over sensors in `to` but not in `from`, ascending sensor id.
double acquisition_cost(const SensorSubset& from, const SensorSubset& to,
                        std::span<const SensorSpec> sensors);

// Canonical cost of a subset: sum over members in ascending id order.
double subset_cost(const SensorSubset& s, std::span<const SensorSpec> sensors);

// Step-wise edge cost: added-sensor cost for acquisition edges, 0/1
// classification error of f_from when `to` is absent (stop and classify).
double edge_cost(std::span<const double> x, int label, const SensorSubset& from,
                 const std::optional<SensorSubset>& to, const ClassifierBank& bank,
                 std::span<const SensorSpec> sensors);

// 0/1 error of f_s plus the canonical cost of s.
double subset_loss(std::span<const double> x, int label, const SensorSubset& s,
                   const ClassifierBank& bank, std::span<const SensorSpec> sensors);

// Per-example, per-edge step-wise costs. Acquisition entries start at the
// added-sensor cost and only grow as cost-to-go is folded in; classify
// entries are the 0/1 errors of the bank and are never rewritten.
class CostTable {
 public:
  CostTable() = default;
  CostTable(std::size_t n, std::size_t num_edges)
      : n_(n), num_edges_(num_edges), values_(n * num_edges, 0.0),
        propagations_(num_edges, 0) {}

  static CostTable initialize(const AcquisitionDag& dag, const ClassifierBank& bank,
                              const Dataset& data, std::span<const SensorSpec> sensors);

  std::size_t num_examples() const { return n_; }
  double at(std::size_t i, int e) const { return values_[i * num_edges_ + e]; }
  double& at(std::size_t i, int e) { return values_[i * num_edges_ + e]; }

  // Single propagation pass per edge; counted so training can be audited.
  void add_cost_to_go(int e, std::span<const double> per_example);
  int propagation_count(int e) const { return propagations_[e]; }

 private:
  std::size_t n_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<double> values_;
  std::vector<int> propagations_;
};

}  // namespace budgetdag

#endif
