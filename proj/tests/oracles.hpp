#ifndef BUDGETDAG_TESTS_ORACLES_HPP
#define BUDGETDAG_TESTS_ORACLES_HPP

// Independent oracles used to freeze expected values. Everything here is
// deliberately written from first principles (explicit enumeration, finite
// differences, recursive dynamic programming) and shares no code with the
// implementation paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "budgetdag/bank.hpp"
#include "budgetdag/dag.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag::test {

// Number of degree-d monomials over p variables by explicit multiset
// enumeration (no closed-form formula).
inline std::size_t count_monomials_by_enumeration(int p, int d) {
  std::size_t count = 0;
  std::function<void(int, int)> walk = [&](int start, int remaining) {
    if (remaining == 0) {
      ++count;
      return;
    }
    for (int v = start; v < p; ++v) walk(v, remaining - 1);
  };
  walk(0, d);
  return count;
}

// Independently coded weighted logistic objective for finite differences.
inline double plain_logistic_objective(const MatrixD& phi, const std::vector<std::int8_t>& b,
                                       const std::vector<double>& u,
                                       const std::vector<double>& w, double lambda) {
  double obj = 0.0;
  for (std::size_t i = 0; i < phi.rows; ++i) {
    double z = 0.0;
    for (std::size_t j = 0; j < phi.cols; ++j) z += phi.at(i, j) * w[j];
    const double m = static_cast<double>(b[i]) * z;
    obj += u[i] * (m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)));
  }
  for (double wj : w) obj += lambda * wj * wj;
  return obj;
}

inline std::vector<double> central_difference_gradient(const MatrixD& phi,
                                                       const std::vector<std::int8_t>& b,
                                                       const std::vector<double>& u,
                                                       const std::vector<double>& w,
                                                       double lambda, double h = 1e-5) {
  std::vector<double> grad(w.size());
  std::vector<double> wp = w, wm = w;
  for (std::size_t j = 0; j < w.size(); ++j) {
    wp[j] = w[j] + h;
    wm[j] = w[j] - h;
    grad[j] = (plain_logistic_objective(phi, b, u, wp, lambda) -
               plain_logistic_objective(phi, b, u, wm, lambda)) /
              (2.0 * h);
    wp[j] = w[j];
    wm[j] = w[j];
  }
  return grad;
}

// Minimum of the subset loss over every sensor subset, brute force.
inline double min_loss_over_all_subsets(std::span<const double> x, int label,
                                        const ClassifierBank& bank,
                                        std::span<const SensorSpec> sensors) {
  const int m = static_cast<int>(sensors.size());
  double best = std::numeric_limits<double>::infinity();
  for (Mask bits = 0; bits < (Mask{1} << m); ++bits) {
    const SensorSubset s(bits, m);
    double cost = 0.0;
    for (int k : s.members()) cost += sensors[k].cost;
    const double err = bank.at(s).predict(x) != label ? 1.0 : 0.0;
    best = std::min(best, err + cost);
  }
  return best;
}

// Recursive DP on the DAG: optimal remaining cost from each node for one
// example, using raw per-step costs only.
inline double dag_optimal_cost_to_go(const AcquisitionDag& dag, int node,
                                     std::span<const double> x, int label,
                                     const ClassifierBank& bank,
                                     std::span<const SensorSpec> sensors,
                                     std::vector<double>* memo) {
  if (!std::isnan((*memo)[node])) return (*memo)[node];
  const DagNode& n = dag.node(node);
  double best = bank.at(n.sensors).predict(x) != label ? 1.0 : 0.0;
  for (int e : n.out_edges) {
    if (dag.is_classify_edge(e)) continue;
    const int child = dag.edge(e).to;
    double step = 0.0;
    for (int k : dag.node(child).sensors.set_minus(n.sensors).members())
      step += sensors[k].cost;
    best = std::min(best, step + dag_optimal_cost_to_go(dag, child, x, label, bank,
                                                        sensors, memo));
  }
  (*memo)[node] = best;
  return best;
}

// Coverage value of a collection of subsets under a per-example reward
// function; plain double loop.
inline double coverage_value(const std::vector<SensorSubset>& subsets, std::size_t n,
                             const std::function<bool(std::size_t, const SensorSubset&)>& hit) {
  if (subsets.empty() || n == 0) return 0.0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (const SensorSubset& s : subsets)
      if (hit(i, s)) {
        ++covered;
        break;
      }
  return static_cast<double>(covered) / static_cast<double>(n);
}

// Exhaustive optimum of the coverage objective over all slot allocations
// with total cardinality within the budget.
inline double exhaustive_best_allocation(
    int num_sensors, int t, int budget, std::size_t n,
    const std::function<bool(std::size_t, const SensorSubset&)>& hit) {
  std::vector<SensorSubset> current(t, SensorSubset::empty_set(num_sensors));
  double best = 0.0;
  std::function<void(int, int)> place = [&](int slot, int used) {
    if (slot == t) {
      best = std::max(best, coverage_value(current, n, hit));
      return;
    }
    for (Mask bits = 0; bits < (Mask{1} << num_sensors); ++bits) {
      const SensorSubset s(bits, num_sensors);
      if (used + s.count() > budget) continue;
      current[slot] = s;
      place(slot + 1, used + s.count());
    }
    current[slot] = SensorSubset::empty_set(num_sensors);
  };
  place(0, 0);
  return best;
}

}  // namespace budgetdag::test

#endif
