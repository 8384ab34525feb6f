// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any fail. Oracles live in oracles.hpp
// and are independent of the implementation paths under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "budgetdag/csv.hpp"
#include "budgetdag/graph_reduce.hpp"
#include "budgetdag/kernels.hpp"
#include "budgetdag/model_io.hpp"
#include "budgetdag/subset_select.hpp"
#include "budgetdag/sweep.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace budgetdag;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1. DP-oracle equivalence -------------------------------------------

Outcome dp_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset d = test::make_sensor_dataset(50, 3, 0.4, 301);
  const AcquisitionDag dag = build_full_dag(3);
  std::vector<SensorSpec> sensors = {
      {0, "s0", {0}, 0.25}, {1, "s1", {1}, 0.5}, {2, "s2", {2}, 0.25}};
  auto bank = std::make_shared<const ClassifierBank>(
      train_bank(d, dag, sensors, PolyMap{1, {}, true, true}, {}));

  CslConfig csl;
  csl.backend = CslBackend::kMemorizing;
  const PolicyModel policy = graph_reduce_train(d, dag, bank, sensors, csl);

  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const PathTrace t = policy.infer(d.x(i));
    const double realized =
        (t.predicted_label != d.y(i) ? 1.0 : 0.0) + t.acquisition_cost;
    const double oracle = test::min_loss_over_all_subsets(d.x(i), d.y(i), *bank, sensors);
    if (realized != oracle) ++mismatches;  // exact equality, dyadic costs
  }
  const double elapsed = seconds_since(t0);

  Outcome out;
  out.pass = mismatches == 0 && elapsed < 10.0;
  out.detail = "mismatches " + std::to_string(mismatches) + "/50, " +
               format_double(elapsed) + "s";
  return out;
}

// ---- 2. Filter-tree zero regret ------------------------------------------

Outcome filter_tree_regret() {
  const auto t0 = std::chrono::steady_clock::now();
  const CslInstance inst = test::make_quadrant_instance(1000, 0.1, 0.5, 1.5, 302);

  CslConfig cfg;
  cfg.backend = CslBackend::kFilterTree;
  cfg.poly = PolyMap{1, {0, 1}, true, true};
  const CslModel model = learn(inst, cfg);

  double realized = 0.0, minimum = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    realized += inst.costs.at(i, model.predict(inst.x.row_span(i)));
    double best = inst.costs.at(i, 0);
    for (int a = 1; a < inst.num_actions(); ++a) best = std::min(best, inst.costs.at(i, a));
    minimum += best;
  }
  const double elapsed = seconds_since(t0);

  Outcome out;
  out.pass = realized <= 1.01 * minimum && elapsed < 30.0;
  out.detail = "realized " + format_double(realized) + " vs minimum " +
               format_double(minimum) + ", " + format_double(elapsed) + "s";
  return out;
}

// ---- 3. Submodularity suite ----------------------------------------------

Outcome submodularity_suite() {
  test::Rng rng(303);
  std::size_t violations = 0, triples = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng.uniform_int(0, 19);
    const int t = 2 + rng.uniform_int(0, 3);
    const double density = rng.uniform(0.15, 0.8);
    std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(t));
    for (auto& row : m)
      for (auto& v : row) v = rng.uniform() < density ? 1 : 0;

    for (Mask s_bits = 0; s_bits < (1u << t); ++s_bits) {
      std::vector<int> s;
      for (int j = 0; j < t; ++j)
        if ((s_bits >> j) & 1u) s.push_back(j);
      for (int a = 0; a < t; ++a) {
        if ((s_bits >> a) & 1u) continue;
        for (int b = 0; b < t; ++b) {
          if (b == a || ((s_bits >> b) & 1u)) continue;
          ++triples;
          if (!marginal_gain_check(m, s, a, b)) ++violations;
        }
      }
    }
  }
  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(triples) + " triples over 1000 matrices, " +
               std::to_string(violations) + " violations";
  return out;
}

// ---- 4. Greedy approximation ---------------------------------------------

Outcome greedy_approximation() {
  const auto t0 = std::chrono::steady_clock::now();
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  test::Rng rng(304);
  int violations = 0;
  double worst_ratio = 1.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 40;
    // Monotone "nested correct set" rewards: an example is classified
    // correctly once any sensor from its helpful set is acquired.
    std::vector<Mask> helpful(n);
    for (std::size_t i = 0; i < n; ++i)
      helpful[i] = rng.uniform() < 0.15 ? 0 : rng.mask(6);

    LookupRewardOracle oracle(
        n, [&](std::size_t i, const SensorSubset& s) { return (helpful[i] & s.bits()) != 0; });
    const GreedyResult greedy = greedy_select_core(oracle, 6, 2, 3);

    const double optimum = test::exhaustive_best_allocation(
        6, 2, 3, n,
        [&](std::size_t i, const SensorSubset& s) { return (helpful[i] & s.bits()) != 0; });
    if (optimum > 0.0) worst_ratio = std::min(worst_ratio, greedy.reward_g / optimum);
    if (greedy.reward_g < bound * optimum - 1e-12) ++violations;
  }
  const double elapsed = seconds_since(t0);

  Outcome out;
  out.pass = violations == 0 && elapsed < 60.0;
  out.detail = "worst greedy/optimum " + format_double(worst_ratio) + " (bound " +
               format_double(bound) + "), " + std::to_string(violations) + " violations, " +
               format_double(elapsed) + "s";
  return out;
}

// ---- 5/6. Budget curve on the clinical fixture ----------------------------

fs::path write_clinical_csv(const fs::path& dir, std::size_t n, std::uint64_t seed) {
  const Dataset d = test::make_clinical_dataset(n, seed);
  CsvTable table;
  table.values = MatrixD(n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 8; ++j) table.values.at(i, j) = d.features.at(i, j);
    table.values.at(i, 8) = d.labels[i];
  }
  const fs::path path = dir / "clinical.csv";
  write_csv(path, table);
  return path;
}

ExperimentConfig clinical_config(const fs::path& dir) {
  ExperimentConfig cfg;
  cfg.train_csv = (dir / "clinical.csv").string();
  cfg.sensors = {{"vitals", {0, 2, 3, 5, 6, 7}, 1.0},
                 {"glucose", {1}, 1.0},
                 {"insulin", {4}, 1.0}};
  cfg.poly_degree = 3;
  cfg.homogeneous = true;
  cfg.seed = 13;
  cfg.output_dir = (dir / "out").string();
  return cfg;
}

struct CurveRun {
  BudgetCurve curve;
  ExperimentConfig config;
  double full_error = 0.0;
  double elapsed = 0.0;
};

CurveRun run_clinical_sweep(const fs::path& dir) {
  write_clinical_csv(dir, 768, 305);
  CurveRun run;
  run.config = clinical_config(dir);

  const auto t0 = std::chrono::steady_clock::now();
  run.curve = run_sweep(run.config);

  // Reference: a one-vs-rest classifier over all features on the same split.
  const IngestResult data = ingest(run.config);
  const SubsetClassifier full = train_subset_classifier(
      data.train, SensorSubset::full_set(3), {0, 1, 2, 3, 4, 5, 6, 7},
      PolyMap{run.config.poly_degree, {}, true, true}, run.config.optimizer);
  const std::vector<int> pred = full.predict_rows(data.test.features);
  double errors = 0.0;
  for (std::size_t i = 0; i < data.test.size(); ++i)
    if (pred[i] != data.test.y(i)) errors += 1.0;
  run.full_error = errors / static_cast<double>(data.test.size());
  run.elapsed = seconds_since(t0);
  return run;
}

Outcome budget_curve_endpoints(const CurveRun& run) {
  Outcome out;
  if (run.curve.rows.size() != run.config.deltas().size()) {
    out.detail = "row count mismatch";
    return out;
  }
  const CurveRow& free_row = run.curve.rows.front();   // delta = 0
  const CurveRow& costly_row = run.curve.rows.back();  // delta = M = 3

  const bool error_ok = free_row.test_error <= run.full_error + 0.02;
  const bool order_ok = free_row.avg_sensors >= costly_row.avg_sensors;
  const bool stop_ok = costly_row.avg_sensors <= 0.05;
  const bool time_ok = run.elapsed < 600.0;

  out.pass = error_ok && order_ok && stop_ok && time_ok;
  out.detail = "err(0) " + format_double(free_row.test_error) + " vs full " +
               format_double(run.full_error) + ", sensors(0) " +
               format_double(free_row.avg_sensors) + ", sensors(3) " +
               format_double(costly_row.avg_sensors) + ", " + format_double(run.elapsed) + "s";
  return out;
}

Outcome accounting_invariants(const fs::path& dir) {
  CurveRun small;
  small.config = clinical_config(dir);
  small.config.sweep_deltas = {0.0, 0.5, 3.0};
  small.config.optimizer.max_iters = 150;
  small.config.output_dir = (dir / "rerun").string();

  // Identical config and seed, run twice; bytes are captured in between.
  const BudgetCurve first = run_sweep(small.config);
  const std::string curve_a = read_file(dir / "rerun" / "curve.csv");
  const std::string model_a = read_file(dir / "rerun" / "model_001.json");
  run_sweep(small.config);
  const std::string curve_b = read_file(dir / "rerun" / "curve.csv");
  const std::string model_b = read_file(dir / "rerun" / "model_001.json");

  const bool bytes_ok = !curve_a.empty() && curve_a == curve_b;
  const bool models_ok = !model_a.empty() && model_a == model_b;

  // Per-example and aggregate accounting on the delta = 0.5 model.
  const TrainedModel model = load_model(dir / "rerun" / "model_001.json");
  const IngestResult data = ingest(small.config);
  bool per_example_ok = true;
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    const PathTrace t = model.policy.infer(data.test.x(i));
    double walked = 0.0;  // per-step charges in path order
    SensorSubset held = SensorSubset::empty_set(3);
    for (std::size_t s = 0; s + 1 < t.visited_units.size(); ++s) {
      const SensorSubset next(t.visited_units[s + 1], 3);
      SensorSubset next_raw = SensorSubset::empty_set(3);
      for (int u : next.members())
        next_raw = next_raw.set_union(model.policy.dag().unit(u).sensors);
      walked += acquisition_cost(held, next_raw, model.policy.sensors());
      held = next_raw;
    }
    if (walked != t.acquisition_cost) per_example_ok = false;
    if (!(held == t.final_sensors)) per_example_ok = false;
  }
  const RiskSummary risk = empirical_risk(model.policy, data.test);
  const bool aggregate_ok = risk.avg_loss == risk.avg_error + risk.avg_cost;
  const bool rows_ok = first.rows.size() == 3;

  Outcome out;
  out.pass = bytes_ok && models_ok && per_example_ok && aggregate_ok && rows_ok;
  out.detail = std::string("curve bytes ") + (bytes_ok ? "identical" : "DIFFER") +
               ", model bytes " + (models_ok ? "identical" : "DIFFER") +
               ", per-example cost " + (per_example_ok ? "exact" : "MISMATCH") +
               ", loss identity " + (aggregate_ok ? "exact" : "MISMATCH");
  return out;
}

// ---- 7. Gradient check -----------------------------------------------------

Outcome gradient_check() {
  test::Rng rng(307);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 10 + rng.uniform_int(0, 30);
    const std::size_t dim = 2 + rng.uniform_int(0, 6);
    MatrixD phi(n, dim);
    std::vector<std::int8_t> b(n);
    std::vector<double> u(n), w(dim);
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = rng.uniform() < 0.5 ? -1 : +1;
      u[i] = rng.uniform(0.0, 2.0);
      for (std::size_t j = 0; j < dim; ++j) phi.at(i, j) = rng.normal();
    }
    for (std::size_t j = 0; j < dim; ++j) w[j] = rng.normal(0.0, 0.4);
    const double lambda = 1e-3;

    std::vector<double> analytic(dim);
    weighted_logistic_objective_grad(phi, b, u, w, lambda, analytic);
    const std::vector<double> numeric =
        test::central_difference_gradient(phi, b, u, w, lambda);
    for (std::size_t j = 0; j < dim; ++j) {
      const double rel =
          std::abs(analytic[j] - numeric[j]) / std::max(std::abs(numeric[j]), 1e-8);
      worst = std::max(worst, rel);
    }
  }
  Outcome out;
  out.pass = worst <= 1e-5;
  out.detail = "worst relative error " + format_double(worst);
  return out;
}

// ---- 8. Union-DAG correctness ----------------------------------------------

Outcome union_dag_correctness() {
  const int m = 5;
  std::vector<SensorSubset> sigmas = {
      SensorSubset(0b00011, m), SensorSubset(0b00110, m), SensorSubset(0b11100, m)};
  std::vector<SensorSpec> sensors;
  const double costs[5] = {0.25, 0.5, 0.75, 0.25, 0.5};
  for (int k = 0; k < m; ++k) sensors.push_back({k, "s" + std::to_string(k), {k}, costs[k]});

  const AcquisitionDag dag = build_union_dag(sigmas, m);

  // Enumerate every acquisition path and charge edges in path order.
  std::size_t paths = 0, mismatches = 0;
  std::function<void(int, double)> walk = [&](int node, double walked) {
    ++paths;
    const double direct = subset_cost(dag.node(node).sensors, sensors);
    if (walked != direct) ++mismatches;  // exact: dyadic costs
    for (int e : dag.node(node).out_edges) {
      if (dag.is_classify_edge(e)) continue;
      const int next = dag.edge(e).to;
      walk(next, walked + acquisition_cost(dag.node(node).sensors,
                                           dag.node(next).sensors, sensors));
    }
  };
  walk(dag.root(), 0.0);

  Outcome out;
  out.pass = mismatches == 0 && paths > 1;
  out.detail = std::to_string(paths) + " enumerated paths, " + std::to_string(mismatches) +
               " cost mismatches";
  return out;
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "budgetdag_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  criteria.emplace_back("1 DP-oracle equivalence (M=3, n=50, memorizing learner)",
                        dp_oracle_equivalence);
  criteria.emplace_back("2 filter-tree zero regret (k=4, n=1000)", filter_tree_regret);
  criteria.emplace_back("3 submodularity suite (1000 frozen reward matrices)",
                        submodularity_suite);
  criteria.emplace_back("4 greedy (1-1/e) approximation (100 frozen oracles)",
                        greedy_approximation);

  CurveRun clinical;
  criteria.emplace_back("5 budget-curve endpoints (clinical fixture, degree 3)",
                        [&]() {
                          clinical = run_clinical_sweep(dir);
                          return budget_curve_endpoints(clinical);
                        });
  criteria.emplace_back("6 accounting invariants and byte-identical rerun",
                        [&]() { return accounting_invariants(dir); });
  criteria.emplace_back("7 weighted-logistic gradient check (50 instances)", gradient_check);
  criteria.emplace_back("8 union-DAG cost accounting with overlapping subsets",
                        union_dag_correctness);

  bool all_pass = true;
  for (auto& [name, fn] : criteria) {
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    all_pass = all_pass && outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << name << " — "
              << outcome.detail << "\n";
  }
  return all_pass ? 0 : 1;
}
