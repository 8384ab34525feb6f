#include "budgetdag/bank.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>

#include "budgetdag/kernels.hpp"
#include "parallel_guard.hpp"

namespace budgetdag {

Standardizer Standardizer::fit(const MatrixD& x) {
  Standardizer s;
  s.mean.assign(x.cols, 0.0);
  s.scale.assign(x.cols, 1.0);
  if (x.rows == 0) return s;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) s.mean[j] += x.at(i, j);
  for (std::size_t j = 0; j < x.cols; ++j) s.mean[j] /= static_cast<double>(x.rows);
  std::vector<double> var(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const double d = x.at(i, j) - s.mean[j];
      var[j] += d * d;
    }
  for (std::size_t j = 0; j < x.cols; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(x.rows));
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

void Standardizer::apply(MatrixD& x) const {
  for (std::size_t i = 0; i < x.rows; ++i) apply(x.row_span(i));
}

void Standardizer::apply(std::span<double> row) const {
  for (std::size_t j = 0; j < row.size(); ++j)
    row[j] = (row[j] - mean[j]) / scale[j];
}

int majority_label(std::span<const int> labels) {
  std::map<int, std::size_t> counts;
  for (int y : labels) ++counts[y];
  int best = 0;
  std::size_t best_count = 0;
  for (const auto& [y, c] : counts)
    if (c > best_count) {  // ties go to the lowest label
      best = y;
      best_count = c;
    }
  return best;
}

std::vector<int> columns_of(const SensorSubset& s, std::span<const SensorSpec> sensors) {
  std::vector<int> cols;
  for (int m : s.members())
    cols.insert(cols.end(), sensors[m].columns.begin(), sensors[m].columns.end());
  return cols;
}

int SubsetClassifier::predict(std::span<const double> x) const {
  if (heads.empty()) return majority_class;
  const std::vector<double> phi = expand(poly, x);
  auto head_score = [&](const std::vector<double>& w) {
    double z = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) z += phi[j] * w[j];
    return z;
  };
  if (binary_mode) return head_score(heads[0]) > 0.0 ? class_ids[1] : class_ids[0];
  int best = class_ids[0];
  double best_score = head_score(heads[0]);
  for (std::size_t c = 1; c < class_ids.size(); ++c) {
    const double z = head_score(heads[c]);
    if (z > best_score) {
      best_score = z;
      best = class_ids[c];
    }
  }
  return best;
}

std::vector<int> SubsetClassifier::predict_rows(const MatrixD& x) const {
  std::vector<int> out(x.rows, majority_class);
  if (heads.empty()) return out;
  const MatrixD phi = expand_rows(poly, x);
  if (binary_mode) {
    const std::vector<double> z = matvec_scores(phi, heads[0]);
    for (std::size_t i = 0; i < x.rows; ++i)
      out[i] = z[i] > 0.0 ? class_ids[1] : class_ids[0];
    return out;
  }
  std::vector<std::vector<double>> scores(heads.size());
  for (std::size_t c = 0; c < heads.size(); ++c) scores[c] = matvec_scores(phi, heads[c]);
  for (std::size_t i = 0; i < x.rows; ++i) {
    int best = class_ids[0];
    double best_score = scores[0][i];
    for (std::size_t c = 1; c < heads.size(); ++c)
      if (scores[c][i] > best_score) {
        best_score = scores[c][i];
        best = class_ids[c];
      }
    out[i] = best;
  }
  return out;
}

SubsetClassifier train_subset_classifier(const Dataset& train, const SensorSubset& sensors,
                                         std::vector<int> columns, const PolyMap& base_poly,
                                         const OptimizerConfig& opt) {
  if (train.size() == 0) throw TrainError("train_subset_classifier: empty training set");

  SubsetClassifier cls;
  cls.sensors = sensors;
  cls.poly = base_poly;
  cls.poly.input_columns = std::move(columns);
  cls.majority_class = majority_label(train.labels);

  std::set<int> seen(train.labels.begin(), train.labels.end());
  cls.class_ids.assign(seen.begin(), seen.end());
  for (int c = 1; c <= train.num_classes; ++c)
    if (!seen.count(c))
      std::cerr << "warning: class " << c << " absent from training data; "
                << "classifier for " << sensors.to_string() << " cannot predict it\n";

  // The empty subset (or a single seen class) falls back to the majority
  // prior; nothing to fit.
  if (cls.poly.input_columns.empty() || cls.class_ids.size() < 2) {
    cls.class_ids.clear();
    return cls;
  }

  const MatrixD phi = expand_rows(cls.poly, train.features);
  const std::size_t n = train.size();
  std::vector<double> ones(n, 1.0);

  if (cls.class_ids.size() == 2) {
    // One-vs-rest degenerates to a single binary head: positive = higher id.
    cls.binary_mode = true;
    std::vector<std::int8_t> b(n);
    for (std::size_t i = 0; i < n; ++i)
      b[i] = train.y(i) == cls.class_ids[1] ? +1 : -1;
    cls.heads.resize(1);
    cls.heads[0] = fit_weighted_logistic(phi, b, ones, opt);
    return cls;
  }

  cls.heads.resize(cls.class_ids.size());
  const int num_heads = static_cast<int>(cls.class_ids.size());
  detail::ParallelGuard guard;
#pragma omp parallel for if (num_heads > 1) schedule(dynamic)
  for (int c = 0; c < num_heads; ++c) {
    guard.run([&, c] {
      std::vector<std::int8_t> b(n);
      for (std::size_t i = 0; i < n; ++i)
        b[i] = train.y(i) == cls.class_ids[c] ? +1 : -1;
      cls.heads[c] = fit_weighted_logistic(phi, b, ones, opt);
    });
  }
  guard.rethrow_if_failed();
  return cls;
}

const SubsetClassifier& ClassifierBank::at(const SensorSubset& s) const {
  auto it = by_sensors_.find(s.bits());
  if (it == by_sensors_.end())
    throw ConfigError("classifier bank has no entry for subset " + s.to_string());
  return it->second;
}

ClassifierBank train_bank(const Dataset& train, const AcquisitionDag& dag,
                          std::span<const SensorSpec> sensors, const PolyMap& base_poly,
                          const OptimizerConfig& opt) {
  if (train.size() == 0) throw TrainError("train_bank: empty training set");
  ClassifierBank bank(train.num_classes, majority_label(train.labels));
  for (int j = 0; j < dag.num_nodes(); ++j) {
    const SensorSubset& raw = dag.node(j).sensors;
    if (bank.has(raw)) continue;
    bank.insert(train_subset_classifier(train, raw, columns_of(raw, sensors), base_poly, opt));
  }
  return bank;
}

}  // namespace budgetdag
