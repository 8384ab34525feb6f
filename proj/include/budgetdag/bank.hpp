#ifndef BUDGETDAG_BANK_HPP
#define BUDGETDAG_BANK_HPP

#include <map>
#include <span>
#include <vector>

#include "budgetdag/dag.hpp"
#include "budgetdag/logistic.hpp"
#include "budgetdag/poly.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag {

// Per-column zero-mean unit-variance transform fit on the training split.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1 for constant columns

  static Standardizer fit(const MatrixD& x);
  void apply(MatrixD& x) const;
  void apply(std::span<double> row) const;
};

// Multiclass one-vs-rest classifier restricted to one sensor subset's
// columns. With two classes this degenerates to a single binary head.
// The empty subset carries no heads and predicts the majority class.
struct SubsetClassifier {
  SensorSubset sensors;
  PolyMap poly;                    // input_columns = columns of `sensors`
  std::vector<int> class_ids;      // classes seen in training, ascending
  std::vector<std::vector<double>> heads;  // one weight vector per class id
  bool binary_mode = false;        // single head: class_ids[1] vs class_ids[0]
  int majority_class = 1;

  int predict(std::span<const double> x) const;
  std::vector<int> predict_rows(const MatrixD& x) const;
};

// f_{s_1}..f_{s_K}: one classifier per distinct raw-sensor subset in the DAG.
class ClassifierBank {
 public:
  ClassifierBank() = default;
  ClassifierBank(int num_classes, int majority_class)
      : num_classes_(num_classes), majority_class_(majority_class) {}

  int num_classes() const { return num_classes_; }
  int majority_class() const { return majority_class_; }
  bool has(const SensorSubset& s) const { return by_sensors_.count(s.bits()) > 0; }
  // Throws ConfigError when no classifier exists for the subset.
  const SubsetClassifier& at(const SensorSubset& s) const;
  void insert(SubsetClassifier c) { by_sensors_[c.sensors.bits()] = std::move(c); }
  int predict(const SensorSubset& s, std::span<const double> x) const { return at(s).predict(x); }
  const std::map<Mask, SubsetClassifier>& entries() const { return by_sensors_; }

 private:
  std::map<Mask, SubsetClassifier> by_sensors_;
  int num_classes_ = 0;
  int majority_class_ = 1;
};

// One-vs-rest training of a single subset classifier on the given columns.
// Classes absent from the training labels get a warning and stay
// unpredictable for this classifier.
SubsetClassifier train_subset_classifier(const Dataset& train, const SensorSubset& sensors,
                                         std::vector<int> columns, const PolyMap& base_poly,
                                         const OptimizerConfig& opt);

// Trains a classifier for every distinct raw-sensor subset of the DAG.
ClassifierBank train_bank(const Dataset& train, const AcquisitionDag& dag,
                          std::span<const SensorSpec> sensors, const PolyMap& base_poly,
                          const OptimizerConfig& opt);

int majority_label(std::span<const int> labels);

std::vector<int> columns_of(const SensorSubset& s, std::span<const SensorSpec> sensors);

}  // namespace budgetdag

#endif
