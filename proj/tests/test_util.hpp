#ifndef BUDGETDAG_TESTS_TEST_UTIL_HPP
#define BUDGETDAG_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "budgetdag/bank.hpp"
#include "budgetdag/filter_tree.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag::test {

// Deterministic generator with explicit draws, so fixtures do not depend on
// standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng_() % span);
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    // Box-Muller on explicit uniforms.
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Mask mask(int width) { return static_cast<Mask>(rng_() & ((1u << width) - 1)); }

 private:
  std::mt19937_64 rng_;
};

// n points in [-1,1]^dim labeled by a fixed hyperplane, margin enforced.
inline Dataset make_separable(std::size_t n, std::size_t dim, double margin,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> normal_vec(dim);
  for (std::size_t j = 0; j < dim; ++j) normal_vec[j] = rng.uniform(-1.0, 1.0);
  double norm = 0.0;
  for (double v : normal_vec) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : normal_vec) v /= norm;

  Dataset d;
  d.features = MatrixD(n, dim);
  d.labels.resize(n);
  d.num_classes = 2;
  std::size_t i = 0;
  while (i < n) {
    std::vector<double> x(dim);
    double score = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      x[j] = rng.uniform(-1.0, 1.0);
      score += x[j] * normal_vec[j];
    }
    if (std::abs(score) < margin) continue;
    for (std::size_t j = 0; j < dim; ++j) d.features.at(i, j) = x[j];
    d.labels[i] = score > 0.0 ? 2 : 1;
    ++i;
  }
  return d;
}

// Small multi-sensor dataset: one column per sensor, binary labels driven by
// a noisy linear score so no single sensor is sufficient.
inline Dataset make_sensor_dataset(std::size_t n, int num_sensors, double noise_sd,
                                   std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.features = MatrixD(n, num_sensors);
  d.labels.resize(n);
  d.num_classes = 2;
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    for (int j = 0; j < num_sensors; ++j) {
      const double v = rng.uniform(-1.0, 1.0);
      d.features.at(i, j) = v;
      score += (j + 1) * v;  // later sensors more informative
    }
    score += rng.normal(0.0, noise_sd);
    d.labels[i] = score > 0.0 ? 2 : 1;
  }
  return d;
}

// Four-quadrant CSL instance: the cheap action is the example's quadrant.
// Every tournament node's induced binary problem is linearly separable with
// the given margin. cheap/expensive must differ.
inline CslInstance make_quadrant_instance(std::size_t n, double margin, double cheap,
                                          double expensive, std::uint64_t seed) {
  Rng rng(seed);
  CslInstance inst;
  inst.x = MatrixD(n, 2);
  inst.costs = MatrixD(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    double px = 0.0, py = 0.0;
    while (std::abs(px) < margin) px = rng.uniform(-1.0, 1.0);
    while (std::abs(py) < margin) py = rng.uniform(-1.0, 1.0);
    inst.x.at(i, 0) = px;
    inst.x.at(i, 1) = py;
    const int quadrant = (px > 0.0 ? 0 : 1) + (py > 0.0 ? 0 : 2);
    for (int a = 0; a < 4; ++a) inst.costs.at(i, a) = a == quadrant ? cheap : expensive;
  }
  return inst;
}

// Hand-built bank entry that always answers `label`.
inline SubsetClassifier constant_classifier(const SensorSubset& sensors, int label) {
  SubsetClassifier c;
  c.sensors = sensors;
  c.majority_class = label;
  return c;
}

// Pima-shaped synthetic table: 8 physiological columns, binary outcome
// driven mostly by columns 1 (glucose), 5 (bmi) and 7 (age).
inline Dataset make_clinical_dataset(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.features = MatrixD(n, 8);
  d.labels.resize(n);
  d.num_classes = 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double pregnancies = std::floor(rng.uniform(0.0, 12.0));
    const double glucose = rng.normal(120.0, 30.0);
    const double pressure = rng.normal(70.0, 12.0);
    const double skin = rng.normal(25.0, 9.0);
    const double insulin = std::max(0.0, rng.normal(80.0, 45.0));
    const double bmi = rng.normal(32.0, 7.0);
    const double pedigree = std::max(0.05, rng.normal(0.5, 0.3));
    const double age = 21.0 + std::floor(std::max(0.0, rng.normal(12.0, 10.0)));
    d.features.at(i, 0) = pregnancies;
    d.features.at(i, 1) = glucose;
    d.features.at(i, 2) = pressure;
    d.features.at(i, 3) = skin;
    d.features.at(i, 4) = insulin;
    d.features.at(i, 5) = bmi;
    d.features.at(i, 6) = pedigree;
    d.features.at(i, 7) = age;
    const double risk = 0.065 * (glucose - 120.0) + 0.16 * (bmi - 32.0) +
                        0.07 * (age - 33.0) + 1.2 * (pedigree - 0.5) +
                        0.009 * (insulin - 80.0) + rng.normal(0.0, 0.55);
    d.labels[i] = risk > 0.55 ? 2 : 1;
  }
  return d;
}

}  // namespace budgetdag::test

#endif
