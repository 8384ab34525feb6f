#ifndef BUDGETDAG_LOGISTIC_HPP
#define BUDGETDAG_LOGISTIC_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "budgetdag/poly.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag {

struct OptimizerConfig {
  double lambda = 1e-4;
  int max_iters = 500;
  double tol = 1e-6;  // relative objective decrease
};

// Importance-weighted binary classifier over the expanded feature space.
// Decision is the sign of the score; a score of exactly zero counts as +1.
struct BinaryModel {
  std::vector<double> weights;
  PolyMap poly;
  double final_objective = 0.0;
  int iterations = 0;

  double score(std::span<const double> x) const;
  int predict_sign(std::span<const double> x) const { return score(x) >= 0.0 ? +1 : -1; }
};

// Full-batch gradient descent with Armijo backtracking from a zero start.
// Deterministic: no randomness anywhere in the optimizer.
// Throws TrainError when every importance is zero.
BinaryModel train_weighted_binary(const MatrixD& x_raw, std::span<const std::int8_t> b,
                                  std::span<const double> u, const PolyMap& poly,
                                  const OptimizerConfig& opt);

// Same optimizer on a pre-expanded design matrix; used when the expansion is
// shared across several heads.
std::vector<double> fit_weighted_logistic(const MatrixD& phi, std::span<const std::int8_t> b,
                                          std::span<const double> u, const OptimizerConfig& opt,
                                          double* final_objective = nullptr,
                                          int* iterations = nullptr);

}  // namespace budgetdag

#endif
