#include "budgetdag/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "budgetdag/kernels.hpp"

namespace budgetdag {

double BinaryModel::score(std::span<const double> x) const {
  const std::vector<double> phi = expand(poly, x);
  double z = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) z += phi[j] * weights[j];
  return z;
}

std::vector<double> fit_weighted_logistic(const MatrixD& phi, std::span<const std::int8_t> b,
                                          std::span<const double> u, const OptimizerConfig& opt,
                                          double* final_objective, int* iterations) {
  const std::size_t d = phi.cols;
  if (phi.rows == 0) throw TrainError("weighted logistic: empty training set");
  bool any_positive = false;
  for (double ui : u) {
    if (ui < 0.0) throw TrainError("weighted logistic: negative importance");
    if (ui > 0.0) any_positive = true;
  }
  if (!any_positive) throw TrainError("weighted logistic: all importances are zero");

  std::vector<double> w(d, 0.0), grad(d), trial(d);
  double obj = weighted_logistic_objective_grad(phi, b, u, w, opt.lambda, grad);
  double step = 1.0;
  int iter = 0;

  for (; iter < opt.max_iters; ++iter) {
    double grad_sq = 0.0;
    for (double g : grad) grad_sq += g * g;
    if (grad_sq < 1e-24) break;

    // Armijo backtracking; the accepted step seeds the next iteration.
    step = std::min(step * 2.0, 1e8);
    double new_obj = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = w[j] - step * grad[j];
      new_obj = weighted_logistic_objective(phi, b, u, trial, opt.lambda);
      if (new_obj <= obj - 1e-4 * step * grad_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    w.swap(trial);
    const double decrease = (obj - new_obj) / std::max(std::abs(obj), 1e-12);
    obj = weighted_logistic_objective_grad(phi, b, u, w, opt.lambda, grad);
    if (decrease < opt.tol) {
      ++iter;
      break;
    }
  }

  for (double wj : w)
    if (!std::isfinite(wj)) throw TrainError("weighted logistic: non-finite weights");
  if (final_objective) *final_objective = obj;
  if (iterations) *iterations = iter;
  return w;
}

BinaryModel train_weighted_binary(const MatrixD& x_raw, std::span<const std::int8_t> b,
                                  std::span<const double> u, const PolyMap& poly,
                                  const OptimizerConfig& opt) {
  const MatrixD phi = expand_rows(poly, x_raw);
  BinaryModel model;
  model.poly = poly;
  model.weights = fit_weighted_logistic(phi, b, u, opt, &model.final_objective,
                                        &model.iterations);
  return model;
}

}  // namespace budgetdag
