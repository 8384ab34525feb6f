#include "budgetdag/reference.hpp"

#include <cmath>

namespace budgetdag::ref {

namespace {

inline double log1p_exp_neg(double m) {
  if (m > 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

inline double sigmoid_neg(double m) {
  if (m > 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

double weighted_logistic_objective(const MatrixD& phi, std::span<const std::int8_t> b,
                                   std::span<const double> u, std::span<const double> w,
                                   double lambda) {
  double obj = 0.0;
  for (std::size_t i = 0; i < phi.rows; ++i) {
    if (u[i] == 0.0) continue;
    double z = 0.0;
    for (std::size_t j = 0; j < phi.cols; ++j) z += phi.at(i, j) * w[j];
    obj += u[i] * log1p_exp_neg(static_cast<double>(b[i]) * z);
  }
  for (double wi : w) obj += lambda * wi * wi;
  return obj;
}

double weighted_logistic_objective_grad(const MatrixD& phi, std::span<const std::int8_t> b,
                                        std::span<const double> u, std::span<const double> w,
                                        double lambda, std::span<double> grad) {
  double obj = 0.0;
  for (std::size_t j = 0; j < phi.cols; ++j) grad[j] = 0.0;
  for (std::size_t i = 0; i < phi.rows; ++i) {
    if (u[i] == 0.0) continue;
    const double bi = static_cast<double>(b[i]);
    double z = 0.0;
    for (std::size_t j = 0; j < phi.cols; ++j) z += phi.at(i, j) * w[j];
    obj += u[i] * log1p_exp_neg(bi * z);
    const double coeff = -u[i] * bi * sigmoid_neg(bi * z);
    for (std::size_t j = 0; j < phi.cols; ++j) grad[j] += coeff * phi.at(i, j);
  }
  for (std::size_t j = 0; j < phi.cols; ++j) {
    obj += lambda * w[j] * w[j];
    grad[j] += 2.0 * lambda * w[j];
  }
  return obj;
}

MatrixD expand_rows(const PolyMap& poly, const MatrixD& x) {
  MatrixD out(x.rows, expanded_dim(poly));
  for (std::size_t i = 0; i < x.rows; ++i)
    expand_into(poly, x.row_span(i), out.row_span(i));
  return out;
}

std::vector<double> matvec_scores(const MatrixD& phi, std::span<const double> w) {
  std::vector<double> scores(phi.rows);
  for (std::size_t i = 0; i < phi.rows; ++i) {
    double z = 0.0;
    for (std::size_t j = 0; j < phi.cols; ++j) z += phi.at(i, j) * w[j];
    scores[i] = z;
  }
  return scores;
}

}  // namespace budgetdag::ref
