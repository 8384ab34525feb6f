#include "budgetdag/kernels.hpp"

#include <cmath>
#include <cstring>

#include "parallel_guard.hpp"

namespace budgetdag {

namespace {

constexpr std::size_t kChunkRows = 512;

// log(1 + exp(-m)) without overflow for large |m|.
inline double log1p_exp_neg(double m) {
  if (m > 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

// d/dm log(1+exp(-m)) = -sigma(-m).
inline double sigmoid_neg(double m) {
  if (m > 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double weighted_logistic_objective(const MatrixD& phi, std::span<const std::int8_t> b,
                                   std::span<const double> u, std::span<const double> w,
                                   double lambda) {
  const std::size_t n = phi.rows, d = phi.cols;
  const std::size_t chunks = n == 0 ? 0 : (n + kChunkRows - 1) / kChunkRows;
  std::vector<double> partial(chunks, 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = c * kChunkRows;
    const std::size_t hi = std::min(n, lo + kChunkRows);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      if (u[i] == 0.0) continue;
      const double z = dot(phi.row(i), w.data(), d);
      acc += u[i] * log1p_exp_neg(static_cast<double>(b[i]) * z);
    }
    partial[c] = acc;
  }

  double obj = 0.0;
  for (double p : partial) obj += p;  // chunk order, thread-count independent
  double reg = 0.0;
  for (double wi : w) reg += wi * wi;
  return obj + lambda * reg;
}

double weighted_logistic_objective_grad(const MatrixD& phi, std::span<const std::int8_t> b,
                                        std::span<const double> u, std::span<const double> w,
                                        double lambda, std::span<double> grad) {
  const std::size_t n = phi.rows, d = phi.cols;
  const std::size_t chunks = n == 0 ? 0 : (n + kChunkRows - 1) / kChunkRows;
  std::vector<double> partial_obj(chunks, 0.0);
  MatrixD partial_grad(chunks, d);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = c * kChunkRows;
    const std::size_t hi = std::min(n, lo + kChunkRows);
    double acc = 0.0;
    double* g = partial_grad.row(c);
    for (std::size_t i = lo; i < hi; ++i) {
      if (u[i] == 0.0) continue;
      const double bi = static_cast<double>(b[i]);
      const double* row = phi.row(i);
      const double z = dot(row, w.data(), d);
      acc += u[i] * log1p_exp_neg(bi * z);
      const double coeff = -u[i] * bi * sigmoid_neg(bi * z);
      for (std::size_t j = 0; j < d; ++j) g[j] += coeff * row[j];
    }
    partial_obj[c] = acc;
  }

  double obj = 0.0;
  for (double p : partial_obj) obj += p;
  std::memset(grad.data(), 0, d * sizeof(double));
  for (std::size_t c = 0; c < chunks; ++c) {
    const double* g = partial_grad.row(c);
    for (std::size_t j = 0; j < d; ++j) grad[j] += g[j];
  }

  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    reg += w[j] * w[j];
    grad[j] += 2.0 * lambda * w[j];
  }
  return obj + lambda * reg;
}

MatrixD expand_rows(const PolyMap& poly, const MatrixD& x) {
  MatrixD out(x.rows, expanded_dim(poly));
  detail::ParallelGuard guard;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.rows); ++i)
    guard.run([&, i] { expand_into(poly, x.row_span(i), out.row_span(i)); });
  guard.rethrow_if_failed();
  return out;
}

std::vector<double> matvec_scores(const MatrixD& phi, std::span<const double> w) {
  std::vector<double> scores(phi.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(phi.rows); ++i)
    scores[i] = dot(phi.row(i), w.data(), phi.cols);
  return scores;
}

}  // namespace budgetdag
