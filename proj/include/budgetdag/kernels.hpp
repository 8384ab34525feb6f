#ifndef BUDGETDAG_KERNELS_HPP
#define BUDGETDAG_KERNELS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "budgetdag/poly.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag {

// OpenMP-parallel inner kernels. Reductions accumulate fixed-size row chunks
// and combine partials in chunk order, so results are identical for any
// thread count (including one). Serial reference versions live in
// reference.hpp and are compared against these in tests and benchmarks.

// Weighted logistic objective sum_i u_i*log(1+exp(-b_i*(w.phi_i))) + lambda*|w|^2.
double weighted_logistic_objective(const MatrixD& phi, std::span<const std::int8_t> b,
                                   std::span<const double> u, std::span<const double> w,
                                   double lambda);

// Objective plus analytic gradient written into grad (size phi.cols).
double weighted_logistic_objective_grad(const MatrixD& phi, std::span<const std::int8_t> b,
                                        std::span<const double> u, std::span<const double> w,
                                        double lambda, std::span<double> grad);

// Expand every row of X through the polynomial map.
MatrixD expand_rows(const PolyMap& poly, const MatrixD& x);

// Row scores phi * w.
std::vector<double> matvec_scores(const MatrixD& phi, std::span<const double> w);

}  // namespace budgetdag

#endif
