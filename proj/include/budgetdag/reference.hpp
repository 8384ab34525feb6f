#ifndef BUDGETDAG_REFERENCE_HPP
#define BUDGETDAG_REFERENCE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "budgetdag/poly.hpp"
#include "budgetdag/types.hpp"

namespace budgetdag::ref {

// Plain single-threaded loops over examples in index order. These are the
// reference implementations the parallel kernels are tested and benchmarked
// against; they are not used on any production path.

double weighted_logistic_objective(const MatrixD& phi, std::span<const std::int8_t> b,
                                   std::span<const double> u, std::span<const double> w,
                                   double lambda);

double weighted_logistic_objective_grad(const MatrixD& phi, std::span<const std::int8_t> b,
                                        std::span<const double> u, std::span<const double> w,
                                        double lambda, std::span<double> grad);

MatrixD expand_rows(const PolyMap& poly, const MatrixD& x);

std::vector<double> matvec_scores(const MatrixD& phi, std::span<const double> w);

}  // namespace budgetdag::ref

#endif
