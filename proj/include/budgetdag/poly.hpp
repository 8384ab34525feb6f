#ifndef BUDGETDAG_POLY_HPP
#define BUDGETDAG_POLY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "budgetdag/types.hpp"

namespace budgetdag {

// Polynomial feature map over a set of raw columns. In homogeneous mode the
// output is every monomial of degree exactly `degree` (with repetition) in
// lexicographic multiset order; otherwise all degrees 1..degree are emitted.
// The bias term, when present, comes first.
struct PolyMap {
  int degree = 1;
  std::vector<int> input_columns;
  bool include_bias = true;
  bool homogeneous = true;
};

std::size_t expanded_dim(const PolyMap& poly);

// x is the full raw feature vector; the map projects input_columns itself.
void expand_into(const PolyMap& poly, std::span<const double> x, std::span<double> out);
std::vector<double> expand(const PolyMap& poly, std::span<const double> x);

}  // namespace budgetdag

#endif
