#include "budgetdag/poly.hpp"

#include <stdexcept>

namespace budgetdag {

namespace {

std::size_t monomial_count(std::size_t p, int d) {
  // C(p + d - 1, d), multisets of size d over p variables.
  if (p == 0) return 0;
  std::size_t num = 1;
  for (int i = 1; i <= d; ++i) num = num * (p + i - 1) / i;
  return num;
}

}  // namespace

std::size_t expanded_dim(const PolyMap& poly) {
  if (poly.degree < 1) throw ConfigError("PolyMap degree must be >= 1");
  if (poly.degree > 16) throw ConfigError("PolyMap degree above 16 is unsupported");
  const std::size_t p = poly.input_columns.size();
  std::size_t dim = poly.include_bias ? 1 : 0;
  if (poly.homogeneous) {
    dim += monomial_count(p, poly.degree);
  } else {
    for (int d = 1; d <= poly.degree; ++d) dim += monomial_count(p, d);
  }
  return dim;
}

void expand_into(const PolyMap& poly, std::span<const double> x, std::span<double> out) {
  const std::size_t p = poly.input_columns.size();
  for (int c : poly.input_columns)
    if (c < 0 || static_cast<std::size_t>(c) >= x.size())
      throw DataError("expand: input column " + std::to_string(c) +
                      " outside feature vector of length " + std::to_string(x.size()));

  std::size_t pos = 0;
  if (poly.include_bias) out[pos++] = 1.0;

  // Multisets idx[0] <= ... <= idx[d-1] in lexicographic order. Stack
  // storage keeps the hot per-row path allocation-free.
  constexpr int kMaxDegree = 16;
  if (poly.degree > kMaxDegree) throw ConfigError("PolyMap degree above 16 is unsupported");
  int idx[kMaxDegree] = {};
  const int d_lo = poly.homogeneous ? poly.degree : 1;
  for (int d = d_lo; d <= poly.degree; ++d) {
    if (p == 0) continue;
    for (int l = 0; l < d; ++l) idx[l] = 0;
    while (true) {
      double v = 1.0;
      for (int l = 0; l < d; ++l) v *= x[poly.input_columns[idx[l]]];
      out[pos++] = v;
      int level = d - 1;
      while (level >= 0 && idx[level] == static_cast<int>(p) - 1) --level;
      if (level < 0) break;
      const int next = idx[level] + 1;
      for (int l = level; l < d; ++l) idx[l] = next;
    }
  }
  if (pos != out.size()) throw std::logic_error("expand: dimension bookkeeping error");
}

std::vector<double> expand(const PolyMap& poly, std::span<const double> x) {
  std::vector<double> out(expanded_dim(poly));
  expand_into(poly, x, out);
  return out;
}

}  // namespace budgetdag
