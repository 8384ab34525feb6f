#include <doctest.h>

#include "budgetdag/poly.hpp"
#include "oracles.hpp"

using namespace budgetdag;

TEST_CASE("degree-1 expansion with bias") {
  PolyMap poly{1, {0, 1}, true, true};
  const std::vector<double> x = {2.0, 3.0};
  CHECK(expand(poly, x) == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("degree-2 homogeneous monomials") {
  PolyMap poly{2, {0, 1}, true, true};
  const std::vector<double> x = {2.0, 3.0};
  CHECK(expand(poly, x) == std::vector<double>{1.0, 4.0, 6.0, 9.0});
}

TEST_CASE("degree-3 over eight inputs has 120 monomials plus bias") {
  PolyMap poly{3, {0, 1, 2, 3, 4, 5, 6, 7}, true, true};
  CHECK(test::count_monomials_by_enumeration(8, 3) == 120);
  CHECK(expanded_dim(poly) == 121);

  std::vector<double> x(8);
  for (int j = 0; j < 8; ++j) x[j] = 0.1 * (j + 1);
  CHECK(expand(poly, x).size() == 121);
}

TEST_CASE("inhomogeneous mode emits all lower degrees") {
  PolyMap poly{2, {0, 1}, true, false};
  const std::vector<double> x = {2.0, 3.0};
  // bias, x0, x1, x0^2, x0*x1, x1^2
  CHECK(expand(poly, x) == std::vector<double>{1.0, 2.0, 3.0, 4.0, 6.0, 9.0});
  CHECK(expanded_dim(poly) == 6);
}

TEST_CASE("expansion over no columns is bias only") {
  PolyMap poly{3, {}, true, true};
  CHECK(expanded_dim(poly) == 1);
  CHECK(expand(poly, std::vector<double>{5.0}) == std::vector<double>{1.0});
}

TEST_CASE("column out of range is a data error") {
  PolyMap poly{1, {0, 7}, true, true};
  CHECK_THROWS_AS(expand(poly, std::vector<double>{1.0, 2.0}), DataError);
}

TEST_CASE("enumerated dimension matches the oracle across shapes") {
  for (int p = 1; p <= 6; ++p) {
    for (int d = 1; d <= 4; ++d) {
      std::vector<int> cols(p);
      for (int j = 0; j < p; ++j) cols[j] = j;
      PolyMap poly{d, cols, false, true};
      CHECK(expanded_dim(poly) == test::count_monomials_by_enumeration(p, d));
      std::vector<double> x(p, 1.5);
      CHECK(expand(poly, x).size() == expanded_dim(poly));
    }
  }
}
