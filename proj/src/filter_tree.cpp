#include "budgetdag/filter_tree.hpp"

#include <cmath>
#include <numeric>

#include "budgetdag/kernels.hpp"
#include "parallel_guard.hpp"

namespace budgetdag {

int FilterTree::predict(std::span<const double> x) const {
  const std::vector<double> phi = expand(poly_, x);
  return predict_expanded(phi);
}

int FilterTree::predict_expanded(std::span<const double> phi_row) const {
  std::vector<int> cur(k_);
  std::iota(cur.begin(), cur.end(), 0);
  for (const auto& level : levels_) {
    std::vector<int> next;
    next.reserve(level.size() + 1);
    for (const FilterTreeMatch& m : level) {
      double z = 0.0;
      for (std::size_t j = 0; j < phi_row.size(); ++j) z += phi_row[j] * m.weights[j];
      next.push_back(z >= 0.0 ? cur[m.left] : cur[m.right]);
    }
    if (cur.size() % 2 == 1) next.push_back(cur.back());
    cur.swap(next);
  }
  return cur[0];
}

int MemorizingPredictor::predict(std::span<const double> x) const {
  auto it = table_.find(std::vector<double>(x.begin(), x.end()));
  return it != table_.end() ? it->second : fallback_;
}

int CslModel::predict(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.predict(x); }, impl_);
}

int CslModel::num_actions() const {
  return std::visit([](const auto& m) { return m.num_actions(); }, impl_);
}

FilterTree filter_tree_learn(const CslInstance& instance, const PolyMap& poly,
                             const OptimizerConfig& opt) {
  const int k = instance.num_actions();
  const std::size_t n = instance.size();
  if (k == 1) return FilterTree(1, poly, {});

  const MatrixD phi = expand_rows(poly, instance.x);
  const std::size_t dim = phi.cols;

  // winners[e][i]: action example i would reach through entry e's subtree.
  std::vector<std::vector<int>> winners(k, std::vector<int>(n));
  for (int a = 0; a < k; ++a) std::fill(winners[a].begin(), winners[a].end(), a);

  std::vector<std::vector<FilterTreeMatch>> levels;
  while (winners.size() > 1) {
    const std::size_t entries = winners.size();
    const std::size_t num_matches = entries / 2;
    std::vector<FilterTreeMatch> level(num_matches);

    detail::ParallelGuard guard;
#pragma omp parallel for if (num_matches > 1) schedule(dynamic)
    for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(num_matches); ++m) {
      guard.run([&, m] {
        FilterTreeMatch& match = level[m];
        match.left = static_cast<int>(2 * m);
        match.right = static_cast<int>(2 * m + 1);
        const std::vector<int>& wl = winners[match.left];
        const std::vector<int>& wr = winners[match.right];

        std::vector<std::int8_t> b(n, +1);
        std::vector<double> u(n, 0.0);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
          const double cl = instance.costs.at(i, wl[i]);
          const double cr = instance.costs.at(i, wr[i]);
          if (cl == cr) continue;  // zero importance, skipped
          b[i] = cl < cr ? +1 : -1;
          u[i] = std::abs(cl - cr);
          any = true;
        }
        // No preference anywhere: constant zero score routes left.
        match.weights.assign(dim, 0.0);
        if (any) match.weights = fit_weighted_logistic(phi, b, u, opt);
      });
    }
    guard.rethrow_if_failed();

    std::vector<std::vector<int>> next;
    next.reserve(num_matches + 1);
    for (const FilterTreeMatch& match : level) {
      const std::vector<double> z = matvec_scores(phi, match.weights);
      std::vector<int> w(n);
      for (std::size_t i = 0; i < n; ++i)
        w[i] = z[i] >= 0.0 ? winners[match.left][i] : winners[match.right][i];
      next.push_back(std::move(w));
    }
    if (entries % 2 == 1) next.push_back(std::move(winners.back()));
    winners.swap(next);
    levels.push_back(std::move(level));
  }

  return FilterTree(k, poly, std::move(levels));
}

MemorizingPredictor memorizing_learn(const CslInstance& instance) {
  const int k = instance.num_actions();
  const std::size_t n = instance.size();

  // Summed cost vectors per distinct input; argmin per key, ties to the
  // lowest action. Unseen inputs fall back to the global cost argmin.
  std::map<std::vector<double>, std::vector<double>> sums;
  std::vector<double> total(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> row = instance.x.row_span(i);
    auto [it, inserted] = sums.try_emplace(std::vector<double>(row.begin(), row.end()),
                                           std::vector<double>(k, 0.0));
    for (int a = 0; a < k; ++a) {
      it->second[a] += instance.costs.at(i, a);
      total[a] += instance.costs.at(i, a);
    }
  }

  auto argmin = [](const std::vector<double>& v) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(v.size()); ++a)
      if (v[a] < v[best]) best = a;
    return best;
  };

  std::map<std::vector<double>, int> table;
  for (const auto& [key, costs] : sums) table.emplace(key, argmin(costs));
  return MemorizingPredictor(k, std::move(table), argmin(total));
}

CslModel learn(const CslInstance& instance, const CslConfig& config) {
  const int k = instance.num_actions();
  if (k == 0) throw ConfigError("learn: empty action set");
  if (instance.size() == 0) throw DataError("learn: empty instance");
  if (instance.costs.rows != instance.x.rows)
    throw DataError("learn: cost and feature row counts differ");
  for (double c : instance.costs.data)
    if (!std::isfinite(c) || c < 0.0)
      throw DataError("learn: costs must be finite and non-negative");

  if (k == 1) return CslModel(ConstantAction{0, 1});
  if (config.backend == CslBackend::kMemorizing)
    return CslModel(memorizing_learn(instance));
  return CslModel(filter_tree_learn(instance, config.poly, config.opt));
}

}  // namespace budgetdag
