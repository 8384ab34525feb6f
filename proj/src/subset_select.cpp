#include "budgetdag/subset_select.hpp"

#include <algorithm>
#include <iostream>

#include "parallel_guard.hpp"

namespace budgetdag {

std::span<const std::uint8_t> RewardOracle::rewards(const SensorSubset& sigma) {
  auto it = cache_.find(sigma.bits());
  if (it == cache_.end()) it = cache_.emplace(sigma.bits(), compute(sigma)).first;
  return it->second;
}

void RewardOracle::prefetch(std::span<const SensorSubset> candidates) {
  std::vector<const SensorSubset*> missing;
  for (const SensorSubset& s : candidates)
    if (!cache_.count(s.bits())) missing.push_back(&s);
  // Duplicated masks compute the same row; the first commit wins.
  std::vector<std::vector<std::uint8_t>> rows(missing.size());
  const int m = static_cast<int>(missing.size());
  detail::ParallelGuard guard;
#pragma omp parallel for if (m > 1) schedule(dynamic)
  for (int c = 0; c < m; ++c) guard.run([&, c] { rows[c] = compute(*missing[c]); });
  guard.rethrow_if_failed();
  for (int c = 0; c < m; ++c)
    cache_.emplace(missing[c]->bits(), std::move(rows[c]));
}

TrainedRewardOracle::TrainedRewardOracle(const Dataset& train, const Dataset& val,
                                         std::span<const SensorSpec> sensors,
                                         const PolyMap& base_poly, const OptimizerConfig& opt)
    : train_(&train), val_(&val), sensors_(sensors), base_poly_(base_poly), opt_(opt) {}

std::vector<std::uint8_t> TrainedRewardOracle::compute(const SensorSubset& sigma) {
  const SubsetClassifier* cls = nullptr;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = classifiers_.find(sigma.bits());
    if (it != classifiers_.end()) cls = &it->second;
  }
  if (cls == nullptr) {
    // Training runs unlocked; map nodes are stable, first insert wins.
    SubsetClassifier trained = train_subset_classifier(
        *train_, sigma, columns_of(sigma, sensors_), base_poly_, opt_);
    std::lock_guard<std::mutex> lock(mutex_);
    cls = &classifiers_.emplace(sigma.bits(), std::move(trained)).first->second;
  }
  const std::vector<int> pred = cls->predict_rows(val_->features);
  std::vector<std::uint8_t> r(val_->size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = pred[i] == val_->y(i) ? 1 : 0;
  return r;
}

std::vector<std::uint8_t> LookupRewardOracle::compute(const SensorSubset& sigma) {
  std::vector<std::uint8_t> r(n_);
  for (std::size_t i = 0; i < n_; ++i) r[i] = fn_(i, sigma) ? 1 : 0;
  return r;
}

double reward_value(std::span<const std::vector<std::uint8_t>> reward_rows, std::size_t n) {
  if (reward_rows.empty() || n == 0) return 0.0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& row : reward_rows)
      if (row[i]) {
        ++covered;
        break;
      }
  }
  return static_cast<double>(covered) / static_cast<double>(n);
}

double reward_G(const SubsetCollection& collection, const Dataset& eval) {
  if (collection.subsets.empty()) return 0.0;
  std::vector<std::vector<std::uint8_t>> rows;
  rows.reserve(collection.classifiers.size());
  for (const SubsetClassifier& cls : collection.classifiers) {
    const std::vector<int> pred = cls.predict_rows(eval.features);
    std::vector<std::uint8_t> r(eval.size());
    for (std::size_t i = 0; i < eval.size(); ++i) r[i] = pred[i] == eval.y(i) ? 1 : 0;
    rows.push_back(std::move(r));
  }
  return reward_value(rows, eval.size());
}

GreedyResult greedy_select_core(RewardOracle& oracle, int num_sensors, int t,
                                int budget_units) {
  if (t < 1) throw ConfigError("greedy_select: need at least one subset slot");
  if (budget_units < 1) throw ConfigError("greedy_select: budget must be positive");
  if (budget_units > t * num_sensors) {
    std::cerr << "warning: budget " << budget_units << " exceeds t*M = " << t * num_sensors
              << "; clipping\n";
    budget_units = t * num_sensors;
  }

  const std::size_t n = oracle.num_examples();
  GreedyResult res;
  res.subsets.assign(t, SensorSubset::empty_set(num_sensors));
  res.rewards.assign(t, std::vector<std::uint8_t>(n, 0));
  for (int j = 0; j < t; ++j) {
    auto row = oracle.rewards(res.subsets[j]);
    res.rewards[j].assign(row.begin(), row.end());
  }
  res.reward_g = reward_value(res.rewards, n);

  int used = 0;
  while (used < budget_units) {
    // Fixed candidate order (slot, then sensor); ties keep the first best.
    struct Candidate {
      int slot;
      int sensor;
      SensorSubset subset;
    };
    std::vector<Candidate> candidates;
    for (int slot = 0; slot < t; ++slot)
      for (int sensor = 0; sensor < num_sensors; ++sensor)
        if (!res.subsets[slot].has(sensor))
          candidates.push_back({slot, sensor, res.subsets[slot].with(sensor)});
    if (candidates.empty()) break;

    std::vector<SensorSubset> masks;
    masks.reserve(candidates.size());
    for (const Candidate& c : candidates) masks.push_back(c.subset);
    oracle.prefetch(masks);

    std::vector<std::span<const std::uint8_t>> rows(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c)
      rows[c] = oracle.rewards(candidates[c].subset);

    std::vector<double> gains(candidates.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(candidates.size()); ++c) {
      std::size_t covered = 0;
      for (std::size_t i = 0; i < n; ++i) {
        bool hit = rows[c][i];
        for (int j = 0; j < t && !hit; ++j)
          hit = j != candidates[c].slot && res.rewards[j][i];
        covered += hit ? 1 : 0;
      }
      gains[c] = static_cast<double>(covered) / static_cast<double>(n);
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
      if (gains[c] > gains[best]) best = c;
    // Ties against the current reward are committed (monotone oracles then
    // always run to budget); stop once every candidate strictly hurts.
    if (gains[best] < res.reward_g) break;

    const Candidate& pick = candidates[best];
    res.subsets[pick.slot] = pick.subset;
    res.rewards[pick.slot].assign(rows[best].begin(), rows[best].end());
    res.reward_g = gains[best];
    ++used;
  }
  return res;
}

SubsetCollection greedy_select(const Dataset& train, const Dataset& val,
                               std::span<const SensorSpec> sensors, int t, int budget_units,
                               const PolyMap& base_poly, const OptimizerConfig& opt) {
  TrainedRewardOracle oracle(train, val, sensors, base_poly, opt);
  GreedyResult core = greedy_select_core(oracle, static_cast<int>(sensors.size()), t,
                                         budget_units);
  SubsetCollection out;
  out.subsets = std::move(core.subsets);
  out.rewards = std::move(core.rewards);
  out.reward_g = core.reward_g;
  for (const SensorSubset& sigma : out.subsets) {
    auto it = oracle.trained().find(sigma.bits());
    if (it != oracle.trained().end()) {
      out.classifiers.push_back(it->second);
    } else {
      out.classifiers.push_back(train_subset_classifier(
          train, sigma, columns_of(sigma, sensors), base_poly, opt));
    }
  }
  return out;
}

bool marginal_gain_check(const std::vector<std::vector<std::uint8_t>>& rewards,
                         std::span<const int> s, int a, int b) {
  const std::size_t n = rewards.size();  // rows are examples, columns subsets
  // Integer coverage counts: gains share the 1/N factor, so comparing raw
  // counts keeps the inequality exact.
  auto covered = [&](std::span<const int> base, int extra1, int extra2) {
    long count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<std::uint8_t>& row = rewards[i];
      bool hit = false;
      for (int j : base)
        if (row[j]) {
          hit = true;
          break;
        }
      if (!hit && extra1 >= 0) hit = row[extra1] != 0;
      if (!hit && extra2 >= 0) hit = row[extra2] != 0;
      count += hit ? 1 : 0;
    }
    return count;
  };
  const long gain_a = covered(s, a, -1) - covered(s, -1, -1);
  const long gain_a_given_b = covered(s, a, b) - covered(s, b, -1);
  return gain_a >= gain_a_given_b;
}

}  // namespace budgetdag
