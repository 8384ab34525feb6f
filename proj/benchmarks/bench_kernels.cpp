// Serial reference versus OpenMP kernels on synthetic workloads. Build the
// bench_kernels target and run it directly; it prints one table per kernel.

#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "budgetdag/kernels.hpp"
#include "budgetdag/reference.hpp"

using namespace budgetdag;

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return static_cast<double>(clock()) / CLOCKS_PER_SEC;
#endif
}

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e30;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    fn();
    best = std::min(best, now() - t0);
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n\n");
#endif

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::printf("%-34s %10s %10s %8s\n", "weighted_logistic_objective_grad", "serial(ms)",
              "omp(ms)", "speedup");
  for (const auto& [n, d] : {std::pair<int, int>{2000, 64}, {20000, 128}, {50000, 256}}) {
    MatrixD phi(n, d);
    for (double& v : phi.data) v = gauss(rng);
    std::vector<std::int8_t> b(n);
    std::vector<double> u(n), w(d), grad(d);
    for (int i = 0; i < n; ++i) {
      b[i] = (rng() & 1) ? 1 : -1;
      u[i] = 1.0;
    }
    for (int j = 0; j < d; ++j) w[j] = gauss(rng) * 0.1;

    const double ts = time_best_of(3, [&] {
      ref::weighted_logistic_objective_grad(phi, b, u, w, 1e-4, grad);
    });
    const double tp = time_best_of(3, [&] {
      weighted_logistic_objective_grad(phi, b, u, w, 1e-4, grad);
    });
    char label[64];
    std::snprintf(label, sizeof(label), "  n=%d d=%d", n, d);
    std::printf("%-34s %10.3f %10.3f %8.2fx\n", label, ts * 1e3, tp * 1e3, ts / tp);
  }

  std::printf("\n%-34s %10s %10s %8s\n", "expand_rows (degree 3)", "serial(ms)", "omp(ms)",
              "speedup");
  for (const auto& [n, p] : {std::pair<int, int>{2000, 8}, {20000, 8}, {20000, 12}}) {
    MatrixD x(n, p);
    for (double& v : x.data) v = gauss(rng);
    std::vector<int> cols(p);
    for (int j = 0; j < p; ++j) cols[j] = j;
    PolyMap poly{3, cols, true, true};

    const double ts = time_best_of(3, [&] { ref::expand_rows(poly, x); });
    const double tp = time_best_of(3, [&] { expand_rows(poly, x); });
    char label[64];
    std::snprintf(label, sizeof(label), "  n=%d p=%d", n, p);
    std::printf("%-34s %10.3f %10.3f %8.2fx\n", label, ts * 1e3, tp * 1e3, ts / tp);
  }

  std::printf("\n%-34s %10s %10s %8s\n", "matvec_scores", "serial(ms)", "omp(ms)", "speedup");
  for (const auto& [n, d] : {std::pair<int, int>{20000, 128}, {50000, 512}}) {
    MatrixD phi(n, d);
    for (double& v : phi.data) v = gauss(rng);
    std::vector<double> w(d);
    for (int j = 0; j < d; ++j) w[j] = gauss(rng);

    const double ts = time_best_of(3, [&] { ref::matvec_scores(phi, w); });
    const double tp = time_best_of(3, [&] { matvec_scores(phi, w); });
    char label[64];
    std::snprintf(label, sizeof(label), "  n=%d d=%d", n, d);
    std::printf("%-34s %10.3f %10.3f %8.2fx\n", label, ts * 1e3, tp * 1e3, ts / tp);
  }
  return 0;
}
