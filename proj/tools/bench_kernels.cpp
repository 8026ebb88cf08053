// Timing comparison of the serial reference kernels against the OpenMP
// variants: the memory-node update, the convolution oracle, and the
// resolvent frequency sweep.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "piezoheat/caputo.hpp"
#include "piezoheat/spectral.hpp"

using namespace piezoheat;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.4f s   openmp %9.4f s   speedup %5.2fx\n", name, serial, parallel,
              serial / parallel);
}

} // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without openmp; both columns run serial code paths\n");
#endif

  {
    const FractionalParams fp = FractionalParams::make(0.5, 1.0);
    const XiQuadrature rule = build_xi_quadrature(fp, 1 << 17, 1e5);
    std::vector<double> phi_a(rule.count(), 0.0), phi_b(rule.count(), 0.0);
    const int steps = 200;
    const double s = time_best_of(3, [&] {
      for (int i = 0; i < steps; ++i) phi_step_serial(phi_a, std::cos(0.01 * i), fp, rule, 1e-3);
    });
    const double p = time_best_of(3, [&] {
      for (int i = 0; i < steps; ++i) phi_step(phi_b, std::cos(0.01 * i), fp, rule, 1e-3);
    });
    double diff = 0;
    for (int k = 0; k < rule.count(); ++k) diff = std::max(diff, std::abs(phi_a[k] - phi_b[k]));
    report("phi_step (K=131072, 200x)", s, p);
    std::printf("  max serial/openmp deviation: %.3g\n", diff);
  }

  {
    const FractionalParams fp = FractionalParams::make(0.4, 0.5);
    const int n = 20000;
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = std::sin(5e-4 * i);
    std::vector<double> a, b;
    const double s = time_best_of(3, [&] { a = caputo_oracle_serial(f, fp, 5e-4); });
    const double p = time_best_of(3, [&] { b = caputo_oracle(f, fp, 5e-4); });
    double diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    report("caputo_oracle (N=20000)", s, p);
    std::printf("  max serial/openmp deviation: %.3g\n", diff);
  }

  {
    const MaterialParams mp;
    const FractionalParams fp = FractionalParams::make(0.5, 1.0);
    const Grid g = Grid::make(12, 48, mp, build_xi_quadrature(fp, 16, 40.0));
    const GeneratorMatrix A = assemble_generator(mp, fp, g);
    const ResolventEvaluator ev(A, mp, fp, g);
    std::vector<double> lams;
    for (int i = 0; i < 24; ++i) lams.push_back(2.0 + i);
    std::vector<double> na(lams.size()), nb(lams.size());
    const double s = time_best_of(2, [&] {
      for (std::size_t i = 0; i < lams.size(); ++i) na[i] = ev.norm_at(lams[i]);
    });
    const double p = time_best_of(2, [&] {
      const std::int64_t n = static_cast<std::int64_t>(lams.size());
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t i = 0; i < n; ++i) nb[i] = ev.norm_at(lams[i]);
    });
    double diff = 0;
    for (std::size_t i = 0; i < na.size(); ++i) diff = std::max(diff, std::abs(na[i] - nb[i]));
    report("resolvent sweep (24 shifts)", s, p);
    std::printf("  max serial/openmp deviation: %.3g\n", diff);
  }
  return 0;
}
