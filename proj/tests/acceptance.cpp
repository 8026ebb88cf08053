// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criterion 10 drives the CLI binary (path via --cli, default: sibling
// tools/piezoheat).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "piezoheat/caputo.hpp"
#include "piezoheat/config.hpp"
#include "piezoheat/spectral.hpp"

namespace fs = std::filesystem;
using namespace piezoheat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cli_path;

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Closed-form integral suite: J2, J3 against the shifted power laws over
//    20 (lambda, eta) pairs with |lambda|+eta spanning [0.1, 1e4]; C(1/2, 0)
//    against pi. All within 1e-6 relative.
Outcome criterion1() {
  const FractionalParams fp = FractionalParams::make(0.5, 0.0);
  const XiQuadrature rule = build_xi_quadrature(fp, 8192, truncation_for_tail(0.5, 2e-7));
  const double etas[4] = {0.0, 1.0, 0.5, 2.0};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double shift = 0.1 * std::pow(1e5, i / 19.0);
    double eta = etas[i % 4];
    if (shift <= eta) eta = 0.0;
    const double lambda = shift - eta;
    const auto ref = closed_form_integrals(FractionalParams::make(0.5, eta), lambda);
    const double j2 = std::sqrt(integrate_xi(rule, [&](double x) {
      const double d = shift + x * x;
      return 1.0 / (d * d);
    }));
    const double j3 = std::sqrt(integrate_xi(rule, [&](double x) {
      const double d = shift + x * x;
      return x * x / (d * d * d * d);
    }));
    worst = std::max(worst, std::abs(j2 - ref.J2) / ref.J2);
    worst = std::max(worst, std::abs(j3 - ref.J3) / ref.J3);
  }
  const double c = integrate_xi(rule, [](double x) { return 1.0 / (x * x + 1.0); });
  const double cerr = std::abs(c - kPi) / kPi;
  const bool pass = worst <= 1e-6 && cerr <= 1e-6;
  return {pass, fmt("max J2/J3 rel err %.3g, C(0.5,0) rel err %.3g (tol 1e-6)", worst, cerr)};
}

// 2. Representation equivalence: diffusive output vs convolution oracle for
//    f = sin t over alpha x eta; <= 1e-3 at K=256, <= 1e-2 at K=64, and
//    monotone in K.
Outcome criterion2() {
  bool pass = true;
  double worst256 = 0, worst64 = 0;
  for (double alpha : {0.3, 0.5, 0.7})
    for (double eta : {0.0, 1.0}) {
      const FractionalParams fp = FractionalParams::make(alpha, eta);
      double prev = 1e300;
      for (int K : {64, 128, 256}) {
        const auto r = representation_error(fp, K, 1e-3, 10.0,
                                            [](double t) { return std::sin(t); },
                                            [](double t) { return std::cos(t); });
        if (!(r.rel_l2_error < prev)) pass = false;
        prev = r.rel_l2_error;
        if (K == 64) worst64 = std::max(worst64, r.rel_l2_error);
        if (K == 256) worst256 = std::max(worst256, r.rel_l2_error);
      }
    }
  pass = pass && worst64 <= 1e-2 && worst256 <= 1e-3;
  return {pass, fmt("worst rel L2: K=64 %.3g (tol 1e-2), K=256 %.3g (tol 1e-3), monotone in K",
                    worst64, worst256)};
}

// 3. Convolution oracle on f(t) = t, eta = 0, against t^(1-a)/Gamma(2-a).
Outcome criterion3() {
  const double dt = 1e-3;
  const int n = 10000;
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = i * dt;
  double worst = 0;
  for (double alpha : {0.3, 0.5, 0.7}) {
    const FractionalParams fp = FractionalParams::make(alpha, 0.0);
    const auto out = caputo_oracle(f, fp, dt);
    for (int i = 1; i <= n; ++i)
      worst = std::max(worst,
                       std::abs(out[i] - std::pow(i * dt, 1 - alpha) / std::tgamma(2 - alpha)));
  }
  return {worst <= 1e-3, fmt("max abs error %.3g on t in [dt, 10] (tol 1e-3)", worst)};
}

// 4. Discrete dissipativity: Re<A_h U, U>_H <= 1e-12 ||U||_H^2 and matches
//    dissipation_rate to 1e-10 ||U||_H^2 for 100 seeded states at three
//    resolutions.
Outcome criterion4() {
  const MaterialParams mp;
  const FractionalParams fp = FractionalParams::make(0.5, 1.0);
  double worst_pos = -1e300, worst_gap = 0;
  const std::tuple<int, int, int> grids[] = {{8, 10, 6}, {16, 20, 12}, {24, 30, 24}};
  for (auto [m, n, K] : grids) {
    const Grid g = Grid::make(m, n, mp, build_xi_quadrature(fp, K, 0.0));
    const GeneratorMatrix A = assemble_generator(mp, fp, g);
    const auto G = gram_matrix(mp, fp, g);
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector u = random_state(g, 1000 + trial);
      const double n2 = u.data.dot(G * u.data);
      const double q = generator_quadratic_form(A, G, u);
      const double rate = dissipation_rate(u, mp, fp, g);
      worst_pos = std::max(worst_pos, q / n2);
      worst_gap = std::max(worst_gap, std::abs(q - rate) / n2);
    }
  }
  const bool pass = worst_pos <= 1e-12 && worst_gap <= 1e-10;
  return {pass, fmt("max Re<AU,U>/||U||^2 = %.3g (tol 1e-12), identity defect %.3g (tol 1e-10)",
                    worst_pos, worst_gap)};
}

// 5. Backward Euler monotonicity on the standard presets for dt in
//    {1e-1, 1e-2}: E non-increasing at every recorded sample.
Outcome criterion5() {
  double worst = 0;
  for (const char* name : {"standard-a03", "standard-a05", "standard-a07"})
    for (double dt : {1e-1, 1e-2}) {
      RunConfig cfg = preset_config(name);
      cfg.sim.scheme = Scheme::backward_euler;
      cfg.sim.dt = dt;
      cfg.sim.t_end = 5.0;
      cfg.sim.trace_stride = 5;
      const Grid g = cfg.grid();
      const EnergyTrace tr = simulate(cfg.sim, cfg.material, cfg.fractional(), g,
                                      initial_condition(cfg.sim.initial_condition, g, cfg.seed));
      for (std::size_t i = 1; i < tr.size(); ++i) {
        const double rel = (tr.breakdowns[i].total - tr.breakdowns[i - 1].total) /
                           std::max(tr.breakdowns[i - 1].total, 1e-300);
        worst = std::max(worst, rel);
      }
    }
  return {worst <= 1e-12, fmt("max relative energy increase %.3g (tol 1e-12)", worst)};
}

// 6. Crank-Nicolson dissipation-identity residual at a fixed late time drops
//    by a factor in [3, 5] when dt is halved. The first windows after the
//    phi = 0 start carry the memory layer (not a smooth run) and are excluded
//    by comparing at the final window, t = 2.
Outcome criterion6() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"standard-a03", "standard-a05", "standard-a07"}) {
    RunConfig cfg = preset_config(name);
    auto late_residual = [&](double dt) {
      cfg.sim.scheme = Scheme::crank_nicolson;
      cfg.sim.dt = dt;
      cfg.sim.t_end = 2.0;
      cfg.sim.trace_stride = static_cast<int>(std::lround(0.25 / dt));
      const Grid g = cfg.grid();
      const EnergyTrace tr = simulate(cfg.sim, cfg.material, cfg.fractional(), g,
                                      initial_condition(cfg.sim.initial_condition, g, cfg.seed));
      return tr.dissipation_residuals.back();
    };
    const double ratio = late_residual(5e-3) / late_residual(2.5e-3);
    if (!(ratio >= 3.0 && ratio <= 5.0)) pass = false;
    detail += fmt("%s ratio %.2f ", name + 9, ratio);
  }
  return {pass, detail + "(need [3,5])"};
}

// 7. Spectrum location: eta = 1 strictly damped up to dim ~2000; eta = 0
//    refinement drives min |ev| monotonically toward 0.
Outcome criterion7() {
  const MaterialParams mp;
  const FractionalParams fp = FractionalParams::make(0.5, 1.0);
  bool pass = true;
  double worst_re = -1e300, min_absre = 1e300;
  int max_dim = 0;
  const std::tuple<int, int, int> grids[] = {{12, 20, 12}, {24, 40, 24}, {32, 60, 28}};
  for (auto [m, n, K] : grids) {
    const Grid g = Grid::make(m, n, mp, build_xi_quadrature(fp, K, 0.0));
    const SpectrumReport rep = spectrum(assemble_generator(mp, fp, g));
    max_dim = std::max(max_dim, g.dim());
    worst_re = std::max(worst_re, rep.max_real_part);
    min_absre = std::min(min_absre, rep.min_abs_real_part);
  }
  if (!(worst_re <= 1e-10 && min_absre > 0)) pass = false;

  const auto kernel = verify_stationary_kernel(mp, FractionalParams::make(0.5, 0.0), 10, 14,
                                               {8, 16, 32, 64});
  if (!kernel.applicable || !kernel.monotone_decreasing) pass = false;
  return {pass,
          fmt("dims to %d: max Re %.3g (tol 1e-10), min |Re| %.3g; eta=0 min|ev| %.3g -> %.3g "
              "monotone",
              max_dim, worst_re, min_absre, kernel.min_abs_eigenvalue.front(),
              kernel.min_abs_eigenvalue.back())};
}

// 8. Resolvent growth: fitted window slope <= (1 - alpha) + 0.15 at the
//    reference resolution, and one refinement step moves it toward 1 - alpha.
Outcome criterion8() {
  const MaterialParams mp;
  bool pass = true;
  std::string detail;
  for (double alpha : {0.3, 0.5, 0.7}) {
    const FractionalParams fp = FractionalParams::make(alpha, 1.0);
    auto slope_of = [&](int m, int n, int K, double Xi) {
      const Grid g = Grid::make(m, n, mp, build_xi_quadrature(fp, K, Xi));
      const GeneratorMatrix A = assemble_generator(mp, fp, g);
      return resolvent_profile(A, mp, fp, g).fitted_slope;
    };
    const double ref = slope_of(16, 64, 20, 40.0);
    const double fine = slope_of(16, 96, 24, 50.0);
    const double tgt = 1.0 - alpha;
    if (!(ref <= tgt + 0.15)) pass = false;
    if (!(std::abs(fine - tgt) < std::abs(ref - tgt))) pass = false;
    detail += fmt("a=%.1f: %.3f -> %.3f (tgt %.1f, cap %.2f) ", alpha, ref, fine, tgt, tgt + 0.15);
  }
  return {pass, detail};
}

// 9. Decay-rate bound on the standard presets over the documented window:
//    log(E t^p) has no growth trend and the fitted exponent meets the bound
//    with 0.75 slack, p = 2/(1 - alpha).
Outcome criterion9() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"standard-a03", "standard-a05", "standard-a07"}) {
    RunConfig cfg = preset_config(name);
    cfg.sim.dt = 2e-2;
    cfg.sim.t_end = 800.0;
    cfg.sim.trace_stride = 25;
    const Grid g = cfg.grid();
    const EnergyTrace tr = simulate(cfg.sim, cfg.material, cfg.fractional(), g,
                                    initial_condition(cfg.sim.initial_condition, g, cfg.seed));
    const auto [t0, t1] = default_decay_window(tr);
    const DecayFit fit = fit_decay(tr, t0, t1);
    const double p = 2.0 / (1.0 - cfg.alpha);
    const double comp = fit_compensated_slope(tr, t0, t1, p);
    if (!(comp <= 0.1 && fit.exponent <= -p + 0.75)) pass = false;
    detail += fmt("a=%.1f: exp %.2f (<= %.2f), comp %.2f (<= 0.1) ", cfg.alpha, fit.exponent,
                  -p + 0.75, comp);
  }
  return {pass, detail};
}

// 10. Determinism: repeated CLI runs with identical config and seed produce
//     byte-identical artifacts (simulate CSV/JSON and the resolvent report).
Outcome criterion10() {
  if (!fs::exists(cli_path)) return {false, "cli binary not found at " + cli_path};
  const fs::path work = fs::temp_directory_path() / "piezoheat_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path cfgfile = work / "run.cfg";
  {
    std::ofstream os(cfgfile);
    os << "[sim]\nt_end = 2.0\ndt = 0.01\n[grid]\nn_heat = 12\nn_beam = 24\nk_xi = 12\n";
  }
  auto run = [&](const std::string& sub, const fs::path& out) {
    const std::string cmd = cli_path + " " + sub + " --preset standard-a03 --config " +
                            cfgfile.string() + " --out " + out.string() + " --seed 7 > " +
                            (work / "log.txt").string() + " 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const fs::path out = work / "out";
  if (!run("simulate", out) || !run("resolvent", out)) return {false, "cli run failed"};
  const std::string t1 = slurp(out / "trace.csv"), s1 = slurp(out / "summary.json"),
                    r1 = slurp(out / "resolvent.json");
  fs::remove_all(out);
  if (!run("simulate", out) || !run("resolvent", out)) return {false, "cli rerun failed"};
  const bool pass = !t1.empty() && t1 == slurp(out / "trace.csv") &&
                    s1 == slurp(out / "summary.json") && r1 == slurp(out / "resolvent.json");
  return {pass, fmt("trace.csv %zu B, summary.json %zu B, resolvent.json %zu B, reruns identical",
                    t1.size(), s1.size(), r1.size())};
}

} // namespace

int main(int argc, char** argv) {
  cli_path = (fs::path(argv[0]).parent_path().parent_path() / "tools" / "piezoheat").string();
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];

  struct Entry {
    const char* name;
    std::function<Outcome()> fn;
  };
  const Entry entries[] = {
      {"closed-form integral suite (J2, J3, C)", criterion1},
      {"representation equivalence vs oracle", criterion2},
      {"analytic Caputo check on f(t)=t", criterion3},
      {"discrete dissipativity identity", criterion4},
      {"backward Euler energy monotonicity", criterion5},
      {"CN dissipation-identity convergence", criterion6},
      {"spectrum location and eta=0 refinement", criterion7},
      {"resolvent growth exponent", criterion8},
      {"decay-rate bound on preset runs", criterion9},
      {"CLI determinism", criterion10},
  };

  int failures = 0;
  int idx = 0;
  for (const Entry& e : entries) {
    ++idx;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", idx, e.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
