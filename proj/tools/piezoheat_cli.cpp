// Command-line front end: simulate / spectrum / resolvent / decay-fit /
// verify-fractional / sweep. Artifacts are deterministic: fixed float
// formatting, insertion-ordered JSON keys; wall time goes to a sidecar file.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "piezoheat/assembly.hpp"
#include "piezoheat/caputo.hpp"
#include "piezoheat/config.hpp"
#include "piezoheat/report.hpp"

namespace fs = std::filesystem;
using namespace piezoheat;

namespace {

struct CommonArgs {
  std::string preset = "standard-a05";
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--preset", args.preset, "named preset to start from");
  cmd->add_option("--config", args.config_path, "config file (overrides the preset)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "seed echoed into artifacts");
}

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig cfg = preset_config(args.preset);
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config file '" + args.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_kv(cfg, parse_config_text(ss.str()));
  }
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

class WallTimer {
public:
  explicit WallTimer(fs::path dir) : dir_(std::move(dir)), t0_(std::chrono::steady_clock::now()) {}
  ~WallTimer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::ofstream os(dir_ / "timing.txt");
    os << "wall_time_seconds " << s << "\n";
  }

private:
  fs::path dir_;
  std::chrono::steady_clock::time_point t0_;
};

int run_simulate_into(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  WallTimer timer(dir);
  const Grid g = cfg.grid();
  const FractionalParams fp = cfg.fractional();
  const StateVector u0 = initial_condition(cfg.sim.initial_condition, g, cfg.seed);
  const EnergyTrace trace = simulate(cfg.sim, cfg.material, fp, g, u0);

  std::ostringstream csv;
  write_trace_csv(trace, csv);
  write_file(dir / "trace.csv", csv.str());

  double min_res = 0, max_res = 0, max_stress = 0, max_charge = 0;
  if (!trace.dissipation_residuals.empty()) {
    min_res = trace.dissipation_residuals.front();
    for (double r : trace.dissipation_residuals) {
      min_res = std::min(min_res, r);
      max_res = std::max(max_res, r);
    }
  }
  for (const auto& t : trace.transmission) {
    max_stress = std::max(max_stress, std::abs(t.r_stress));
    max_charge = std::max(max_charge, std::abs(t.r_charge));
  }
  JsonWriter w;
  w.key("command", std::string("simulate"));
  w.key("samples", static_cast<long long>(trace.size()));
  w.key("t_final", trace.times.empty() ? 0.0 : trace.times.back());
  w.key("final_energy", trace.breakdowns.empty() ? 0.0 : trace.breakdowns.back().total);
  w.key("initial_energy", trace.breakdowns.empty() ? 0.0 : trace.breakdowns.front().total);
  w.key("min_dissipation_residual", min_res);
  w.key("max_dissipation_residual", max_res);
  w.key("max_stress_residual", max_stress);
  w.key("max_charge_residual", max_charge);
  if (!trace.error.empty()) w.key("error", trace.error);
  w.key_object("config", cfg.to_kv());
  write_file(dir / "summary.json", w.str());
  return trace.error.empty() ? 0 : 3;
}

int cmd_simulate(const RunConfig& cfg) { return run_simulate_into(cfg, cfg.out_dir); }

int cmd_spectrum(const RunConfig& cfg, bool export_matrix) {
  fs::create_directories(cfg.out_dir);
  WallTimer timer(cfg.out_dir);
  const Grid g = cfg.grid();
  const GeneratorMatrix A = assemble_generator(cfg.material, cfg.fractional(), g);
  if (export_matrix) {
    std::ofstream os(fs::path(cfg.out_dir) / "generator.txt", std::ios::binary);
    export_generator(A, os);
  }
  const SpectrumReport rep = spectrum(A);
  JsonWriter w;
  w.key("command", std::string("spectrum"));
  w.key("dim", static_cast<long long>(A.dim()));
  w.key("max_real_part", rep.max_real_part);
  w.key("min_abs_real_part", rep.min_abs_real_part);
  w.key("min_abs_eigenvalue", rep.min_abs_eigenvalue);
  w.key_complex_array("eigenvalues", rep.eigenvalues);
  w.key_object("config", cfg.to_kv());
  write_file(fs::path(cfg.out_dir) / "spectrum.json", w.str());
  return 0;
}

int cmd_resolvent(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  WallTimer timer(cfg.out_dir);
  const Grid g = cfg.grid();
  const FractionalParams fp = cfg.fractional();
  const GeneratorMatrix A = assemble_generator(cfg.material, fp, g);
  const ResolventProfile prof = resolvent_profile(A, cfg.material, fp, g);
  JsonWriter w;
  w.key("command", std::string("resolvent"));
  w.key("fitted_slope", prof.fitted_slope);
  w.key("window_lo", prof.window_lo);
  w.key("window_hi", prof.window_hi);
  w.key("growth_exponent_bound", 1.0 - cfg.alpha);
  w.key_array("lambdas", prof.lambdas);
  w.key_array("norms", prof.norms);
  w.key_array("peak_lambdas", prof.peak_lambdas);
  w.key_array("peak_norms", prof.peak_norms);
  w.key_object("config", cfg.to_kv());
  write_file(fs::path(cfg.out_dir) / "resolvent.json", w.str());
  return 0;
}

int cmd_decay_fit(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  WallTimer timer(cfg.out_dir);
  const Grid g = cfg.grid();
  const FractionalParams fp = cfg.fractional();
  const StateVector u0 = initial_condition(cfg.sim.initial_condition, g, cfg.seed);
  const EnergyTrace trace = simulate(cfg.sim, cfg.material, fp, g, u0);
  const auto [t0, t1] = default_decay_window(trace);
  const DecayFit fit = fit_decay(trace, t0, t1);
  const double p = 2.0 / (1.0 - cfg.alpha);
  JsonWriter w;
  w.key("command", std::string("decay-fit"));
  w.key("exponent", fit.exponent);
  w.key("r_squared", fit.r_squared);
  w.key("window_t0", fit.t0);
  w.key("window_t1", fit.t1);
  w.key("samples", static_cast<long long>(fit.samples));
  w.key("theory_exponent", -p);
  w.key("compensated_slope", fit_compensated_slope(trace, t0, t1, p));
  if (!trace.error.empty()) w.key("error", trace.error);
  w.key_object("config", cfg.to_kv());
  write_file(fs::path(cfg.out_dir) / "decay_fit.json", w.str());
  return trace.error.empty() ? 0 : 3;
}

int cmd_verify_fractional(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  WallTimer timer(cfg.out_dir);
  const FractionalParams fp = cfg.fractional();

  // Closed-form suite on a high-resolution rule.
  const XiQuadrature rule = build_xi_quadrature(fp, 8192, truncation_for_tail(fp.alpha, 2e-7));
  double worst_j2 = 0, worst_j3 = 0;
  for (int i = 0; i < 20; ++i) {
    const double shift = 0.1 * std::pow(1e5, i / 19.0); // |lambda| + eta in [0.1, 1e4]
    const double lam = shift - fp.eta;
    if (lam <= 0) continue;
    const auto ref = closed_form_integrals(fp, lam);
    const double j2q = std::sqrt(integrate_xi(rule, [&](double x) {
      const double d = shift + x * x;
      return 1.0 / (d * d);
    }));
    const double j3q = std::sqrt(integrate_xi(rule, [&](double x) {
      const double d = shift + x * x;
      return x * x / (d * d * d * d);
    }));
    worst_j2 = std::max(worst_j2, std::abs(j2q - ref.J2) / ref.J2);
    worst_j3 = std::max(worst_j3, std::abs(j3q - ref.J3) / ref.J3);
  }
  const auto ref1 = closed_form_integrals(fp, 1.0);
  const double cq = integrate_xi(rule, [&](double x) {
    const double m = mu_weight(x, fp.alpha);
    return m * m / (x * x + fp.eta + 1.0);
  });

  // Representation equivalence against the convolution oracle.
  std::vector<double> rep_K, rep_err;
  for (int K : {64, 128, 256}) {
    const auto r = representation_error(fp, K, 1e-3, 10.0, [](double t) { return std::sin(t); },
                                        [](double t) { return std::cos(t); });
    rep_K.push_back(K);
    rep_err.push_back(r.rel_l2_error);
  }

  // Analytic check of the oracle itself on f(t) = t.
  const double dt = 1e-3;
  const int n = 10000;
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = i * dt;
  const auto orc = caputo_oracle(f, fp, dt);
  double worst_lin = 0;
  for (int i = 1; i <= n; ++i)
    worst_lin = std::max(worst_lin, std::abs(orc[i] - caputo_of_linear(fp, i * dt)));

  JsonWriter w;
  w.key("command", std::string("verify-fractional"));
  w.key("suite_rule_nodes", static_cast<long long>(rule.count()));
  w.key("suite_rule_truncation", rule.truncation);
  w.key("suite_rule_certified_error", rule.certified_rel_error);
  w.key("j2_max_rel_error", worst_j2);
  w.key("j3_max_rel_error", worst_j3);
  w.key("c_quadrature", cq);
  w.key("c_adaptive", ref1.C);
  w.key("c_rel_error", std::abs(cq - ref1.C) / ref1.C);
  w.key_array("representation_K", rep_K);
  w.key_array("representation_rel_l2_error", rep_err);
  w.key("caputo_linear_max_abs_error", worst_lin);
  w.key_object("config", cfg.to_kv());
  write_file(fs::path(cfg.out_dir) / "verify_fractional.json", w.str());
  return 0;
}

int cmd_sweep(const RunConfig& base, const std::vector<double>& alphas) {
  fs::create_directories(base.out_dir);
  WallTimer timer(base.out_dir);
  int rc = 0;
  std::vector<double> done;
  for (double alpha : alphas) {
    RunConfig cfg = base;
    cfg.alpha = alpha;
    char tag[32];
    std::snprintf(tag, sizeof tag, "alpha-%.4g", alpha);
    cfg.out_dir = (fs::path(base.out_dir) / tag).string();
    cfg.validate();
    rc = std::max(rc, run_simulate_into(cfg, cfg.out_dir));
    done.push_back(alpha);
  }
  JsonWriter index;
  index.key("command", std::string("sweep"));
  index.key_array("alphas", done);
  index.key_object("config", base.to_kv());
  write_file(fs::path(base.out_dir) / "sweep.json", index.str());
  return rc;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"transmission heat / piezoelectric beam simulator with fractional damping"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<double> sweep_alphas = {0.3, 0.5, 0.7};
  bool export_matrix = false;

  auto* sim = app.add_subcommand("simulate", "run the flow and emit trace.csv + summary.json");
  auto* spec = app.add_subcommand("spectrum", "dense eigenvalues of the generator");
  auto* res = app.add_subcommand("resolvent", "imaginary-axis resolvent profile and slope");
  auto* dec = app.add_subcommand("decay-fit", "long run plus log-log energy decay fit");
  auto* ver = app.add_subcommand("verify-fractional",
                                 "closed-form integral suite and oracle comparison");
  auto* swp = app.add_subcommand("sweep", "independent simulate runs over a list of alphas");
  for (CLI::App* c : {sim, spec, res, dec, ver, swp}) add_common(c, args);
  swp->add_option("--alphas", sweep_alphas, "alpha values to sweep");
  spec->add_flag("--export-matrix", export_matrix,
                 "also write the generator triplets to generator.txt");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve_config(args);
    if (sim->parsed()) return cmd_simulate(cfg);
    if (spec->parsed()) return cmd_spectrum(cfg, export_matrix);
    if (res->parsed()) return cmd_resolvent(cfg);
    if (dec->parsed()) return cmd_decay_fit(cfg);
    if (ver->parsed()) return cmd_verify_fractional(cfg);
    if (swp->parsed()) return cmd_sweep(cfg, sweep_alphas);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
