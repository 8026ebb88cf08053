#include "piezoheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <lapacke.h>

namespace piezoheat {

namespace {

struct LogLogFit {
  double slope = 0, r_squared = 1;
};

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  LogLogFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double inter = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ymean = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double ly = std::log(y[i]);
    const double pred = f.slope * std::log(x[i]) + inter;
    ss_res += (ly - pred) * (ly - pred);
    ss_tot += (ly - ymean) * (ly - ymean);
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

} // namespace

SpectrumReport spectrum(const GeneratorMatrix& A) {
  const int n = A.dim();
  if (n > 4000)
    throw std::invalid_argument("spectrum: dimension " + std::to_string(n) +
                                " exceeds the dense eigensolver ceiling (4000)");
  Eigen::MatrixXd dense = A.dense(); // column-major, overwritten by dgeev
  std::vector<double> wr(n), wi(n);
  const int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, dense.data(), n, wr.data(),
                                 wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw std::runtime_error("spectrum: dgeev did not converge (info=" + std::to_string(info) + ")");

  SpectrumReport rep;
  rep.eigenvalues.reserve(n);
  rep.max_real_part = -std::numeric_limits<double>::infinity();
  rep.min_abs_real_part = std::numeric_limits<double>::infinity();
  rep.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const std::complex<double> ev(wr[i], wi[i]);
    rep.eigenvalues.push_back(ev);
    rep.max_real_part = std::max(rep.max_real_part, ev.real());
    rep.min_abs_real_part = std::min(rep.min_abs_real_part, std::abs(ev.real()));
    rep.min_abs_eigenvalue = std::min(rep.min_abs_eigenvalue, std::abs(ev));
  }
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
            });
  return rep;
}

ResolventEvaluator::ResolventEvaluator(const GeneratorMatrix& A, const MaterialParams& mp,
                                       const FractionalParams& fp, const Grid& g)
    : dim_(A.dim()) {
  A_ = A.A.cast<std::complex<double>>();
  const Eigen::SparseMatrix<double> G = gram_matrix(mp, fp, g);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                       Eigen::NaturalOrdering<int>>
      llt(G);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("resolvent: Cholesky of the Gram matrix failed");
  L_ = Eigen::SparseMatrix<double>(llt.matrixL()).cast<std::complex<double>>();
}

double ResolventEvaluator::norm_at(double lambda) const {
  using CVec = Eigen::VectorXcd;
  Eigen::SparseMatrix<std::complex<double>> B(dim_, dim_);
  B.setIdentity();
  B = std::complex<double>(0.0, lambda) * B - A_;
  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu(B);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("resolvent: shift i*lambda is singular at lambda=" +
                             std::to_string(lambda));

  const auto lowerL = L_.triangularView<Eigen::Lower>();
  const auto upperLT = L_.transpose().triangularView<Eigen::Upper>();

  // Power iteration on M M^* with M = L^T B^{-1} L^{-T}; ||M||_2 is the
  // resolvent norm in the energy inner product.
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  CVec x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = std::complex<double>(nd(rng), nd(rng));
  x /= x.norm();

  double sigma2 = 0, prev = 0;
  for (int it = 0; it < 300; ++it) {
    // y = M^* x = L^{-1} (B^{-H} (L x))
    CVec t = lowerL * x;
    CVec s = lu.adjoint().solve(t);
    CVec y = lowerL.solve(s);
    // z = M y = L^T (B^{-1} (L^{-T} y))
    t = upperLT.solve(y);
    s = lu.solve(t);
    CVec z = L_.transpose() * s;
    sigma2 = z.norm();
    if (!(sigma2 > 0) || !std::isfinite(sigma2))
      throw std::runtime_error("resolvent: power iteration broke down");
    x = z / sigma2;
    if (it > 8 && std::abs(sigma2 - prev) <= 1e-9 * sigma2) break;
    prev = sigma2;
  }
  return std::sqrt(sigma2);
}

double resolvent_norm(const GeneratorMatrix& A, double lambda, const MaterialParams& mp,
                      const FractionalParams& fp, const Grid& g) {
  return ResolventEvaluator(A, mp, fp, g).norm_at(lambda);
}

namespace {

// Golden-section maximization of f on [a, b].
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

} // namespace

ResolventProfile resolvent_profile(const GeneratorMatrix& A, const MaterialParams& mp,
                                   const FractionalParams& fp, const Grid& g,
                                   const ResolventOptions& opts) {
  ResolventEvaluator ev(A, mp, fp, g);
  ResolventProfile prof;
  prof.window_hi = opts.window_hi > 0
                       ? opts.window_hi
                       : std::min(0.5 / g.h_beam, 0.8 * opts.lambda_max);
  prof.window_lo = opts.window_lo > 0 ? opts.window_lo : std::max(prof.window_hi / 5.0, 2.0);
  if (!(prof.window_lo < prof.window_hi))
    throw std::invalid_argument("resolvent_profile: empty fit window");

  std::vector<double> lambdas;
  for (int i = 0; i < opts.n_base; ++i) {
    const double t = static_cast<double>(i) / (opts.n_base - 1);
    lambdas.push_back(opts.lambda_min * std::pow(opts.lambda_max / opts.lambda_min, t));
  }
  const int scan_begin = static_cast<int>(lambdas.size());
  for (int i = 0; i < opts.n_scan; ++i)
    lambdas.push_back(prof.window_lo +
                      (prof.window_hi - prof.window_lo) * (i + 0.5) / opts.n_scan);

  std::vector<double> norms(lambdas.size());
  const std::int64_t total = static_cast<std::int64_t>(lambdas.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < total; ++i) norms[i] = ev.norm_at(lambdas[i]);

  // Peak polish: refine every local maximum of the uniform scan.
  std::vector<int> maxima;
  for (int i = scan_begin + 1; i + 1 < static_cast<int>(lambdas.size()); ++i)
    if (norms[i] > norms[i - 1] && norms[i] > norms[i + 1]) maxima.push_back(i);
  std::vector<std::pair<double, double>> peaks(maxima.size());
  const std::int64_t n_peaks = static_cast<std::int64_t>(maxima.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t j = 0; j < n_peaks; ++j) {
    const int i = maxima[j];
    peaks[j] = golden_max([&](double l) { return ev.norm_at(l); }, lambdas[i - 1],
                          lambdas[i + 1], opts.polish_iters);
  }
  std::sort(peaks.begin(), peaks.end());

  for (const auto& [lam, val] : peaks) {
    prof.peak_lambdas.push_back(lam);
    prof.peak_norms.push_back(val);
    lambdas.push_back(lam);
    norms.push_back(val);
  }

  // Slope fit over every sample inside the window. The fit sits below the
  // peak envelope and climbs toward it from below as the discretization
  // refines; the polished peaks keep the envelope itself visible in reports.
  std::vector<double> fit_l, fit_n;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (lambdas[i] >= prof.window_lo && lambdas[i] <= prof.window_hi) {
      fit_l.push_back(lambdas[i]);
      fit_n.push_back(norms[i]);
    }
  if (fit_l.size() < 3) throw std::runtime_error("resolvent_profile: too few window samples");
  prof.fitted_slope = fit_loglog(fit_l, fit_n).slope;
  std::vector<int> order(lambdas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lambdas[a] < lambdas[b]; });
  for (int i : order) {
    prof.lambdas.push_back(lambdas[i]);
    prof.norms.push_back(norms[i]);
  }
  return prof;
}

DecayFit fit_decay(const EnergyTrace& trace, double t0, double t1) {
  if (!(t0 > 0) || !(t1 > t0)) throw std::invalid_argument("fit_decay: need 0 < t0 < t1");
  std::vector<double> ts, es;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.times[i] < t0 || trace.times[i] > t1) continue;
    const double e = trace.breakdowns[i].total;
    if (!(e > 0.0))
      throw std::invalid_argument("fit_decay: non-positive energy inside the window");
    ts.push_back(trace.times[i]);
    es.push_back(e);
  }
  if (ts.size() < 3) throw std::invalid_argument("fit_decay: window contains too few samples");
  const LogLogFit f = fit_loglog(ts, es);
  return DecayFit{f.slope, f.r_squared, ts.front(), ts.back(), static_cast<int>(ts.size())};
}

double fit_compensated_slope(const EnergyTrace& trace, double t0, double t1, double p) {
  std::vector<double> ts, es;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.times[i] < t0 || trace.times[i] > t1) continue;
    const double e = trace.breakdowns[i].total;
    if (!(e > 0.0)) continue;
    ts.push_back(trace.times[i]);
    es.push_back(e * std::pow(trace.times[i], p));
  }
  if (ts.size() < 3)
    throw std::invalid_argument("fit_compensated_slope: window contains too few samples");
  return fit_loglog(ts, es).slope;
}

std::pair<double, double> default_decay_window(const EnergyTrace& trace) {
  if (trace.size() < 4) throw std::invalid_argument("decay window: trace too short");
  const double e0 = trace.breakdowns.front().total;
  if (!(e0 > 0)) throw std::invalid_argument("decay window: zero initial energy");
  double t0 = -1, t1 = -1;
  const double floor = 1e6 * 1e-26 * e0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (t0 < 0 && trace.breakdowns[i].total <= 0.1 * e0 && trace.times[i] > 0)
      t0 = trace.times[i];
    if (trace.breakdowns[i].total >= floor) t1 = trace.times[i];
  }
  if (t0 < 0 || !(t1 > t0))
    throw std::invalid_argument("decay window: energy never dropped 10x inside the trace");
  return {t0, t1};
}

StationaryKernelReport verify_stationary_kernel(const MaterialParams& mp,
                                                const FractionalParams& fp, int n_heat,
                                                int n_beam, const std::vector<int>& Ks,
                                                double Xi) {
  StationaryKernelReport rep;
  for (int K : Ks) {
    if (K == 0) continue; // no memory block, nothing to probe
    XiQuadrature rule = build_xi_quadrature(fp, K, Xi);
    Grid g = Grid::make(n_heat, n_beam, mp, std::move(rule));
    const SpectrumReport sp = spectrum(assemble_generator(mp, fp, g));
    rep.Ks.push_back(K);
    rep.inner_radius.push_back(g.xi.inner_radius);
    rep.min_abs_eigenvalue.push_back(sp.min_abs_eigenvalue);
  }
  rep.applicable = !rep.Ks.empty();
  rep.monotone_decreasing = rep.applicable;
  for (std::size_t i = 1; i < rep.min_abs_eigenvalue.size(); ++i)
    if (!(rep.min_abs_eigenvalue[i] < rep.min_abs_eigenvalue[i - 1]))
      rep.monotone_decreasing = false;
  return rep;
}

} // namespace piezoheat
