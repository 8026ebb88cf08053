#include "piezoheat/caputo.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace piezoheat {

std::vector<double> caputo_kernel_moments(const FractionalParams& fp, double dt, int n) {
  const double a = fp.alpha, eta = fp.eta;
  // g(u) = integral_0^u e^{-eta s} s^{-alpha} ds
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    if (eta == 0.0) return std::pow(u, 1.0 - a) / (1.0 - a);
    return boost::math::tgamma_lower(1.0 - a, eta * u) / std::pow(eta, 1.0 - a);
  };
  std::vector<double> m(n);
  double prev = 0.0;
  for (int d = 1; d <= n; ++d) {
    const double cur = g(d * dt);
    m[d - 1] = cur - prev;
    prev = cur;
  }
  return m;
}

namespace {

template <bool Parallel>
std::vector<double> oracle_impl(std::span<const double> f, const FractionalParams& fp, double dt) {
  fp.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("caputo_oracle: dt must be positive");
  if (f.size() < 2) throw std::invalid_argument("caputo_oracle: need at least 2 samples");
  const int n = static_cast<int>(f.size()) - 1;
  const std::vector<double> m = caputo_kernel_moments(fp, dt, n);
  std::vector<double> df(n);
  for (int j = 0; j < n; ++j) df[j] = f[j + 1] - f[j];
  const double scale = 1.0 / (std::tgamma(1.0 - fp.alpha) * dt);

  std::vector<double> out(f.size(), 0.0);
#pragma omp parallel for schedule(static) if (Parallel && n > 512)
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int j = 0; j < i; ++j) s += df[j] * m[i - 1 - j];
    out[i] = scale * s;
  }
  return out;
}

} // namespace

std::vector<double> caputo_oracle(std::span<const double> f, const FractionalParams& fp,
                                  double dt) {
  return oracle_impl<true>(f, fp, dt);
}

std::vector<double> caputo_oracle_serial(std::span<const double> f, const FractionalParams& fp,
                                         double dt) {
  return oracle_impl<false>(f, fp, dt);
}

std::vector<double> caputo_oracle(std::span<const double> times, std::span<const double> f,
                                  const FractionalParams& fp) {
  if (times.size() != f.size() || times.size() < 2)
    throw std::invalid_argument("caputo_oracle: times/values size mismatch");
  const double dt = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-12 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("caputo_oracle: non-uniform time grid rejected");
  }
  return caputo_oracle(f, fp, dt);
}

double caputo_of_linear(const FractionalParams& fp, double t) {
  const double a = fp.alpha;
  if (t <= 0.0) return 0.0;
  if (fp.eta == 0.0) return std::pow(t, 1.0 - a) / std::tgamma(2.0 - a);
  return boost::math::tgamma_lower(1.0 - a, fp.eta * t) /
         (std::tgamma(1.0 - a) * std::pow(fp.eta, 1.0 - a));
}

RepresentationResult representation_error(const FractionalParams& fp, int K, double dt,
                                          double t_end, const std::function<double(double)>& f,
                                          const std::function<double(double)>& fprime,
                                          double Xi) {
  XiQuadrature rule = build_xi_quadrature(fp, K, Xi);
  const int n = static_cast<int>(std::lround(t_end / dt));

  std::vector<double> phi(rule.nodes.size(), 0.0); // phi(.,0,.) = 0
  std::vector<double> diff(n);
  for (int i = 0; i < n; ++i) {
    const double v_mid = fprime((i + 0.5) * dt);
    phi_step(phi, v_mid, fp, rule, dt);
    diff[i] = fractional_output(phi, fp, rule);
  }

  std::vector<double> fs(n + 1);
  for (int i = 0; i <= n; ++i) fs[i] = f(i * dt);
  const std::vector<double> orc = caputo_oracle(fs, fp, dt);

  double num = 0.0, den = 0.0, worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = diff[i] - orc[i + 1];
    num += e * e;
    den += orc[i + 1] * orc[i + 1];
    worst = std::max(worst, std::abs(e));
  }
  RepresentationResult r;
  r.rel_l2_error = std::sqrt(num / den);
  r.max_abs_error = worst;
  r.K = K;
  r.Xi = rule.truncation;
  r.dt = dt;
  r.t_end = t_end;
  return r;
}

} // namespace piezoheat
