#include "piezoheat/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace piezoheat {

FractionalParams FractionalParams::make(double alpha, double eta) {
  FractionalParams fp;
  fp.alpha = alpha;
  fp.eta = eta;
  fp.coeff_c = std::sin(alpha * kPi) / kPi;
  fp.validate();
  return fp;
}

void FractionalParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("fractional.alpha must lie in (0,1), got " + std::to_string(alpha));
  if (!(eta >= 0.0))
    throw std::invalid_argument("fractional.eta must be >= 0, got " + std::to_string(eta));
  const double expected = std::sin(alpha * kPi) / kPi;
  if (std::abs(coeff_c - expected) > 1e-14 * std::max(1.0, std::abs(expected)))
    throw std::invalid_argument("fractional.coeff_c inconsistent with alpha");
}

double mu_weight(double xi, double alpha) {
  const double expo = (2.0 * alpha - 1.0) / 2.0;
  if (xi == 0.0) {
    if (expo < 0.0) throw std::domain_error("mu_weight singular at xi=0 for alpha < 1/2");
    return expo == 0.0 ? 1.0 : 0.0;
  }
  return std::pow(std::abs(xi), expo);
}

double truncation_for_tail(double alpha, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tail tolerance must be positive");
  return std::pow(tol * (2.0 - 2.0 * alpha), 1.0 / (2.0 * alpha - 2.0));
}

double xi_inner_mass(int K) {
  const double k = std::max(1, K);
  return 4e-3 * (64.0 / k) * (64.0 / k);
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt_ = p1 / dp;
      t -= dt_;
      if (std::abs(dt_) < 1e-15) break;
    }
    x[n - 1 - i] = t;
    w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

double j2_closed(double A) { return std::sqrt(kPi / 2.0) / std::pow(A, 0.75); }
double j3_closed(double A) { return std::sqrt(kPi) / 4.0 / std::pow(A, 1.25); }

double certify(const XiQuadrature& rule) {
  // J2/J3 integrands are alpha-free and have exact closed forms, probing the
  // rule's panel resolution and both cutoffs across the full (|lambda|+eta)
  // range of interest.
  double worst = 0.0;
  for (double A : {1e-1, 1.0, 1e1, 1e2, 1e3, 1e4}) {
    double s2 = 0.0, s3 = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double d = A + rule.nodes[k] * rule.nodes[k];
      s2 += rule.weights[k] / (d * d);
      s3 += rule.weights[k] * rule.nodes[k] * rule.nodes[k] / (d * d * d * d);
    }
    worst = std::max(worst, std::abs(std::sqrt(s2) - j2_closed(A)) / j2_closed(A));
    worst = std::max(worst, std::abs(std::sqrt(s3) - j3_closed(A)) / j3_closed(A));
  }
  return worst;
}

} // namespace

XiQuadrature build_xi_quadrature(const FractionalParams& fp, int K, double Xi) {
  fp.validate();
  if (K < 2) throw std::invalid_argument("xi quadrature needs K >= 2");
  const double zeta = xi_inner_mass(K);
  if (Xi <= 0.0) Xi = std::max(truncation_for_tail(fp.alpha, 0.25 * zeta), 30.0);

  // Excluded ball: the mu^2-mass below the first node is zeta, uniformly in
  // alpha, so refinement in K tightens all alpha at the same rate.
  const double b = std::min(std::pow(zeta, 1.0 / (2.0 * fp.alpha)), 0.1 * Xi);
  if (!(Xi > b)) throw std::invalid_argument("xi truncation must exceed the inner radius");

  const int panels = std::max(1, K / 4);
  const int base = K / panels;
  const int rem = K - base * panels;
  const double ratio = std::pow(Xi / b, 1.0 / panels);

  XiQuadrature rule;
  rule.truncation = Xi;
  rule.inner_radius = b;
  rule.nodes.reserve(K);
  rule.weights.reserve(K);

  std::vector<double> gx, gw;
  double lo = b;
  for (int i = 0; i < panels; ++i) {
    const double hi = (i == panels - 1) ? Xi : lo * ratio;
    const int q = base + (i < rem ? 1 : 0);
    gauss_legendre(q, gx, gw);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int j = 0; j < q; ++j) {
      rule.nodes.push_back(mid + half * gx[j]);
      rule.weights.push_back(2.0 * half * gw[j]); // factor 2: mirrored half line
    }
    lo = hi;
  }
  rule.certified_rel_error = certify(rule);
  return rule;
}

XiQuadrature build_xi_quadrature(const FractionalParams& fp, int K, double Xi, double tol) {
  XiQuadrature rule = build_xi_quadrature(fp, K, Xi);
  if (!(rule.certified_rel_error <= tol)) {
    std::ostringstream msg;
    msg << "xi quadrature missed tolerance " << tol << ": achieved relative error "
        << rule.certified_rel_error << " (K=" << K << ", Xi=" << rule.truncation << ")";
    throw AccuracyError(msg.str(), rule.certified_rel_error);
  }
  return rule;
}

namespace {

// Adaptive reference integral over (0,1); throws with the achieved estimate
// if the integrator cannot certify the requested accuracy.
template <typename F>
double adaptive_01(F&& f, double tol = 1e-12) {
  boost::math::quadrature::tanh_sinh<double> integ;
  double err = 0.0, l1 = 0.0;
  const double v = integ.integrate(f, 0.0, 1.0, tol, &err, &l1);
  if (err > 100 * tol) {
    std::ostringstream msg;
    msg << "adaptive integration did not converge: estimate " << v << ", error bound " << err;
    throw AccuracyError(msg.str(), err);
  }
  return v;
}

} // namespace

ClosedFormIntegrals closed_form_integrals(const FractionalParams& fp, double lambda) {
  fp.validate();
  const double a = fp.alpha, eta = fp.eta;
  if (lambda == 0.0 && eta == 0.0)
    throw std::invalid_argument("J integrals need lambda != 0 or eta > 0");

  ClosedFormIntegrals r;
  const double shift = std::abs(lambda) + eta;
  r.J2 = j2_closed(shift);
  r.J3 = j3_closed(shift);

  // C and D: split at xi = 1, map the tail to (0,1) by xi -> 1/t.
  const double A = eta + 1.0;
  r.C = 2.0 * (adaptive_01([&](double x) { return std::pow(x, 2 * a - 1) / (x * x + A); }) +
               adaptive_01([&](double t) { return std::pow(t, 1 - 2 * a) / (1 + A * t * t); }));
  r.D = 2.0 * (adaptive_01([&](double x) {
           const double d = x * x + A;
           return std::pow(x, 2 * a - 1) / (d * d);
         }) +
               adaptive_01([&](double t) {
                 const double d = 1 + A * t * t;
                 return std::pow(t, 3 - 2 * a) / (d * d);
               }));

  r.J1 = 2.0 * (adaptive_01([&](double x) {
           const double d = x * x + shift;
           return std::pow(x, a + 0.5) / (d * d);
         }) +
               adaptive_01([&](double t) {
                 const double d = 1 + shift * t * t;
                 return std::pow(t, 1.5 - a) / (d * d);
               }));

  // c1 = integral_1^inf (y-1)^(a/2-1/4) y^-2 dy, mapped by y -> 1/t.
  const double s = a / 2.0 - 0.25;
  r.c1 = adaptive_01([&](double t) { return std::pow(1.0 - t, s) * std::pow(t, -s); });
  return r;
}

void phi_step_serial(std::span<double> phi, double v_input, const FractionalParams& fp,
                     const XiQuadrature& rule, double dt) {
  if (phi.size() != rule.nodes.size())
    throw std::invalid_argument("phi_step: phi size does not match quadrature");
  if (!(dt > 0.0)) throw std::invalid_argument("phi_step: dt must be positive");
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double xi = rule.nodes[k];
    const double a = xi * xi + fp.eta;
    const double decay = std::exp(-a * dt);
    phi[k] = decay * phi[k] - std::expm1(-a * dt) / a * mu_weight(xi, fp.alpha) * v_input;
  }
}

void phi_step(std::span<double> phi, double v_input, const FractionalParams& fp,
              const XiQuadrature& rule, double dt) {
  if (phi.size() != rule.nodes.size())
    throw std::invalid_argument("phi_step: phi size does not match quadrature");
  if (!(dt > 0.0)) throw std::invalid_argument("phi_step: dt must be positive");
  const std::int64_t n = static_cast<std::int64_t>(phi.size());
  const double alpha = fp.alpha, eta = fp.eta;
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::int64_t k = 0; k < n; ++k) {
    const double xi = rule.nodes[k];
    const double a = xi * xi + eta;
    const double decay = std::exp(-a * dt);
    phi[k] = decay * phi[k] - std::expm1(-a * dt) / a * mu_weight(xi, alpha) * v_input;
  }
}

double fractional_output(std::span<const double> phi, const FractionalParams& fp,
                         const XiQuadrature& rule) {
  if (phi.size() != rule.nodes.size())
    throw std::invalid_argument("fractional_output: phi size does not match quadrature");
  double s = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k)
    s += rule.weights[k] * mu_weight(rule.nodes[k], fp.alpha) * phi[k];
  return fp.coeff_c * s;
}

} // namespace piezoheat
