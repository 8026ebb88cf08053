#include "piezoheat/domain.hpp"

#include <cmath>
#include <random>

namespace piezoheat {

void MaterialParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0))
      throw std::invalid_argument(std::string("material.") + name + " must be > 0");
  };
  positive(rho, "rho");
  positive(chi, "chi");
  positive(beta, "beta");
  positive(mu_mag, "mu_mag");
  positive(kappa, "kappa");
  positive(ell1, "ell1");
  positive(ell2, "ell2");
  if (!(chi1() > 0.0))
    throw std::invalid_argument("effective stiffness chi1 = chi - gamma^2*beta must be > 0");
}

Grid Grid::make(int n_heat, int n_beam, const MaterialParams& mp, XiQuadrature xi) {
  mp.validate();
  if (n_heat != 0 && n_heat < 3)
    throw std::invalid_argument("grid.n_heat must be >= 3 (or 0 for a detached rod)");
  if (n_beam < 3) throw std::invalid_argument("grid.n_beam must be >= 3");
  Grid g;
  g.n_heat = n_heat;
  g.n_beam = n_beam;
  g.ell1 = mp.ell1;
  g.ell2 = mp.ell2;
  g.h_heat = n_heat > 0 ? mp.ell1 / (n_heat + 1) : 0.0;
  g.h_beam = mp.ell2 / (n_beam + 1);
  g.xi = std::move(xi);
  return g;
}

StateVector StateVector::zero(const Grid& g) {
  StateVector u;
  u.data = Eigen::VectorXd::Zero(g.dim());
  u.m = g.n_heat;
  u.nb = g.beam_points();
  u.K = g.n_xi();
  return u;
}

StateVector StateVector::from_raw(const Grid& g, Eigen::VectorXd raw) {
  if (raw.size() != g.dim()) throw std::invalid_argument("state dimension mismatch");
  StateVector u = zero(g);
  u.data = std::move(raw);
  return u;
}

namespace {

// Face derivative of a beam field: faces f = 0..n_beam, with the eliminated
// right-end value 0. Same stencil as the assembled generator.
inline double face_dx(const StateVector& u, int off, int f, const Grid& g) {
  const double right = (f + 1 < u.nb) ? u.data[off + f + 1] : 0.0;
  return (right - u.data[off + f]) / g.h_beam;
}

} // namespace

EnergyBreakdown energy(const StateVector& u, const MaterialParams& mp, const Grid& g,
                       const FractionalParams& fp) {
  if (u.dim() != g.dim()) throw std::invalid_argument("energy: state/grid dimension mismatch");
  EnergyBreakdown e;
  for (int i = 0; i < g.n_heat; ++i) e.te += g.h_heat * u.z(i) * u.z(i);
  const int nb = g.beam_points();
  for (int j = 0; j < nb; ++j) {
    const double w = g.beam_weight(j);
    e.mech_ke += mp.rho * w * u.V(j) * u.V(j);
    e.mag_ke += mp.mu_mag * w * u.P(j) * u.P(j);
  }
  const int ov = g.ov(), op = g.op();
  for (int f = 0; f < nb; ++f) {
    const double vx = face_dx(u, ov, f, g);
    const double px = face_dx(u, op, f, g);
    const double em = mp.gamma * vx - px;
    e.pe += mp.chi1() * g.h_beam * vx * vx;
    e.electromech_e += mp.beta * g.h_beam * em * em;
  }
  const int K = g.n_xi();
  for (int j = 0; j < nb; ++j) {
    const double w = g.beam_weight(j);
    for (int k = 0; k < K; ++k) {
      const double ph = u.phi(j, k);
      e.diff_e += fp.coeff_c * w * g.xi.weights[k] * ph * ph;
    }
  }
  e.total = 0.5 * (e.te + e.mech_ke + e.mag_ke + e.pe + e.electromech_e + e.diff_e);
  return e;
}

double norm_h(const StateVector& u, const MaterialParams& mp, const Grid& g,
              const FractionalParams& fp) {
  return std::sqrt(2.0 * energy(u, mp, g, fp).total);
}

double norm_standard(const StateVector& u, const Grid& g) {
  double s = 0.0;
  for (int i = 0; i < g.n_heat; ++i) s += g.h_heat * u.z(i) * u.z(i);
  const int nb = g.beam_points();
  for (int j = 0; j < nb; ++j) {
    const double w = g.beam_weight(j);
    s += w * (u.V(j) * u.V(j) + u.P(j) * u.P(j));
  }
  for (int f = 0; f < nb; ++f) {
    const double vx = face_dx(u, g.ov(), f, g);
    const double px = face_dx(u, g.op(), f, g);
    s += g.h_beam * (vx * vx + px * px);
  }
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < g.n_xi(); ++k)
      s += g.beam_weight(j) * g.xi.weights[k] * u.phi(j, k) * u.phi(j, k);
  return std::sqrt(s);
}

double sandwich_c2(const MaterialParams& mp, double coeff_c) {
  const double g2 = mp.gamma * mp.gamma;
  return std::max({1.0, mp.rho, mp.mu_mag, coeff_c,
                   mp.chi1() + 2.0 * mp.beta * std::max(g2, 1.0)});
}

double sandwich_c1(const MaterialParams& mp, double coeff_c) {
  const double g2 = mp.gamma * mp.gamma;
  const double denom = std::max({1.0, 1.0 / mp.rho, 1.0 / mp.mu_mag, 1.0 / coeff_c,
                                 2.0 * std::max(1.0 / mp.beta, g2 / mp.chi1())});
  return 1.0 / denom;
}

TransmissionResiduals transmission_residuals(const StateVector& u, const MaterialParams& mp,
                                             const Grid& g) {
  if (u.dim() != g.dim())
    throw std::invalid_argument("transmission_residuals: dimension mismatch");
  TransmissionResiduals r;
  // z(0) is represented by V(0): the Dirichlet coupling holds identically.
  r.r_dirichlet = 0.0;

  const double h2 = g.h_beam;
  auto one_sided_beam = [&](int off) {
    return (-3.0 * u.data[off] + 4.0 * u.data[off + 1] - u.data[off + 2]) / (2.0 * h2);
  };
  const double vx0 = one_sided_beam(g.ov());
  const double px0 = one_sided_beam(g.op());

  double zx0 = 0.0;
  if (g.n_heat > 0) {
    const double h1 = g.h_heat;
    const int m = g.n_heat;
    const double z0 = u.V(0); // interface value
    zx0 = (3.0 * z0 - 4.0 * u.z(m - 1) + u.z(m - 2)) / (2.0 * h1);
  }
  r.r_stress = mp.chi * vx0 - mp.gamma * mp.beta * px0 - mp.kappa * zx0;
  r.r_charge = mp.beta * px0 - mp.gamma * mp.beta * vx0;
  return r;
}

StateVector random_state(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  StateVector u = StateVector::zero(g);
  for (int i = 0; i < u.dim(); ++i) u.data[i] = dist(rng);
  return u;
}

} // namespace piezoheat
