#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>

#include "piezoheat/fractional.hpp"

namespace piezoheat {

/// Physical constants of the heat rod / piezoelectric beam system.
struct MaterialParams {
  double rho = 1.0;    ///< mass density
  double chi = 2.0;    ///< elastic stiffness
  double gamma = 1.0;  ///< piezoelectric coefficient (sign-free)
  double beta = 1.0;   ///< impermeability coefficient
  double mu_mag = 1.0; ///< magnetic permeability
  double kappa = 1.0;  ///< thermal diffusivity
  double ell1 = 1.0;   ///< heat rod length
  double ell2 = 1.0;   ///< beam length

  /// Effective stiffness; must stay strictly positive for coercivity.
  double chi1() const { return chi - gamma * gamma * beta; }
  void validate() const;
};

/// Finite-difference grid. The heat rod (-ell1, 0) carries n_heat interior
/// unknowns; the beam (0, ell2) carries n_beam interior unknowns plus the
/// interface node x = 0 (a flux boundary, hence an unknown). The interface is
/// shared with the heat rod: z(0) is identified with the beam velocity V(0)
/// and never stored separately. n_heat = 0 is the documented detached-rod
/// limit, K = 0 the memoryless limit.
struct Grid {
  int n_heat = 0;
  int n_beam = 0;
  double h_heat = 0.0;
  double h_beam = 0.0;
  double ell1 = 1.0;
  double ell2 = 1.0;
  XiQuadrature xi;

  static Grid make(int n_heat, int n_beam, const MaterialParams& mp, XiQuadrature xi);

  int beam_points() const { return n_beam + 1; } ///< unknowns per beam field
  int n_xi() const { return xi.count(); }
  int dim() const { return n_heat + 4 * beam_points() + beam_points() * n_xi(); }

  // Flat state layout offsets: [z | v | V | p | P | phi].
  int oz() const { return 0; }
  int ov() const { return n_heat; }
  int oV() const { return n_heat + beam_points(); }
  int op() const { return n_heat + 2 * beam_points(); }
  int oP() const { return n_heat + 3 * beam_points(); }
  int ophi() const { return n_heat + 4 * beam_points(); }

  double heat_x(int i) const { return -ell1 + (i + 1) * h_heat; } ///< i in [0, n_heat)
  double beam_x(int j) const { return j * h_beam; }               ///< j in [0, beam_points())
  /// Trapezoid weight of beam node j (half cell at the interface).
  double beam_weight(int j) const { return j == 0 ? 0.5 * h_beam : h_beam; }
};

/// Discrete unknown U = (z, v, V, p, P, phi). Essential values z(-ell1) = 0,
/// v(ell2) = 0, p(ell2) = 0 are eliminated, so every stored entry is free.
struct StateVector {
  Eigen::VectorXd data;
  int m = 0;  ///< heat unknowns
  int nb = 0; ///< beam unknowns per field
  int K = 0;  ///< xi nodes

  static StateVector zero(const Grid& g);
  static StateVector from_raw(const Grid& g, Eigen::VectorXd raw);

  double& z(int i) { return data[i]; }
  double& v(int j) { return data[m + j]; }
  double& V(int j) { return data[m + nb + j]; }
  double& p(int j) { return data[m + 2 * nb + j]; }
  double& P(int j) { return data[m + 3 * nb + j]; }
  double& phi(int j, int k) { return data[m + 4 * nb + j * K + k]; }
  double z(int i) const { return data[i]; }
  double v(int j) const { return data[m + j]; }
  double V(int j) const { return data[m + nb + j]; }
  double p(int j) const { return data[m + 2 * nb + j]; }
  double P(int j) const { return data[m + 3 * nb + j]; }
  double phi(int j, int k) const { return data[m + 4 * nb + j * K + k]; }

  int dim() const { return static_cast<int>(data.size()); }
};

/// Named energy components; total is half their sum.
struct EnergyBreakdown {
  double te = 0;            ///< ||z||^2
  double mech_ke = 0;       ///< rho ||V||^2
  double mag_ke = 0;        ///< mu ||P||^2
  double pe = 0;            ///< chi1 ||v_x||^2
  double electromech_e = 0; ///< beta ||gamma v_x - p_x||^2
  double diff_e = 0;        ///< c ||phi||^2
  double total = 0;
};

EnergyBreakdown energy(const StateVector& u, const MaterialParams& mp, const Grid& g,
                       const FractionalParams& fp);

/// Energy norm; norm_h(u)^2 == 2*energy(u).total exactly (shared quadrature).
double norm_h(const StateVector& u, const MaterialParams& mp, const Grid& g,
              const FractionalParams& fp);
/// Product norm with unit coefficients and ||p_x||^2 in place of the
/// electromechanical combination.
double norm_standard(const StateVector& u, const Grid& g);

/// Norm-equivalence constants from the proof of the sandwich inequality;
/// coeff_c is the diffusive normalization constant of the energy norm.
double sandwich_c1(const MaterialParams& mp, double coeff_c);
double sandwich_c2(const MaterialParams& mp, double coeff_c);

/// Interface conditions evaluated with one-sided second-order stencils:
/// r_dirichlet = z(0) - V(0) (zero by construction),
/// r_stress    = chi v_x(0) - gamma beta p_x(0) - kappa z_x(0),
/// r_charge    = beta p_x(0) - gamma beta v_x(0).
struct TransmissionResiduals {
  double r_dirichlet = 0;
  double r_stress = 0;
  double r_charge = 0;
};
TransmissionResiduals transmission_residuals(const StateVector& u, const MaterialParams& mp,
                                             const Grid& g);

/// Componentwise uniform [-1,1] state (essential conditions hold by layout).
StateVector random_state(const Grid& g, std::uint64_t seed);

} // namespace piezoheat
