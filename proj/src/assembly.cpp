#include "piezoheat/assembly.hpp"

#include <ostream>
#include <vector>

namespace piezoheat {

GeneratorMatrix assemble_generator(const MaterialParams& mp, const FractionalParams& fp,
                                   const Grid& g) {
  mp.validate();
  fp.validate();
  if (!(mp.chi1() > 0.0))
    throw std::invalid_argument("assemble_generator: chi1 <= 0, elimination is singular");

  const int m = g.n_heat;
  const int nb = g.beam_points();
  const int n = g.n_beam;
  const int K = g.n_xi();
  const double h1 = g.h_heat, h2 = g.h_beam;
  const int oz = g.oz(), ov = g.ov(), oV = g.oV(), op = g.op(), oP = g.oP(), of = g.ophi();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(3 * m + 14 * nb + 3 * nb * K));

  // Heat rod: z_i' = kappa z_xx, z(-ell1) = 0 eliminated, z(0) == V(0).
  if (m > 0) {
    const double c = mp.kappa / (h1 * h1);
    for (int i = 0; i < m; ++i) {
      trip.emplace_back(oz + i, oz + i, -2.0 * c);
      if (i > 0) trip.emplace_back(oz + i, oz + i - 1, c);
      if (i < m - 1) trip.emplace_back(oz + i, oz + i + 1, c);
    }
    trip.emplace_back(oz + m - 1, oV + 0, c);
  }

  // Kinematic rows v' = V, p' = P.
  for (int j = 0; j < nb; ++j) {
    trip.emplace_back(ov + j, oV + j, 1.0);
    trip.emplace_back(op + j, oP + j, 1.0);
  }

  // rho V' = chi v_xx - gamma beta p_xx - c*integral, mu P' = beta p_xx - gamma beta v_xx.
  const double cv = 1.0 / (mp.rho * h2 * h2);
  const double cp = 1.0 / (mp.mu_mag * h2 * h2);
  const double gb = mp.gamma * mp.beta;
  for (int j = 0; j < nb; ++j) {
    const int rV = oV + j, rP = oP + j;
    if (j == 0) {
      // Interface node: ghost elimination of the stress and charge conditions.
      // The charge condition cancels the heat flux from the P row; the V row
      // keeps -2 kappa/(h2) * z_x(0) with z_x(0) = (V(0) - z_m)/h1.
      trip.emplace_back(rV, ov + 0, -2.0 * mp.chi * cv);
      trip.emplace_back(rV, ov + 1, 2.0 * mp.chi * cv);
      trip.emplace_back(rV, op + 0, 2.0 * gb * cv);
      trip.emplace_back(rV, op + 1, -2.0 * gb * cv);
      if (m > 0) {
        const double cz = 2.0 * mp.kappa / (mp.rho * h2 * h1);
        trip.emplace_back(rV, oV + 0, -cz);
        trip.emplace_back(rV, oz + m - 1, cz);
      }
      trip.emplace_back(rP, op + 0, -2.0 * mp.beta * cp);
      trip.emplace_back(rP, op + 1, 2.0 * mp.beta * cp);
      trip.emplace_back(rP, ov + 0, 2.0 * gb * cp);
      trip.emplace_back(rP, ov + 1, -2.0 * gb * cp);
    } else {
      for (int d = -1; d <= 1; ++d) {
        const int jj = j + d;
        if (jj < 0 || jj > n) continue; // v(ell2) = p(ell2) = 0 eliminated
        const double s = (d == 0) ? -2.0 : 1.0;
        trip.emplace_back(rV, ov + jj, s * mp.chi * cv);
        trip.emplace_back(rV, op + jj, -s * gb * cv);
        trip.emplace_back(rP, op + jj, s * mp.beta * cp);
        trip.emplace_back(rP, ov + jj, -s * gb * cp);
      }
    }
  }

  // Memory block: phi' = -(xi^2+eta) phi + mu(xi) V, diagonal in xi, plus the
  // quadrature row of the output integral in the V equations.
  for (int j = 0; j < nb; ++j) {
    for (int k = 0; k < K; ++k) {
      const int r = of + j * K + k;
      const double xi = g.xi.nodes[k];
      const double muk = mu_weight(xi, fp.alpha);
      trip.emplace_back(r, r, -(xi * xi + fp.eta));
      trip.emplace_back(r, oV + j, muk);
      trip.emplace_back(oV + j, r, -(fp.coeff_c / mp.rho) * g.xi.weights[k] * muk);
    }
  }

  GeneratorMatrix gen;
  gen.A.resize(g.dim(), g.dim());
  gen.A.setFromTriplets(trip.begin(), trip.end());
  gen.A.makeCompressed();
  gen.blocks = BlockMap{oz, m, ov, oV, op, oP, nb, of, nb * K, K};
  return gen;
}

StateVector apply_generator(const GeneratorMatrix& A, const StateVector& u) {
  if (u.dim() != A.dim()) throw std::invalid_argument("apply_generator: dimension mismatch");
  StateVector out = u;
  out.data = A.A * u.data;
  return out;
}

double dissipation_rate(const StateVector& u, const MaterialParams& mp,
                        const FractionalParams& fp, const Grid& g) {
  if (u.dim() != g.dim()) throw std::invalid_argument("dissipation_rate: dimension mismatch");
  double s = 0.0;
  const int m = g.n_heat;
  if (m > 0) {
    const double h1 = g.h_heat;
    double prev = 0.0; // z(-ell1) = 0
    for (int i = 0; i < m; ++i) {
      const double d = (u.z(i) - prev) / h1;
      s -= mp.kappa * h1 * d * d;
      prev = u.z(i);
    }
    const double d = (u.V(0) - prev) / h1; // interface face, z(0) = V(0)
    s -= mp.kappa * h1 * d * d;
  }
  for (int j = 0; j < g.beam_points(); ++j) {
    const double w = g.beam_weight(j);
    for (int k = 0; k < g.n_xi(); ++k) {
      const double xi = g.xi.nodes[k];
      const double ph = u.phi(j, k);
      s -= fp.coeff_c * w * g.xi.weights[k] * (xi * xi + fp.eta) * ph * ph;
    }
  }
  return s;
}

Eigen::SparseMatrix<double> gram_matrix(const MaterialParams& mp, const FractionalParams& fp,
                                        const Grid& g) {
  const int m = g.n_heat, nb = g.beam_points();
  const int ov = g.ov(), oV = g.oV(), op = g.op(), oP = g.oP(), of = g.ophi();
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < m; ++i) trip.emplace_back(i, i, g.h_heat);
  for (int j = 0; j < nb; ++j) {
    const double w = g.beam_weight(j);
    trip.emplace_back(oV + j, oV + j, mp.rho * w);
    trip.emplace_back(oP + j, oP + j, mp.mu_mag * w);
    for (int k = 0; k < g.n_xi(); ++k) {
      const int r = of + j * g.n_xi() + k;
      trip.emplace_back(r, r, fp.coeff_c * w * g.xi.weights[k]);
    }
  }
  // Face quadratic form in (v_x, p_x): [[chi, -gamma beta], [-gamma beta, beta]].
  const double a11 = mp.chi, a12 = -mp.gamma * mp.beta, a22 = mp.beta;
  const double s = 1.0 / g.h_beam; // h2 * (1/h2)^2
  for (int f = 0; f < nb; ++f) {
    auto add = [&](int o1, int o2, double coef) {
      trip.emplace_back(o1 + f, o2 + f, coef * s);
      if (f + 1 < nb) {
        trip.emplace_back(o1 + f, o2 + f + 1, -coef * s);
        trip.emplace_back(o1 + f + 1, o2 + f, -coef * s);
        trip.emplace_back(o1 + f + 1, o2 + f + 1, coef * s);
      }
    };
    add(ov, ov, a11);
    add(op, op, a22);
    add(ov, op, a12);
    add(op, ov, a12);
  }
  Eigen::SparseMatrix<double> G(g.dim(), g.dim());
  G.setFromTriplets(trip.begin(), trip.end());
  G.makeCompressed();
  return G;
}

double generator_quadratic_form(const GeneratorMatrix& A, const Eigen::SparseMatrix<double>& gram,
                                const StateVector& u) {
  return u.data.dot(gram * (A.A * u.data));
}

void export_generator(const GeneratorMatrix& A, std::ostream& os) {
  const BlockMap& b = A.blocks;
  os << "# piezoheat generator, triplet form (row col value), 0-based\n";
  os << "dim " << A.dim() << "\n";
  os << "blocks z " << b.z_begin << " " << b.z_size << " v " << b.v_begin << " " << b.beam_size
     << " V " << b.V_begin << " " << b.beam_size << " p " << b.p_begin << " " << b.beam_size
     << " P " << b.P_begin << " " << b.beam_size << " phi " << b.phi_begin << " " << b.phi_size
     << " n_xi " << b.n_xi << "\n";
  char buf[64];
  for (int k = 0; k < A.A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A.A, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", static_cast<int>(it.row()),
                    static_cast<int>(it.col()), it.value());
      os << buf;
    }
}

} // namespace piezoheat
