#pragma once

#include <iosfwd>

#include <Eigen/Sparse>

#include "piezoheat/domain.hpp"

namespace piezoheat {

/// Index ranges of the state blocks inside the flat layout.
struct BlockMap {
  int z_begin = 0, z_size = 0;
  int v_begin = 0, V_begin = 0, p_begin = 0, P_begin = 0;
  int beam_size = 0;
  int phi_begin = 0, phi_size = 0;
  int n_xi = 0;
};

/// Semi-discrete generator A_h of the augmented system, sparse.
struct GeneratorMatrix {
  Eigen::SparseMatrix<double> A;
  BlockMap blocks;

  int dim() const { return static_cast<int>(A.rows()); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(A); }
};

/// Build A_h: centered second differences inside each rod, essential values
/// eliminated, the interface realized by ghost elimination of the two flux
/// conditions with the heat flux (V(0) - z_m)/h1, and the memory integral as
/// a quadrature row. Rejects chi1 <= 0.
GeneratorMatrix assemble_generator(const MaterialParams& mp, const FractionalParams& fp,
                                   const Grid& g);

StateVector apply_generator(const GeneratorMatrix& A, const StateVector& u);

/// Discrete right side of the energy balance:
/// -kappa ||z_x||^2 - c sum (xi^2+eta) w |phi|^2, always <= 0. Uses the same
/// stencils and quadratures as energy(), so Re<A_h U, U>_H reproduces it to
/// round-off.
double dissipation_rate(const StateVector& u, const MaterialParams& mp,
                        const FractionalParams& fp, const Grid& g);

/// Gram matrix of the energy inner product; u' G u = 2 * energy(u).total.
Eigen::SparseMatrix<double> gram_matrix(const MaterialParams& mp, const FractionalParams& fp,
                                        const Grid& g);

/// <A u, u>_H via the Gram matrix.
double generator_quadratic_form(const GeneratorMatrix& A, const Eigen::SparseMatrix<double>& gram,
                                const StateVector& u);

/// Text export: header with dimension and block map, then (row, col, value)
/// triplets, 0-based, one per line.
void export_generator(const GeneratorMatrix& A, std::ostream& os);

} // namespace piezoheat
