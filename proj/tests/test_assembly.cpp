#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "piezoheat/timestep.hpp"

using namespace piezoheat;

namespace {

struct Setup {
  MaterialParams mp;
  FractionalParams fp;
  Grid g;
  Setup(double alpha = 0.5, double eta = 1.0, int K = 12, int m = 12, int n = 16,
        MaterialParams mat = {})
      : mp(mat), fp(FractionalParams::make(alpha, eta)),
        g(Grid::make(m, n, mp, K > 0 ? build_xi_quadrature(fp, K, 0.0) : XiQuadrature{})) {}
};

} // namespace

TEST_CASE("generator rejects degenerate stiffness") {
  Setup s;
  MaterialParams bad = s.mp;
  bad.chi = 0.9; // chi1 < 0
  CHECK_THROWS_AS(assemble_generator(bad, s.fp, s.g), std::invalid_argument);
}

TEST_CASE("kinematic identity rows and phi block action") {
  Setup s;
  const GeneratorMatrix A = assemble_generator(s.mp, s.fp, s.g);
  CHECK(A.dim() == s.g.dim());

  SUBCASE("zero maps to zero") {
    const StateVector out = apply_generator(A, StateVector::zero(s.g));
    CHECK(out.data.norm() == 0.0);
  }

  SUBCASE("v' = V exactly") {
    StateVector u = StateVector::zero(s.g);
    for (int j = 0; j < s.g.beam_points(); ++j) u.V(j) = std::cos(1.0 + j);
    const StateVector out = apply_generator(A, u);
    for (int j = 0; j < s.g.beam_points(); ++j)
      CHECK(out.v(j) == doctest::Approx(u.V(j)).epsilon(1e-15));
  }

  SUBCASE("single phi node: relaxation plus quadrature feedback") {
    const int k = 3, j = 5;
    StateVector u = StateVector::zero(s.g);
    u.phi(j, k) = 2.0;
    const StateVector out = apply_generator(A, u);
    const double xi = s.g.xi.nodes[k];
    CHECK(out.phi(j, k) == doctest::Approx(-(xi * xi + s.fp.eta) * 2.0).epsilon(1e-14));
    const double expect_V =
        -(s.fp.coeff_c / s.mp.rho) * s.g.xi.weights[k] * mu_weight(xi, s.fp.alpha) * 2.0;
    CHECK(out.V(j) == doctest::Approx(expect_V).epsilon(1e-14));
    // no coupling into other xi nodes
    for (int kk = 0; kk < s.g.n_xi(); ++kk)
      if (kk != k) CHECK(out.phi(j, kk) == 0.0);
  }
}

TEST_CASE("phi block is diagonal in xi") {
  Setup s(0.4, 0.5, 8, 6, 8);
  const GeneratorMatrix A = assemble_generator(s.mp, s.fp, s.g);
  const int of = s.g.ophi();
  const int K = s.g.n_xi();
  for (int col = 0; col < A.dim(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A.A, col); it; ++it) {
      if (it.row() < of || it.col() < of) continue;
      const int rk = (static_cast<int>(it.row()) - of) % K;
      const int rj = (static_cast<int>(it.row()) - of) / K;
      const int ck = (static_cast<int>(it.col()) - of) % K;
      const int cj = (static_cast<int>(it.col()) - of) / K;
      CHECK(rk == ck);
      CHECK(rj == cj);
    }
}

TEST_CASE("discrete dissipativity identity") {
  for (auto [m, n, K] : {std::tuple{8, 10, 6}, {16, 20, 12}, {24, 30, 24}}) {
    Setup s(0.5, 1.0, K, m, n);
    const GeneratorMatrix A = assemble_generator(s.mp, s.fp, s.g);
    const auto G = gram_matrix(s.mp, s.fp, s.g);
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector u = random_state(s.g, 500 + trial);
      const double lhs = generator_quadratic_form(A, G, u);
      const double rhs = dissipation_rate(u, s.mp, s.fp, s.g);
      const double nrm2 = u.data.dot(G * u.data);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * nrm2);
      CHECK(lhs <= 1e-12 * nrm2);
      CHECK(rhs <= 0.0);
    }
  }
}

TEST_CASE("gram matrix reproduces the energy quadratic form") {
  Setup s(0.35, 0.8, 10, 9, 13);
  const auto G = gram_matrix(s.mp, s.fp, s.g);
  for (int trial = 0; trial < 25; ++trial) {
    const StateVector u = random_state(s.g, 300 + trial);
    const double quad = u.data.dot(G * u.data);
    const double twice_e = 2.0 * energy(u, s.mp, s.g, s.fp).total;
    CHECK(quad == doctest::Approx(twice_e).epsilon(1e-13));
  }
}

TEST_CASE("dissipation rate closed forms") {
  Setup s;
  SUBCASE("zero state") {
    CHECK(dissipation_rate(StateVector::zero(s.g), s.mp, s.fp, s.g) == 0.0);
  }
  SUBCASE("heat sine mode approaches the continuum Rayleigh quotient") {
    Setup fine(0.5, 1.0, 6, 96, 8);
    StateVector u = StateVector::zero(fine.g);
    for (int i = 0; i < fine.g.n_heat; ++i)
      u.z(i) = std::sin(kPi * (fine.g.heat_x(i) + fine.g.ell1) / fine.g.ell1);
    const double got = dissipation_rate(u, fine.mp, fine.fp, fine.g);
    const double expect = -fine.mp.kappa * kPi * kPi / (fine.g.ell1 * fine.g.ell1) *
                          (fine.g.ell1 / 2);
    CHECK(got == doctest::Approx(expect).epsilon(2e-3)); // O(h^2) on this mesh
  }
  SUBCASE("phi-only state matches the weighted node sum") {
    StateVector u = StateVector::zero(s.g);
    double expect = 0.0;
    for (int j = 0; j < s.g.beam_points(); ++j)
      for (int k = 0; k < s.g.n_xi(); ++k) {
        u.phi(j, k) = 0.1 * (j + 1) - 0.05 * k;
        const double xi = s.g.xi.nodes[k];
        expect -= s.fp.coeff_c * s.g.beam_weight(j) * s.g.xi.weights[k] *
                  (xi * xi + s.fp.eta) * u.phi(j, k) * u.phi(j, k);
      }
    CHECK(dissipation_rate(u, s.mp, s.fp, s.g) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("heat block alone has the Dirichlet Laplacian spectrum") {
  Setup s(0.5, 1.0, 0, 12, 8);
  const GeneratorMatrix A = assemble_generator(s.mp, s.fp, s.g);
  // beam frozen: V(0) = 0, so the z-z block is the Dirichlet-Dirichlet operator
  const Eigen::MatrixXd Az = A.dense().topLeftCorner(s.g.n_heat, s.g.n_heat);
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Az).eigenvalues();
  std::vector<double> expect;
  const double h = s.g.h_heat;
  for (int k = 1; k <= s.g.n_heat; ++k) {
    const double sk = std::sin(k * kPi * h / (2 * s.g.ell1));
    expect.push_back(-s.mp.kappa * 4.0 / (h * h) * sk * sk);
  }
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < s.g.n_heat; ++k)
    CHECK(ev[k] == doctest::Approx(expect[k]).epsilon(1e-12));
}

TEST_CASE("decoupled charge block is a conservative discrete wave equation") {
  // gamma = 0, no memory, detached rod: (p, P) is a free wave system with a
  // flux end at x = 0 and a pinned end at x = ell2.
  MaterialParams mat;
  mat.gamma = 0.0;
  mat.chi = 1.0;
  Setup s(0.5, 1.0, 0, 0, 12, mat);
  const GeneratorMatrix A = assemble_generator(s.mp, s.fp, s.g);
  const int nb = s.g.beam_points();
  Eigen::MatrixXd dense = A.dense();
  // with gamma = 0 the charge rows carry no displacement coupling
  CHECK(dense.block(s.g.oP(), s.g.ov(), nb, nb).norm() == 0.0);
  CHECK(dense.block(s.g.oV(), s.g.op(), nb, nb).norm() == 0.0);

  Eigen::MatrixXd wave(2 * nb, 2 * nb);
  wave.topLeftCorner(nb, nb) = dense.block(s.g.op(), s.g.op(), nb, nb);
  wave.topRightCorner(nb, nb) = dense.block(s.g.op(), s.g.oP(), nb, nb);
  wave.bottomLeftCorner(nb, nb) = dense.block(s.g.oP(), s.g.op(), nb, nb);
  wave.bottomRightCorner(nb, nb) = dense.block(s.g.oP(), s.g.oP(), nb, nb);
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(wave).eigenvalues();

  std::vector<double> freq;
  for (int i = 0; i < ev.size(); ++i) {
    CHECK(std::abs(ev[i].real()) < 1e-10); // purely imaginary pairs
    if (ev[i].imag() > 0) freq.push_back(ev[i].imag());
  }
  std::sort(freq.begin(), freq.end());
  REQUIRE(static_cast<int>(freq.size()) == nb);
  const double h = s.g.h_beam;
  for (int k = 1; k <= nb; ++k) {
    const double expect = std::sqrt(s.mp.beta / s.mp.mu_mag) * (2.0 / h) *
                          std::sin((k - 0.5) * kPi * h / (2.0 * s.g.ell2));
    CHECK(freq[k - 1] == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("gamma = 0 decouples the charge pair except at the interface") {
  MaterialParams mat;
  mat.gamma = 0.0;
  mat.chi = 1.0;
  Setup s(0.5, 1.0, 8, 10, 12, mat);
  const Eigen::MatrixXd A = assemble_generator(s.mp, s.fp, s.g).dense();
  const int nb = s.g.beam_points(), m = s.g.n_heat;
  // charge equations see no displacement, temperature, or memory data
  CHECK(A.block(s.g.oP(), s.g.ov(), nb, nb).norm() == 0.0);
  CHECK(A.block(s.g.oP(), s.g.oV(), nb, nb).norm() == 0.0);
  CHECK(A.block(s.g.oP(), 0, nb, m).norm() == 0.0);
  CHECK(A.block(s.g.oP(), s.g.ophi(), nb, nb * s.g.n_xi()).norm() == 0.0);
  // displacement equations see no charge data, but keep the heat flux row
  CHECK(A.block(s.g.oV(), s.g.op(), nb, nb).norm() == 0.0);
  CHECK(A.block(s.g.oV(), s.g.oP(), nb, nb).norm() != 0.0); // interface damping on V(0)
  CHECK(A.block(s.g.oV(), 0, nb, m).norm() != 0.0);
}

TEST_CASE("interface rows are first order, interior rows second order") {
  // manufactured fields compatible with the interface conditions:
  // z = 1 - cos(2 pi (x+l1)/l1), v = cos(pi x/2), p = cos(3 pi x/2), V = P = 0
  auto row_errors = [](int m, int n) {
    Setup s(0.5, 1.0, 0, m, n);
    StateVector u = StateVector::zero(s.g);
    for (int i = 0; i < m; ++i)
      u.z(i) = 1.0 - std::cos(2 * kPi * (s.g.heat_x(i) + s.g.ell1) / s.g.ell1);
    for (int j = 0; j < s.g.beam_points(); ++j) {
      u.v(j) = std::cos(kPi * s.g.beam_x(j) / 2.0);
      u.p(j) = std::cos(3 * kPi * s.g.beam_x(j) / 2.0);
    }
    const StateVector out = apply_generator(assemble_generator(s.mp, s.fp, s.g), u);
    double interior = 0.0, interface = 0.0;
    for (int i = 0; i < m; ++i) {
      const double zxx = std::pow(2 * kPi / s.g.ell1, 2) *
                         std::cos(2 * kPi * (s.g.heat_x(i) + s.g.ell1) / s.g.ell1);
      interior = std::max(interior, std::abs(out.z(i) - s.mp.kappa * zxx));
    }
    for (int j = 0; j < s.g.beam_points(); ++j) {
      const double x = s.g.beam_x(j);
      const double vxx = -std::pow(kPi / 2, 2) * std::cos(kPi * x / 2);
      const double pxx = -std::pow(3 * kPi / 2, 2) * std::cos(3 * kPi * x / 2);
      const double expect_V = (s.mp.chi * vxx - s.mp.gamma * s.mp.beta * pxx) / s.mp.rho;
      const double expect_P = (s.mp.beta * pxx - s.mp.gamma * s.mp.beta * vxx) / s.mp.mu_mag;
      const double err = std::max(std::abs(out.V(j) - expect_V), std::abs(out.P(j) - expect_P));
      if (j == 0)
        interface = std::max(interface, err);
      else
        interior = std::max(interior, err);
    }
    return std::pair{interior, interface};
  };
  const auto [int1, ifc1] = row_errors(16, 16);
  const auto [int2, ifc2] = row_errors(32, 32);
  const auto [int4, ifc4] = row_errors(64, 64);
  CHECK(int1 / int2 > 3.0); // second order away from the interface
  CHECK(int2 / int4 > 3.0);
  // The energy-exact interface closure pays with an O(1) pointwise defect in
  // the single interface row (half-cell flux balance); record that it stays
  // bounded. Solution-level accuracy is measured below.
  CHECK(ifc2 < 2.0 * ifc1 + 1.0);
  CHECK(ifc4 < 2.0 * ifc1 + 1.0);
}

TEST_CASE("energy trajectories converge under joint mesh refinement") {
  // global accuracy probe: E(T) from the standard start against a fine
  // reference; first order or better despite the interface closure
  auto energy_at_T = [](int n) {
    Setup s(0.5, 1.0, 16, n, n);
    const GeneratorMatrix A = assemble_generator(s.mp, s.fp, s.g);
    const Stepper st(A, Scheme::crank_nicolson, 2.5e-3);
    StateVector u = StateVector::zero(s.g);
    for (int i = 0; i < s.g.n_heat; ++i)
      u.z(i) = std::sin(kPi * (s.g.heat_x(i) + s.g.ell1) / s.g.ell1);
    for (int j = 0; j < s.g.beam_points(); ++j)
      u.v(j) = std::cos(kPi * s.g.beam_x(j) / (2.0 * s.g.ell2));
    for (int k = 0; k < 400; ++k) st.advance(u);
    return energy(u, s.mp, s.g, s.fp).total;
  };
  const double ref = energy_at_T(96);
  const double e12 = std::abs(energy_at_T(12) - ref);
  const double e24 = std::abs(energy_at_T(24) - ref);
  const double e48 = std::abs(energy_at_T(48) - ref);
  CHECK(e12 / e24 > 1.8);
  CHECK(e24 / e48 > 1.8);
}

TEST_CASE("triplet export carries the block map") {
  Setup s(0.5, 1.0, 4, 4, 4);
  const GeneratorMatrix A = assemble_generator(s.mp, s.fp, s.g);
  std::ostringstream os;
  export_generator(A, os);
  const std::string text = os.str();
  CHECK(text.find("dim " + std::to_string(s.g.dim())) != std::string::npos);
  CHECK(text.find("phi " + std::to_string(s.g.ophi())) != std::string::npos);
  // every stored entry appears as a line
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == static_cast<std::size_t>(A.A.nonZeros()) + 3);
}
