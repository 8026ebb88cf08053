#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace piezoheat {

inline constexpr double kPi = 3.14159265358979323846;

/// Order and exponential weight of the fractional dissipation operator,
/// together with the normalization constant c = sin(alpha*pi)/pi that
/// appears in front of the diffusive output integral.
struct FractionalParams {
  double alpha = 0.5;   ///< derivative order, 0 < alpha < 1
  double eta = 0.0;     ///< exponential weight rate, eta >= 0
  double coeff_c = 0.0; ///< sin(alpha*pi)/pi, kept consistent with alpha

  static FractionalParams make(double alpha, double eta);
  void validate() const;
};

/// Singular weight mu(xi) = |xi|^((2*alpha-1)/2).
/// Throws std::domain_error at xi = 0 when alpha < 1/2 (the weight blows up).
double mu_weight(double xi, double alpha);

/// Quadrature rule for integrals of even functions over the real xi line.
///
/// Convention: nodes are strictly positive and ascending; each weight
/// already carries the factor 2 accounting for the mirrored half line, so
///   integral_R f(xi) dxi  ~=  sum_k weights[k] * f(nodes[k])
/// for even f. Nodes never sit at xi = 0.
struct XiQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  double truncation = 0.0;   ///< outer cutoff Xi
  double inner_radius = 0.0; ///< excluded ball around the origin
  /// Worst relative error against the closed-form J2/J3 reference sweep,
  /// measured by the builder.
  double certified_rel_error = std::numeric_limits<double>::quiet_NaN();

  int count() const { return static_cast<int>(nodes.size()); }
  bool empty() const { return nodes.empty(); }
};

/// Outer cutoff such that the analytic tail bound
/// Xi^(2*alpha-2)/(2-2*alpha) drops below tol.
double truncation_for_tail(double alpha, double tol);

/// Excluded-ball mass parameter zeta(K); the ball radius is zeta^(1/(2*alpha)).
/// Shrinks quadratically in K so refinement studies converge monotonically.
double xi_inner_mass(int K);

/// Build the graded rule: K Gauss-Legendre nodes on geometric panels
/// between the excluded ball and Xi. Xi <= 0 selects the tail-bound default.
XiQuadrature build_xi_quadrature(const FractionalParams& fp, int K, double Xi);

/// Same, but throws (reporting the achieved error) if the measured
/// closed-form agreement is worse than tol.
XiQuadrature build_xi_quadrature(const FractionalParams& fp, int K, double Xi, double tol);

/// Reference values for the xi-line integrals. J2, J3 come from their
/// closed forms; C, D, J1 and the constant c1 from adaptive integration,
/// independent of any XiQuadrature.
struct ClosedFormIntegrals {
  double C = 0;  // integral |xi|^(2a-1)/(xi^2+eta+1)
  double D = 0;  // integral |xi|^(2a-1)/(xi^2+eta+1)^2
  double J1 = 0; // integral |xi|^(a+1/2)/(|lambda|+xi^2+eta)^2 = c1*(|lambda|+eta)^(a/2-5/4)
  double J2 = 0; // sqrt(pi/2)*(|lambda|+eta)^(-3/4)
  double J3 = 0; // (sqrt(pi)/4)*(|lambda|+eta)^(-5/4)
  double c1 = 0;
};
ClosedFormIntegrals closed_form_integrals(const FractionalParams& fp, double lambda);

/// Evaluate an integrand against the rule (even-function convention).
template <typename F>
double integrate_xi(const XiQuadrature& rule, F&& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(rule.nodes[k]);
  return s;
}

/// Advance the diffusive memory variables one step with the input held
/// constant over the step: exact exponential integrator for
///   phi' = -(xi^2+eta) phi + mu(xi) V.
void phi_step(std::span<double> phi, double v_input, const FractionalParams& fp,
              const XiQuadrature& rule, double dt);
void phi_step_serial(std::span<double> phi, double v_input, const FractionalParams& fp,
                     const XiQuadrature& rule, double dt);

/// Diffusive output c * sum_k w_k mu(xi_k) phi_k.
double fractional_output(std::span<const double> phi, const FractionalParams& fp,
                         const XiQuadrature& rule);

/// Raised when an adaptive integral or a quadrature build misses its target;
/// carries the achieved accuracy.
struct AccuracyError : std::runtime_error {
  double achieved;
  AccuracyError(const std::string& what, double achieved_)
      : std::runtime_error(what), achieved(achieved_) {}
};

} // namespace piezoheat
