#pragma once

#include <complex>
#include <vector>

#include "piezoheat/timestep.hpp"

namespace piezoheat {

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0;
  double min_abs_real_part = 0;
  double min_abs_eigenvalue = 0;
};

/// Full eigenvalue set of the dense form of A_h (LAPACK dgeev).
/// Refuses dimensions above ~4000.
SpectrumReport spectrum(const GeneratorMatrix& A);

/// Operator norm of (i lambda - A_h)^{-1} in the energy norm, computed as
/// 1/sigma_min of the Gram-Cholesky-weighted shifted matrix via power
/// iteration on the inverse. Throws if the shift is singular.
double resolvent_norm(const GeneratorMatrix& A, double lambda, const MaterialParams& mp,
                      const FractionalParams& fp, const Grid& g);

/// Reusable evaluator (factors the Gram matrix once).
class ResolventEvaluator {
public:
  ResolventEvaluator(const GeneratorMatrix& A, const MaterialParams& mp,
                     const FractionalParams& fp, const Grid& g);
  double norm_at(double lambda) const;
  int dim() const { return dim_; }

private:
  Eigen::SparseMatrix<std::complex<double>> A_;
  Eigen::SparseMatrix<std::complex<double>> L_; // Cholesky factor of the Gram matrix
  int dim_ = 0;
};

struct ResolventOptions {
  double lambda_min = 0.1;
  double lambda_max = 1e3;
  int n_base = 60;     ///< log-spaced base samples over [lambda_min, lambda_max]
  int n_scan = 160;    ///< uniform scan inside the fit window (peak detection)
  int polish_iters = 14;
  double window_lo = 0; ///< 0 = automatic: window_hi/5
  double window_hi = 0; ///< 0 = automatic: half the grid cutoff 0.5/h_beam
};

/// Sampled profile of ||(i lambda - A_h)^{-1}||_H over a log base grid, a
/// uniform scan of the fit window, and golden-refined local peaks.
/// fitted_slope is the log-log least-squares slope over every sample in the
/// window; it approaches the growth exponent from below under refinement,
/// while the polished peaks trace the resonance envelope itself.
struct ResolventProfile {
  std::vector<double> lambdas;
  std::vector<double> norms;
  std::vector<double> peak_lambdas;
  std::vector<double> peak_norms;
  double fitted_slope = 0;
  double window_lo = 0, window_hi = 0;
};

ResolventProfile resolvent_profile(const GeneratorMatrix& A, const MaterialParams& mp,
                                   const FractionalParams& fp, const Grid& g,
                                   const ResolventOptions& opts = {});

struct DecayFit {
  double exponent = 0;
  double r_squared = 0;
  double t0 = 0, t1 = 0;
  int samples = 0;
};

/// Least-squares slope of log E against log t over [t0, t1].
DecayFit fit_decay(const EnergyTrace& trace, double t0, double t1);

/// Fitted slope of log(E(t) * t^p) over the same window (boundedness probe).
double fit_compensated_slope(const EnergyTrace& trace, double t0, double t1, double p);

/// Default window: starts once E has dropped 10x, ends while E stays 1e6x
/// above the solver noise floor (1e-26 of the initial energy).
std::pair<double, double> default_decay_window(const EnergyTrace& trace);

struct StationaryKernelReport {
  bool applicable = false; ///< false when every requested K is 0
  std::vector<int> Ks;
  std::vector<double> inner_radius;
  std::vector<double> min_abs_eigenvalue;
  bool monotone_decreasing = false;
};

/// Refinement study of the near-stationary mode: for eta = 0 the smallest
/// eigenvalue modulus must sink toward 0 as the xi rule resolves the origin;
/// for eta > 0 it stays bounded away from 0.
StationaryKernelReport verify_stationary_kernel(const MaterialParams& mp,
                                                const FractionalParams& fp, int n_heat,
                                                int n_beam, const std::vector<int>& Ks,
                                                double Xi = 0.0);

} // namespace piezoheat
