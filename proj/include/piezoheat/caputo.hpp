#pragma once

#include <functional>
#include <span>
#include <vector>

#include "piezoheat/fractional.hpp"

namespace piezoheat {

// Convolution-side reference for the exponentially weighted Caputo
// derivative. Product integration: f is interpolated piecewise linearly
// (f' piecewise constant) and the kernel e^{-eta u} u^{-alpha} is
// integrated exactly on every subinterval.
//
// Input: samples f(0), f(dt), ..., f(N dt). Output has the same length;
// entry n is the derivative at t = n*dt (entry 0 is 0).
std::vector<double> caputo_oracle(std::span<const double> f, const FractionalParams& fp,
                                  double dt);
std::vector<double> caputo_oracle_serial(std::span<const double> f, const FractionalParams& fp,
                                         double dt);

// Overload taking explicit sample times; rejects non-uniform grids.
std::vector<double> caputo_oracle(std::span<const double> times, std::span<const double> f,
                                  const FractionalParams& fp);

// Exact kernel moments m_d = integral over ((d-1)dt, d dt) of e^{-eta u} u^{-alpha} du
// for d = 1..n.
std::vector<double> caputo_kernel_moments(const FractionalParams& fp, double dt, int n);

// Analytic derivative of f(t) = t: t^{1-alpha}/Gamma(2-alpha) for eta = 0,
// lower incomplete gamma form for eta > 0.
double caputo_of_linear(const FractionalParams& fp, double t);

/// Result of driving the diffusive representation with V = f' and comparing
/// the output against the convolution oracle on the same time grid.
struct RepresentationResult {
  double rel_l2_error = 0; ///< relative L2-in-time mismatch
  double max_abs_error = 0;
  int K = 0;
  double Xi = 0;
  double dt = 0;
  double t_end = 0;
};

RepresentationResult representation_error(const FractionalParams& fp, int K, double dt,
                                          double t_end, const std::function<double(double)>& f,
                                          const std::function<double(double)>& fprime,
                                          double Xi = 0.0);

} // namespace piezoheat
