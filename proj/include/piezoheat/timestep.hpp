#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "piezoheat/assembly.hpp"

namespace piezoheat {

enum class Scheme { backward_euler, crank_nicolson };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

struct SimConfig {
  double dt = 1e-2;
  double t_end = 40.0;
  Scheme scheme = Scheme::crank_nicolson;
  int trace_stride = 10;
  std::string initial_condition = "standard";

  void validate() const;
};

/// Sampled run history. dissipation_residuals[i] is the largest
/// |dE/dt - (trapezoid of dissipation_rate)| over the steps since the
/// previous sample (0 at t = 0).
struct EnergyTrace {
  std::vector<double> times;
  std::vector<EnergyBreakdown> breakdowns;
  std::vector<double> dissipation_residuals;
  std::vector<TransmissionResiduals> transmission;
  /// Empty on a clean run; otherwise the mid-run failure that truncated it.
  std::string error;

  std::size_t size() const { return times.size(); }
};

/// One factorization per (A, dt, scheme), reused across steps.
class Stepper {
public:
  Stepper(const GeneratorMatrix& A, Scheme scheme, double dt);
  /// In-place step; throws on solver failure or non-finite values.
  void advance(StateVector& u) const;
  Scheme scheme() const { return scheme_; }
  double dt() const { return dt_; }

private:
  Scheme scheme_;
  double dt_;
  Eigen::SparseMatrix<double> rhs_op_; // identity (BE) or I + dt/2 A (CN)
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// One-shot step (factorizes internally; prefer Stepper in loops).
StateVector step(const StateVector& u, const GeneratorMatrix& A, Scheme scheme, double dt);

/// Run the flow of U' = A_h U from U0 (phi block must be zero) and record the
/// energy trace.
EnergyTrace simulate(const SimConfig& cfg, const MaterialParams& mp, const FractionalParams& fp,
                     const Grid& g, const StateVector& u0);

/// Named initial states (zero, standard, heat-only, beam-only, random) or a
/// whitespace-separated state file via "file:<path>".
StateVector initial_condition(const std::string& name, const Grid& g, std::uint64_t seed);

} // namespace piezoheat
