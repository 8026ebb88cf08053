#include "piezoheat/timestep.hpp"

#include <cmath>
#include <fstream>

namespace piezoheat {

Scheme scheme_from_string(const std::string& s) {
  if (s == "backward_euler") return Scheme::backward_euler;
  if (s == "crank_nicolson") return Scheme::crank_nicolson;
  throw std::invalid_argument("unknown scheme '" + s +
                              "' (expected backward_euler or crank_nicolson)");
}

std::string to_string(Scheme s) {
  return s == Scheme::backward_euler ? "backward_euler" : "crank_nicolson";
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("sim.dt must be > 0");
  if (!(t_end >= dt)) throw std::invalid_argument("sim.t_end must be >= dt");
  if (trace_stride < 1) throw std::invalid_argument("sim.trace_stride must be >= 1");
}

Stepper::Stepper(const GeneratorMatrix& A, Scheme scheme, double dt)
    : scheme_(scheme), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  const int n = A.dim();
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  const double theta = (scheme == Scheme::backward_euler) ? 1.0 : 0.5;
  Eigen::SparseMatrix<double> lhs = I - (dt * theta) * A.A;
  rhs_op_ = (scheme == Scheme::backward_euler) ? I : Eigen::SparseMatrix<double>(I + (dt * 0.5) * A.A);
  lu_.compute(lhs);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("step: sparse factorization of (I - dt*theta*A) failed");
}

void Stepper::advance(StateVector& u) const {
  const Eigen::VectorXd rhs = rhs_op_ * u.data;
  Eigen::VectorXd next = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success) throw std::runtime_error("step: linear solve failed");
  if (!next.allFinite()) throw std::runtime_error("step: non-finite state, aborting run");
  u.data = std::move(next);
}

StateVector step(const StateVector& u, const GeneratorMatrix& A, Scheme scheme, double dt) {
  Stepper st(A, scheme, dt);
  StateVector out = u;
  st.advance(out);
  return out;
}

EnergyTrace simulate(const SimConfig& cfg, const MaterialParams& mp, const FractionalParams& fp,
                     const Grid& g, const StateVector& u0) {
  cfg.validate();
  if (u0.dim() != g.dim()) throw std::invalid_argument("simulate: state/grid mismatch");
  for (int j = 0; j < g.beam_points(); ++j)
    for (int k = 0; k < g.n_xi(); ++k)
      if (u0.phi(j, k) != 0.0)
        throw std::invalid_argument("simulate: initial memory phi must vanish");

  const GeneratorMatrix A = assemble_generator(mp, fp, g);
  const Stepper st(A, cfg.scheme, cfg.dt);
  const int n_steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));

  EnergyTrace trace;
  StateVector u = u0;
  EnergyBreakdown e = energy(u, mp, g, fp);
  double rate = dissipation_rate(u, mp, fp, g);
  trace.times.push_back(0.0);
  trace.breakdowns.push_back(e);
  trace.dissipation_residuals.push_back(0.0);
  trace.transmission.push_back(transmission_residuals(u, mp, g));

  double window_residual = 0.0;
  for (int s = 1; s <= n_steps; ++s) {
    try {
      st.advance(u);
    } catch (const std::exception& ex) {
      trace.error = ex.what();
      break;
    }
    const EnergyBreakdown e_next = energy(u, mp, g, fp);
    const double rate_next = dissipation_rate(u, mp, fp, g);
    const double de_dt = (e_next.total - e.total) / cfg.dt;
    window_residual = std::max(window_residual, std::abs(de_dt - 0.5 * (rate + rate_next)));
    e = e_next;
    rate = rate_next;
    if (s % cfg.trace_stride == 0 || s == n_steps) {
      trace.times.push_back(s * cfg.dt);
      trace.breakdowns.push_back(e);
      trace.dissipation_residuals.push_back(window_residual);
      trace.transmission.push_back(transmission_residuals(u, mp, g));
      window_residual = 0.0;
    }
  }
  return trace;
}

namespace {

// "file:<path>": whitespace-separated values for the full flat state vector.
StateVector state_from_file(const std::string& path, const Grid& g) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open initial-condition file '" + path + "'");
  StateVector u = StateVector::zero(g);
  for (int i = 0; i < u.dim(); ++i)
    if (!(in >> u.data[i]))
      throw std::invalid_argument("initial-condition file '" + path + "' holds fewer than " +
                                  std::to_string(u.dim()) + " values");
  double extra;
  if (in >> extra)
    throw std::invalid_argument("initial-condition file '" + path + "' holds more than " +
                                std::to_string(u.dim()) + " values");
  return u;
}

} // namespace

StateVector initial_condition(const std::string& name, const Grid& g, std::uint64_t seed) {
  if (name.rfind("file:", 0) == 0) return state_from_file(name.substr(5), g);
  StateVector u = StateVector::zero(g);
  auto heat_sine = [&] {
    for (int i = 0; i < g.n_heat; ++i)
      u.z(i) = std::sin(kPi * (g.heat_x(i) + g.ell1) / g.ell1);
  };
  auto beam_cosine = [&] {
    for (int j = 0; j < g.beam_points(); ++j)
      u.v(j) = std::cos(kPi * g.beam_x(j) / (2.0 * g.ell2));
  };
  if (name == "zero") {
    return u;
  } else if (name == "standard") {
    heat_sine();
    beam_cosine();
  } else if (name == "heat-only") {
    heat_sine();
  } else if (name == "beam-only") {
    beam_cosine();
    for (int j = 0; j < g.beam_points(); ++j)
      u.p(j) = std::cos(3.0 * kPi * g.beam_x(j) / (2.0 * g.ell2));
  } else if (name == "random") {
    u = random_state(g, seed);
    for (int j = 0; j < g.beam_points(); ++j)
      for (int k = 0; k < g.n_xi(); ++k) u.phi(j, k) = 0.0;
  } else {
    throw std::invalid_argument("unknown initial condition preset '" + name + "'");
  }
  return u;
}

} // namespace piezoheat
