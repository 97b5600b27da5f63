#pragma once

#include <string>

#include "redopt/problem.hpp"

namespace redopt {

struct CotangentState {
  Vec x;
  Vec lambda;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CotangentState> states;
  std::vector<Vec> controls;
  std::vector<double> hamiltonian;  // H at each node
  std::vector<Vec> momentum;        // J at each node

  size_t size() const { return times.size(); }
};

/// Control Hamiltonian <lambda, f(x,u)> - C(x,u).
double control_hamiltonian(const AffineControlSystem& sys, const Cost& cost,
                           const CotangentState& s, const Vec& u);

/// Eliminates the control: for quadratic cost u* solves g_jk u*_k =
/// <lambda, X_j>; general costs run a damped Newton iteration on the
/// stationarity condition from u = 0 (at most 50 iterations).
Vec optimal_control(const AffineControlSystem& sys, const Cost& cost,
                    const CotangentState& s);

/// H(lambda_x) = Hhat(lambda_x, u*(lambda_x)).
double optimal_hamiltonian(const AffineControlSystem& sys, const Cost& cost,
                           const CotangentState& s);

/// Canonical flow field (xdot, lambdadot) = (dH/dlambda, -dH/dx) in chart
/// coordinates, with the gradients by central differences of H.
void canonical_flow_field(const AffineControlSystem& sys, const Cost& cost,
                          const CotangentState& s, Vec& xdot, Vec& lambdadot);

/// Momentum map J_a = <lambda, (e_a)_M(x)>.
Vec momentum_map(const SymmetrySpec& sym, const CotangentState& s);

/// Cotangent lift T*Phi_{g^-1}: (x, lambda) -> (gx, DPhi_{g^-1}(gx)^T lambda).
CotangentState cotangent_lift(const SymmetrySpec& sym, const Vec& g,
                              const CotangentState& s);

/// Classical fixed-step RK4 on the canonical flow.  Diagnostics record H and
/// J per node.  Throws BlowUpError with the last valid time on non-finite
/// states.
Trajectory integrate_canonical(const ProblemDefinition& p, const CotangentState& s0,
                               double t0, double t1, double h);

/// CSV with header t, x_1..x_m, lambda_1..lambda_m, u_1..u_d, H, J_1..J_k.
std::string trajectory_csv(const ProblemDefinition& p, const Trajectory& traj);

}  // namespace redopt
