#pragma once

#include "redopt/connection.hpp"
#include "redopt/pmp.hpp"

namespace redopt {

/// Point on the reduced phase space: shape point, shape costate, body
/// momentum, plus the group element carried for reconstruction.
struct ReducedState {
  Vec xbar;
  Vec lambdabar;
  Vec mutilde;
  Vec g;  // identity-initialized; untouched by the reduced flow
};

struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<ReducedState> states;
  std::vector<double> hbar;
  std::vector<Vec> xitilde;
  std::vector<double> cost_rate;  // reduced running cost at the optimal control

  // Node data reused by the reconstruction pass: the packed reduced field
  // and the group velocity xi = xitilde - A xbardot.
  std::vector<Vec> node_field;
  std::vector<Vec> group_velocity;

  size_t size() const { return times.size(); }
};

/// The three pieces of the reduced optimal Hamiltonian, read off one
/// representative evaluation: reduced dynamics (shape velocity), body
/// velocity, and reduced cost at the optimal control.
struct ReducedSplit {
  Vec shape_velocity;  // = dHbar/dlambdabar
  Vec body_velocity;   // = dHbar/dmutilde (the locked body velocity)
  double cost = 0;
  Vec u;
};

/// Costate identification: lambdabar pairs lambda with the horizontal lifts
/// of the shape directions, mutilde is the Ad*-corrected momentum, and g is
/// read from the trivialization's group coordinates.
ReducedState reduce_costate(const ProblemDefinition& p, const CotangentState& s);

/// Representative costate over (xbar, identity) with the given reduced data.
CotangentState representative_costate(const Frame& f, const ReducedState& rs);

ReducedSplit reduced_split(const ProblemDefinition& p, const Frame& f,
                           const ReducedState& rs);

/// Hbar evaluated through a representative at the group identity;
/// well-defined by the invariance of the optimal Hamiltonian.
double reduced_hamiltonian(const ProblemDefinition& p, const ReducedState& rs);

struct HPDerivatives {
  Vec xbar_dot;
  Vec lambdabar_dot;
  Vec mutilde_dot;
  Vec xitilde;
  // Byproducts of the representative evaluation.
  double hbar = 0;
  double cost_rate = 0;
  Vec group_velocity;  // xitilde - A xbardot
};

/// Hamilton-Poincare field in coordinates:
///   xbardot^a     = dHbar/dlambdabar,
///   xitilde^a     = dHbar/dmutilde_a,
///   lambdabardot  = -dHbar/dxbar - mutilde_a (B^a_{ba} xbardot^b
///                    + A^b_a C^a_{db} xitilde^d),
///   mutildedot_a  = mutilde_b C^b_{da} (xitilde^d - A^d_a xbardot^a),
/// with the Abelian path short-circuiting to mutildedot = 0 identically.
HPDerivatives hp_field(const ProblemDefinition& p, const ReducedState& rs,
                       ConnectionCache* cache = nullptr);

ReducedTrajectory integrate_reduced(const ProblemDefinition& p, const ReducedState& rs0,
                                    double t0, double t1, double h);

/// Group reconstruction from a reduced trajectory: recovers
/// xi(t) = xitilde(t) - A(xbar) xbardot(t) and accumulates it, by Simpson
/// quadrature for translation groups and per-step midpoint exponential steps
/// for matrix groups.  Midpoint states come from cubic Hermite interpolation
/// of the stored nodes and node fields.  Returns g at each trajectory node.
std::vector<Vec> reconstruct_group(const ProblemDefinition& p, const ReducedTrajectory& rt);

/// Specialization of hp_field for problems with no shape variables (M = G):
/// returns (xi, mutildedot) of the Lie-Poisson equations.
void lie_poisson_field(const ProblemDefinition& p, const Vec& mutilde, Vec& xi,
                       Vec& mutilde_dot);

/// CSV: t, xbar_1..s, lambdabar_1..s, mutilde_1..k, xitilde_1..k, Hbar.
std::string reduced_csv(const ProblemDefinition& p, const ReducedTrajectory& rt);

/// Same rows with group coordinates g_1..g_k appended.
std::string reconstructed_csv(const ProblemDefinition& p, const ReducedTrajectory& rt,
                              const std::vector<Vec>& group);

}  // namespace redopt
