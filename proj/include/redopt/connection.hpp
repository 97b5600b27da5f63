#pragma once

#include "redopt/problem.hpp"

namespace redopt {

struct DistributionBasis {
  Vec base;
  Mat columns;  // orthonormal
  int dim() const { return static_cast<int>(columns.cols()); }
};

/// Local connection coefficients A^a_alpha(xbar) and curvature coefficients
/// B[a](alpha, beta) = B^a_{alpha beta}, stored exactly antisymmetric in
/// (alpha, beta).
struct LocalConnectionData {
  Vec xbar;
  Mat A;                // k x s
  std::vector<Mat> B;   // k entries, s x s
};

struct KinematicClass {
  Vec at;
  int dim_S = 0;  // dim (D ∩ V)
  int dim_U = 0;  // dim of a complement of S in V (diagnostic only)
  bool purely_kinematic = false;
  bool dimension_assumption_holds = false;
};

/// Span of the infinitesimal generators at x (tangent space to the group
/// orbit), orthonormalized.  Throws DegenerateFrameError when the action is
/// not free at x.
DistributionBasis vertical_space(const ProblemDefinition& p, const Vec& x);

/// Legendre map of the drift-free Hamiltonian:
///   alpha -> g^{ij} <alpha, X_i(x)> X_j(x).
Vec drift_free_legendre(const ProblemDefinition& p, const Vec& x, const Vec& alpha);

/// Horizontal space H_x = (drift-free Legendre map applied to the
/// annihilator of the generators) — the image of J^{-1}(0) ∩ T*_xM.  Throws
/// ConnectionError naming the violated hypothesis when the image is rank
/// deficient or meets the vertical space.
DistributionBasis horizontal_space(const ProblemDefinition& p, const Vec& x);

/// Connection form at x applied to a tangent vector: the unique xi with
/// v - xi_M(x) horizontal.
Vec connection_form(const ProblemDefinition& p, const Vec& x, const Vec& v);

/// Coefficients A^a_alpha(xbar), evaluated along the shape slice at the
/// group identity.
Mat local_coefficients(const ProblemDefinition& p, const Vec& xbar);

/// A and the curvature
///   B^a_{alpha beta} = d_alpha A^a_beta - d_beta A^a_alpha
///                      - C^a_{bc} A^b_alpha A^c_beta,
/// with the partials by central differences of local_coefficients.
LocalConnectionData curvature(const ProblemDefinition& p, const Vec& xbar);

KinematicClass classify(const ProblemDefinition& p, const Vec& x);

/// Unique horizontal vector over x whose shape components equal vbar.
Vec horizontal_lift(const ProblemDefinition& p, const Vec& x, const Vec& vbar);

struct InvarianceReport {
  struct Row {
    Vec x, g;
    double distance = 0;  // principal-angle distance TPhi_g(H_x) vs H_gx
  };
  std::vector<Row> rows;
  double max_distance() const;
};

/// Numeric check that the horizontal distribution is G-invariant.
InvarianceReport check_connection_invariance(const ProblemDefinition& p,
                                             const std::vector<std::array<Vec, 2>>& samples);

/// Everything the reduced side needs at one point, computed from a single
/// horizontal-space construction: generators, horizontal basis, lifts of the
/// shape directions, connection coefficients, and the factorization used to
/// rebuild a representative costate from (lambdabar, mutilde).
struct Frame {
  Vec x;
  Mat gen;     // m x k
  Mat hbasis;  // m x s, orthonormal
  Mat lifts;   // m x s, lift of each shape coordinate direction
  Mat A;       // k x s
  Eigen::PartialPivLU<Mat> vel_lu;      // LU of M = [lifts | gen]
  Eigen::PartialPivLU<Mat> costate_lu;  // LU of M^T

  /// Costate with <lambda, lift_alpha> = lambdabar_alpha and
  /// <lambda, gen_a> = mutilde_a.
  Vec costate_from(const Vec& lambdabar, const Vec& mutilde) const;
  /// Inverse split: (lambdabar, mutilde) of a costate at x.
  void reduce(const Vec& lambda, Vec& lambdabar, Vec& mutilde) const;
  /// Velocity split: shape part and connection form of a tangent vector.
  void split_velocity(const Vec& v, Vec& shape, Vec& xi) const;
};

Frame frame_at(const ProblemDefinition& p, const Vec& x);
Frame frame_at_shape(const ProblemDefinition& p, const Vec& xbar);

/// Memo for connection data along a trajectory, keyed by quantized shape
/// coordinates.  Behaves as if absent: entries are only ever filled with
/// identical values.
class ConnectionCache {
public:
  explicit ConnectionCache(const ProblemDefinition& p) : p_(p) {}
  const LocalConnectionData& at(const Vec& xbar);

private:
  const ProblemDefinition& p_;
  std::map<std::vector<long long>, LocalConnectionData> memo_;
};

}  // namespace redopt
