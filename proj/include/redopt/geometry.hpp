#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "redopt/errors.hpp"

namespace redopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecFn = std::function<Vec(const Vec&)>;
using ScalarFn = std::function<double(const Vec&)>;

enum class GroupKind { AbelianTranslation, MatrixGroup };

/// Lie group presented in a single global chart.  Group elements are chart
/// coordinate vectors of length k; algebra vectors are components in the
/// basis {e_a}.  Both chart kinds used here are algebra-aligned at the
/// identity: the chart velocity of a curve through e equals its algebra
/// components.
///
/// Structure constants are stored as C[a](b,c) = C^a_{bc} with the bracket
/// convention [e_b, e_c] = C^a_{bc} e_a.
struct LieGroup {
  int k = 0;
  GroupKind kind = GroupKind::AbelianTranslation;
  Vec identity;
  std::function<Vec(const Vec&, const Vec&)> multiply;  // (g, h) -> gh
  VecFn inverse;
  VecFn exp;  // algebra components -> chart coordinates
  VecFn log;  // chart coordinates -> algebra components
  std::function<Mat(const Vec&)> Ad;
  std::vector<Mat> C;  // C[a](b,c)

  bool abelian() const { return kind == GroupKind::AbelianTranslation; }
};

/// k-dimensional translation group acting on chart coordinates; exp and log
/// are the identity and all structure constants vanish.
LieGroup make_abelian_group(int k);

/// Checks antisymmetry of the structure constants, the Jacobi identity
/// (1e-12) and Ad at the identity.  Throws on violation.
void validate_group(const LieGroup& g);

/// Lie bracket [xi, eta]^a = C^a_{bc} xi^b eta^c.
Vec lie_bracket(const LieGroup& g, const Vec& xi, const Vec& eta);

/// Coadjoint action (ad*_xi mu)_a = mu_b C^b_{ca} xi^c.
Vec ad_star(const LieGroup& g, const Vec& xi, const Vec& mu);

/// Adjoint operator in the {e_a} basis; the identity for translation groups.
Mat adjoint(const LieGroup& g, const Vec& at);

/// Left action of a group on the configuration chart, together with the
/// trivialization split M = (shape coords) x (group coords).  The action is
/// required to leave shape coordinates untouched and to act on the group
/// block by left multiplication in the group chart.
struct GroupAction {
  std::function<Vec(const Vec& g, const Vec& x)> map;
  std::vector<Eigen::Index> shape_idx;
  std::vector<Eigen::Index> group_idx;

  int s() const { return static_cast<int>(shape_idx.size()); }
  Vec shape_of(const Vec& x) const;
  Vec group_of(const Vec& x) const;
  Vec assemble(const Vec& xbar, const Vec& g) const;
};

/// Central-difference Jacobian with step h = cbrt(eps) * max(1, |x_j|)
/// entrywise.  Throws DifferentiationError on non-finite output.
Mat numeric_jacobian(const VecFn& f, const Vec& at);

/// Gradient of a smooth scalar by a five-point central stencil,
/// step 1e-3 * max(1, |x_j|).  Used for all Hamiltonian derivatives.
Vec fd_gradient(const ScalarFn& f, const Vec& at);

/// Single-entry version of fd_gradient.
double fd_partial(const ScalarFn& f, const Vec& at, Eigen::Index j);

/// Infinitesimal generator xi_M(x) = d/de Phi(exp(e xi), x) at e = 0,
/// by central difference through the group chart's exponential.
Vec infinitesimal_generator(const LieGroup& g, const GroupAction& a, const Vec& xi,
                            const Vec& x);

/// m x k matrix whose columns are the generators of the basis directions.
Mat generator_matrix(const LieGroup& g, const GroupAction& a, const Vec& x);

/// Orthonormal basis of the column span by modified Gram-Schmidt; columns
/// whose residual drops below tol * max(1, original norm) are dropped.
/// Rank decisions throughout the library use this single threshold.
Mat orthonormalize(const Mat& v, double tol = 1e-10);

/// Sine of the largest principal angle between the spans of two orthonormal
/// bases; zero-dimensional spans have distance zero.
double subspace_distance(const Mat& u, const Mat& v);

/// Halton points mapped into the box [lo, hi], starting at index 1.
Mat halton_box(int n, const Vec& lo, const Vec& hi, int skip = 0);

}  // namespace redopt
