#include "redopt/geometry.hpp"

#include <cmath>
#include <limits>

namespace redopt {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kJacStep = std::cbrt(kEps);
constexpr double kGradStep = 1e-3;
}  // namespace

LieGroup make_abelian_group(int k) {
  LieGroup g;
  g.k = k;
  g.kind = GroupKind::AbelianTranslation;
  g.identity = Vec::Zero(k);
  g.multiply = [](const Vec& a, const Vec& b) -> Vec { return a + b; };
  g.inverse = [](const Vec& a) -> Vec { return -a; };
  g.exp = [](const Vec& xi) -> Vec { return xi; };
  g.log = [](const Vec& a) -> Vec { return a; };
  g.Ad = [k](const Vec&) -> Mat { return Mat::Identity(k, k); };
  g.C.assign(k, Mat::Zero(k, k));
  return g;
}

void validate_group(const LieGroup& g) {
  require(static_cast<int>(g.C.size()) == g.k, "structure constants: wrong count");
  for (const Mat& ca : g.C) {
    require(ca.rows() == g.k && ca.cols() == g.k, "structure constants: wrong shape");
    if ((ca + ca.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw Error("structure constants not antisymmetric");
  }
  // Jacobi: C^e_{ad} C^d_{bc} + C^e_{bd} C^d_{ca} + C^e_{cd} C^d_{ab} = 0
  for (int e = 0; e < g.k; ++e)
    for (int a = 0; a < g.k; ++a)
      for (int b = 0; b < g.k; ++b)
        for (int c = 0; c < g.k; ++c) {
          double sum = 0;
          for (int d = 0; d < g.k; ++d)
            sum += g.C[e](a, d) * g.C[d](b, c) + g.C[e](b, d) * g.C[d](c, a) +
                   g.C[e](c, d) * g.C[d](a, b);
          if (std::abs(sum) > 1e-12) throw Error("structure constants violate Jacobi identity");
        }
  if (g.abelian()) {
    for (const Mat& ca : g.C)
      if (ca.cwiseAbs().maxCoeff() != 0.0)
        throw Error("translation group must have vanishing structure constants");
  }
  Mat ad_e = g.Ad(g.identity);
  if ((ad_e - Mat::Identity(g.k, g.k)).cwiseAbs().maxCoeff() > 1e-12)
    throw Error("Ad at the identity is not the identity operator");
}

Vec lie_bracket(const LieGroup& g, const Vec& xi, const Vec& eta) {
  require(xi.size() == g.k && eta.size() == g.k, "lie_bracket: dimension mismatch");
  Vec out(g.k);
  for (int a = 0; a < g.k; ++a) out[a] = xi.transpose() * g.C[a] * eta;
  return out;
}

Vec ad_star(const LieGroup& g, const Vec& xi, const Vec& mu) {
  require(xi.size() == g.k && mu.size() == g.k, "ad_star: dimension mismatch");
  Vec out = Vec::Zero(g.k);
  for (int a = 0; a < g.k; ++a)
    for (int b = 0; b < g.k; ++b)
      for (int c = 0; c < g.k; ++c) out[a] += mu[b] * g.C[b](c, a) * xi[c];
  return out;
}

Mat adjoint(const LieGroup& g, const Vec& at) {
  require(at.size() == g.k, "adjoint: dimension mismatch");
  if (g.abelian()) return Mat::Identity(g.k, g.k);
  return g.Ad(at);
}

Vec GroupAction::shape_of(const Vec& x) const {
  Vec out(shape_idx.size());
  for (size_t i = 0; i < shape_idx.size(); ++i) out[i] = x[shape_idx[i]];
  return out;
}

Vec GroupAction::group_of(const Vec& x) const {
  Vec out(group_idx.size());
  for (size_t i = 0; i < group_idx.size(); ++i) out[i] = x[group_idx[i]];
  return out;
}

Vec GroupAction::assemble(const Vec& xbar, const Vec& g) const {
  Vec x(shape_idx.size() + group_idx.size());
  for (size_t i = 0; i < shape_idx.size(); ++i) x[shape_idx[i]] = xbar[i];
  for (size_t i = 0; i < group_idx.size(); ++i) x[group_idx[i]] = g[i];
  return x;
}

Mat numeric_jacobian(const VecFn& f, const Vec& at) {
  const Eigen::Index n = at.size();
  Vec probe = at;
  Vec f0 = f(at);
  if (!f0.allFinite()) throw DifferentiationError("numeric_jacobian: map not finite at base point");
  Mat jac(f0.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = kJacStep * std::max(1.0, std::abs(at[j]));
    probe[j] = at[j] + h;
    const double up = probe[j];
    Vec fp = f(probe);
    probe[j] = at[j] - h;
    const double down = probe[j];
    Vec fm = f(probe);
    probe[j] = at[j];
    if (!fp.allFinite() || !fm.allFinite())
      throw DifferentiationError("numeric_jacobian: map not finite near base point");
    // Divide by the step actually taken, so affine maps difference exactly.
    jac.col(j) = (fp - fm) / (up - down);
  }
  return jac;
}

double fd_partial(const ScalarFn& f, const Vec& at, Eigen::Index j) {
  Vec probe = at;
  const double h = kGradStep * std::max(1.0, std::abs(at[j]));
  probe[j] = at[j] + h;
  const double fp1 = f(probe);
  probe[j] = at[j] - h;
  const double fm1 = f(probe);
  probe[j] = at[j] + 2.0 * h;
  const double fp2 = f(probe);
  probe[j] = at[j] - 2.0 * h;
  const double fm2 = f(probe);
  if (!std::isfinite(fp1) || !std::isfinite(fm1) || !std::isfinite(fp2) || !std::isfinite(fm2))
    throw DifferentiationError("fd_gradient: scalar not finite near base point");
  return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
}

Vec fd_gradient(const ScalarFn& f, const Vec& at) {
  Vec grad(at.size());
  for (Eigen::Index j = 0; j < at.size(); ++j) grad[j] = fd_partial(f, at, j);
  return grad;
}

Vec infinitesimal_generator(const LieGroup& g, const GroupAction& a, const Vec& xi,
                            const Vec& x) {
  require(xi.size() == g.k, "infinitesimal_generator: algebra dimension mismatch");
  const double norm = xi.norm();
  if (norm == 0.0) return Vec::Zero(x.size());
  // The generator is linear in xi; differencing along the unit direction
  // keeps the step well scaled.
  const Vec dir = xi / norm;
  const double h = kJacStep;
  Vec xp = a.map(g.exp(h * dir), x);
  Vec xm = a.map(g.exp(-h * dir), x);
  if (!xp.allFinite() || !xm.allFinite())
    throw DifferentiationError("infinitesimal_generator: action not finite near identity");
  return norm * (xp - xm) / (2.0 * h);
}

Mat generator_matrix(const LieGroup& g, const GroupAction& a, const Vec& x) {
  Mat gen(x.size(), g.k);
  for (int i = 0; i < g.k; ++i)
    gen.col(i) = infinitesimal_generator(g, a, Vec::Unit(g.k, i), x);
  return gen;
}

Mat orthonormalize(const Mat& v, double tol) {
  Mat out(v.rows(), v.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Vec w = v.col(j);
    const double original = w.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < kept; ++i) w -= out.col(i).dot(w) * out.col(i);
    if (w.norm() <= tol * std::max(1.0, original)) continue;
    out.col(kept++) = w / w.norm();
  }
  return out.leftCols(kept);
}

double subspace_distance(const Mat& u, const Mat& v) {
  if (u.cols() == 0 && v.cols() == 0) return 0.0;
  if (u.cols() == 0 || v.cols() == 0) return 1.0;
  if (u.rows() == v.rows() && u.cols() == v.cols() && u == v) return 0.0;
  Mat resid = v - u * (u.transpose() * v);
  Eigen::JacobiSVD<Mat> svd(resid);
  double d = svd.singularValues()[0];
  if (u.cols() != v.cols()) d = std::max(d, 1.0);
  return std::min(d, 1.0);
}

namespace {
double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}
}  // namespace

Mat halton_box(int n, const Vec& lo, const Vec& hi, int skip) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const int dim = static_cast<int>(lo.size());
  require(hi.size() == dim, "halton_box: box dimension mismatch");
  require(dim <= 20, "halton_box: too many dimensions");
  Mat out(dim, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j)
      out(j, i) = lo[j] + (hi[j] - lo[j]) * halton(i + 1 + skip, primes[j]);
  return out;
}

}  // namespace redopt
