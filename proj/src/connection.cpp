#include "redopt/connection.hpp"

#include <cmath>
#include <limits>

namespace redopt {

namespace {
const double kPartialStep = std::cbrt(std::numeric_limits<double>::epsilon());
constexpr double kRankTol = 1e-10;
}  // namespace

DistributionBasis vertical_space(const ProblemDefinition& p, const Vec& x) {
  Mat gen = generator_matrix(p.sym.group, p.sym.action, x);
  Mat basis = orthonormalize(gen, kRankTol);
  if (basis.cols() < p.k())
    throw DegenerateFrameError("vertical_space: action not free at x (generator rank < k)");
  return {x, basis};
}

Vec drift_free_legendre(const ProblemDefinition& p, const Vec& x, const Vec& alpha) {
  require(alpha.size() == p.m(), "drift_free_legendre: covector dimension mismatch");
  const Mat fields = p.sys.field_matrix(x);
  Eigen::LDLT<Mat> ldlt(p.sys.metric(x));
  if (ldlt.info() != Eigen::Success)
    throw Error("drift_free_legendre: cost metric not positive definite");
  return fields * ldlt.solve(fields.transpose() * alpha);
}

namespace {

/// Null space of gen^T: a basis of the annihilator of the generators, the
/// fiber of J^{-1}(0) at x.
Mat momentum_annihilator(const Mat& gen) {
  Eigen::JacobiSVD<Mat> svd(gen.transpose(), Eigen::ComputeFullV);
  const Eigen::Index rank = svd.rank();
  return svd.matrixV().rightCols(gen.rows() - rank);
}

}  // namespace

DistributionBasis horizontal_space(const ProblemDefinition& p, const Vec& x) {
  const int m = p.m(), k = p.k();
  Mat gen = generator_matrix(p.sym.group, p.sym.action, x);
  Mat vert = orthonormalize(gen, kRankTol);
  if (vert.cols() < k)
    throw DegenerateFrameError("horizontal_space: action not free at x");

  Mat ann = momentum_annihilator(gen);  // m x (m-k)
  Mat image(m, ann.cols());
  for (Eigen::Index j = 0; j < ann.cols(); ++j)
    image.col(j) = drift_free_legendre(p, x, ann.col(j));

  Mat basis = orthonormalize(image, kRankTol);
  if (basis.cols() < m - k)
    throw ConnectionError(
        "horizontal_space: drift-free Legendre map degenerate on J^{-1}(0) "
        "(image rank below m - k)");
  Mat combined(m, basis.cols() + vert.cols());
  combined.leftCols(basis.cols()) = basis;
  combined.rightCols(vert.cols()) = vert;
  if (orthonormalize(combined, kRankTol).cols() < m)
    throw ConnectionError(
        "horizontal_space: horizontal space meets the vertical space nontrivially");
  return {x, basis};
}

Frame frame_at(const ProblemDefinition& p, const Vec& x) {
  const int m = p.m(), k = p.k(), s = p.s();
  Frame f;
  f.x = x;
  f.gen = generator_matrix(p.sym.group, p.sym.action, x);
  f.hbasis = horizontal_space(p, x).columns;

  // Decomposition matrix [hbasis | gen]; connection form of v solves
  // [hbasis | gen] (c, xi) = v.
  Mat decomp(m, m);
  decomp.leftCols(f.hbasis.cols()) = f.hbasis;
  decomp.rightCols(k) = f.gen;
  Eigen::PartialPivLU<Mat> decomp_lu(decomp);

  f.A.resize(k, s);
  f.lifts.resize(m, s);
  for (int a = 0; a < s; ++a) {
    Vec dir = Vec::Zero(m);
    dir[p.sym.action.shape_idx[a]] = 1.0;
    Vec coeff = decomp_lu.solve(dir);
    f.A.col(a) = coeff.tail(k);
    f.lifts.col(a) = dir - f.gen * f.A.col(a);
  }

  Mat basis(m, m);
  basis.leftCols(s) = f.lifts;
  basis.rightCols(k) = f.gen;
  f.vel_lu = Eigen::PartialPivLU<Mat>(basis);
  f.costate_lu = Eigen::PartialPivLU<Mat>(basis.transpose());
  return f;
}

Frame frame_at_shape(const ProblemDefinition& p, const Vec& xbar) {
  return frame_at(p, p.sym.action.assemble(xbar, p.sym.group.identity));
}

Vec Frame::costate_from(const Vec& lambdabar, const Vec& mutilde) const {
  Vec rhs(lambdabar.size() + mutilde.size());
  rhs.head(lambdabar.size()) = lambdabar;
  rhs.tail(mutilde.size()) = mutilde;
  return costate_lu.solve(rhs);
}

void Frame::reduce(const Vec& lambda, Vec& lambdabar, Vec& mutilde) const {
  lambdabar = lifts.transpose() * lambda;
  mutilde = gen.transpose() * lambda;
}

void Frame::split_velocity(const Vec& v, Vec& shape, Vec& xi) const {
  // v = lifts * shape + gen * xi; the lift columns carry unit shape parts,
  // so the shape block of the solution is exactly the shape part of v.
  Vec coeff = vel_lu.solve(v);
  shape = coeff.head(lifts.cols());
  xi = coeff.tail(gen.cols());
}

Vec connection_form(const ProblemDefinition& p, const Vec& x, const Vec& v) {
  require(v.size() == p.m(), "connection_form: vector dimension mismatch");
  const Frame f = frame_at(p, x);
  Mat decomp(p.m(), p.m());
  decomp.leftCols(f.hbasis.cols()) = f.hbasis;
  decomp.rightCols(p.k()) = f.gen;
  Vec coeff = Eigen::PartialPivLU<Mat>(decomp).solve(v);
  return coeff.tail(p.k());
}

Mat local_coefficients(const ProblemDefinition& p, const Vec& xbar) {
  return frame_at_shape(p, xbar).A;
}

LocalConnectionData curvature(const ProblemDefinition& p, const Vec& xbar) {
  const int k = p.k(), s = p.s();
  LocalConnectionData data;
  data.xbar = xbar;
  data.A = local_coefficients(p, xbar);

  // Partials dA/dxbar^alpha by central differences.
  std::vector<Mat> dA(s);
  for (int alpha = 0; alpha < s; ++alpha) {
    const double h = kPartialStep * std::max(1.0, std::abs(xbar[alpha]));
    Vec xp = xbar, xm = xbar;
    xp[alpha] += h;
    xm[alpha] -= h;
    dA[alpha] = (local_coefficients(p, xp) - local_coefficients(p, xm)) / (2.0 * h);
  }

  data.B.assign(k, Mat::Zero(s, s));
  for (int a = 0; a < k; ++a) {
    for (int alpha = 0; alpha < s; ++alpha)
      for (int beta = 0; beta < s; ++beta) {
        double v = dA[alpha](a, beta) - dA[beta](a, alpha);
        for (int b = 0; b < k; ++b)
          for (int c = 0; c < k; ++c)
            v -= p.sym.group.C[a](b, c) * data.A(b, alpha) * data.A(c, beta);
        data.B[a](alpha, beta) = v;
      }
    data.B[a] = 0.5 * (data.B[a] - data.B[a].transpose()).eval();
  }
  return data;
}

KinematicClass classify(const ProblemDefinition& p, const Vec& x) {
  KinematicClass out;
  out.at = x;
  const Mat dist = orthonormalize(p.sys.field_matrix(x), kRankTol);
  const Mat vert = vertical_space(p, x).columns;
  Mat combined(p.m(), dist.cols() + vert.cols());
  combined.leftCols(dist.cols()) = dist;
  combined.rightCols(vert.cols()) = vert;
  const int dim_sum = static_cast<int>(orthonormalize(combined, kRankTol).cols());
  out.dim_S = static_cast<int>(dist.cols() + vert.cols()) - dim_sum;
  out.dim_U = static_cast<int>(vert.cols()) - out.dim_S;
  out.purely_kinematic = (out.dim_S == 0);
  out.dimension_assumption_holds = (dim_sum == p.m());
  return out;
}

Vec horizontal_lift(const ProblemDefinition& p, const Vec& x, const Vec& vbar) {
  require(vbar.size() == p.s(), "horizontal_lift: shape dimension mismatch");
  const Frame f = frame_at(p, x);
  return f.lifts * vbar;
}

double InvarianceReport::max_distance() const {
  double m = 0;
  for (const Row& r : rows) m = std::max(m, r.distance);
  return m;
}

InvarianceReport check_connection_invariance(const ProblemDefinition& p,
                                             const std::vector<std::array<Vec, 2>>& samples) {
  InvarianceReport report;
  for (const auto& [x, g] : samples) {
    InvarianceReport::Row row;
    row.x = x;
    row.g = g;
    const Vec gx = p.sym.action.map(g, x);
    const Mat tphi = numeric_jacobian([&](const Vec& q) { return p.sym.action.map(g, q); }, x);
    const Mat pushed = orthonormalize(tphi * horizontal_space(p, x).columns);
    const Mat there = horizontal_space(p, gx).columns;
    row.distance = subspace_distance(there, pushed);
    report.rows.push_back(std::move(row));
  }
  return report;
}

const LocalConnectionData& ConnectionCache::at(const Vec& xbar) {
  std::vector<long long> key(xbar.size());
  for (Eigen::Index i = 0; i < xbar.size(); ++i)
    key[i] = std::llround(xbar[i] * 1e12);
  auto it = memo_.find(key);
  if (it == memo_.end()) it = memo_.emplace(std::move(key), curvature(p_, xbar)).first;
  return it->second;
}

}  // namespace redopt
