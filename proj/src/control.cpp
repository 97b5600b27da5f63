#include "redopt/control.hpp"

#include <array>
#include <cmath>

namespace redopt {

Mat AffineControlSystem::field_matrix(const Vec& x) const {
  Mat out(m, d);
  for (int i = 0; i < d; ++i) out.col(i) = fields[i](x);
  return out;
}

double Cost::operator()(const AffineControlSystem& sys, const Vec& x, const Vec& u) const {
  if (kind == Kind::QuadraticMetric) return 0.5 * u.dot(sys.metric(x) * u);
  return value(x, u);
}

Cost quadratic_cost() { return Cost{}; }

Mat SymmetrySpec::sigma_at(const Vec& g, int d) const {
  if (sigma) return (*sigma)(g);
  return Mat::Identity(d, d);
}

Vec eval_dynamics(const AffineControlSystem& sys, const Vec& x, const Vec& u) {
  require(x.size() == sys.m && u.size() == sys.d, "eval_dynamics: dimension mismatch");
  Vec out = sys.drift(x);
  for (int i = 0; i < sys.d; ++i) out += u[i] * sys.fields[i](x);
  return out;
}

double SymmetryReport::Row::max() const {
  return std::max(std::max(dynamics, drift), std::max(distribution, cost));
}

double SymmetryReport::max_residual() const {
  double m = 0;
  for (const Row& r : rows) m = std::max(m, r.max());
  return m;
}

SymmetryReport verify_symmetry(const AffineControlSystem& sys, const SymmetrySpec& sym,
                               const Cost& cost,
                               const std::vector<std::array<Vec, 3>>& samples) {
  SymmetryReport report;
  for (const auto& [x, u, g] : samples) {
    SymmetryReport::Row row;
    row.x = x;
    row.u = u;
    row.g = g;
    const Vec gx = sym.action.map(g, x);
    const Mat tphi = numeric_jacobian([&](const Vec& p) { return sym.action.map(g, p); }, x);
    const Vec gu = sym.sigma_at(g, sys.d) * u;

    row.dynamics = (tphi * eval_dynamics(sys, x, u) - eval_dynamics(sys, gx, gu)).norm();
    row.drift = (tphi * sys.drift(x) - sys.drift(gx)).norm();
    row.distribution =
        subspace_distance(orthonormalize(tphi * sys.field_matrix(x)),
                          orthonormalize(sys.field_matrix(gx)));
    row.cost = std::abs(cost(sys, gx, gu) - cost(sys, x, u));
    report.rows.push_back(std::move(row));
  }
  return report;
}

ControlRepresentation control_representation(const AffineControlSystem& sys,
                                             const SymmetrySpec& sym, const Vec& x,
                                             const Vec& g, double tol) {
  const Vec gx = sym.action.map(g, x);
  const Mat w = sys.field_matrix(gx);
  if (orthonormalize(w).cols() < sys.d)
    throw DegenerateFrameError("control_representation: control frame rank-deficient at gx");
  const Mat tphi = numeric_jacobian([&](const Vec& p) { return sym.action.map(g, p); }, x);
  const Mat v = tphi * sys.field_matrix(x);

  ControlRepresentation rep;
  rep.R = Mat(sys.d, sys.d);
  Eigen::ColPivHouseholderQR<Mat> qr(w);
  for (int i = 0; i < sys.d; ++i) {
    Vec coeff = qr.solve(v.col(i));
    rep.R.row(i) = coeff.transpose();
    rep.residual = std::max(rep.residual, (w * coeff - v.col(i)).norm());
  }
  if (rep.residual > tol)
    throw NotInvariantError("control_representation: distribution not invariant at (x, g)");
  return rep;
}

}  // namespace redopt
