#include "redopt/so3.hpp"

#include <cmath>

namespace redopt {

namespace {
constexpr double kChartRadius = M_PI - 0.1;

void check_chart(const Eigen::Vector3d& theta) {
  if (!theta.allFinite() || theta.norm() >= kChartRadius)
    throw ChartDomainError("rotation chart: angle outside |theta| < pi - 0.1");
}
}  // namespace

Eigen::Matrix3d so3_hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

Eigen::Vector3d so3_vee(const Eigen::Matrix3d& m) {
  return {m(2, 1), m(0, 2), m(1, 0)};
}

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& theta) {
  const double a = theta.norm();
  const Eigen::Matrix3d w = so3_hat(theta);
  double c1, c2;
  if (a < 1e-8) {
    c1 = 1.0 - a * a / 6.0;
    c2 = 0.5 - a * a / 24.0;
  } else {
    c1 = std::sin(a) / a;
    c2 = (1.0 - std::cos(a)) / (a * a);
  }
  return Eigen::Matrix3d::Identity() + c1 * w + c2 * w * w;
}

Eigen::Vector3d so3_log(const Eigen::Matrix3d& r) {
  const double cos_a = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double a = std::acos(cos_a);
  if (a >= kChartRadius) throw ChartDomainError("rotation chart: log outside |theta| < pi - 0.1");
  const Eigen::Vector3d v = so3_vee(r - r.transpose());
  if (a < 1e-8) return 0.5 * v * (1.0 + a * a / 6.0);
  return (a / (2.0 * std::sin(a))) * v;
}

Eigen::Vector3d so3_dexpinv(const Eigen::Vector3d& u, const Eigen::Vector3d& w) {
  const double a = u.norm();
  double beta;
  if (a < 1e-4) {
    beta = 1.0 / 12.0 + a * a / 720.0;
  } else {
    beta = (1.0 - (a / 2.0) / std::tan(a / 2.0)) / (a * a);
  }
  return w - 0.5 * u.cross(w) + beta * u.cross(u.cross(w));
}

Eigen::Vector3d so3_left_invariant_field(const Eigen::Vector3d& theta,
                                         const Eigen::Vector3d& e) {
  // Body velocity e corresponds to chart velocity dexpinv_{-theta}(e).
  return so3_dexpinv(-theta, e);
}

LieGroup make_so3_group() {
  LieGroup g;
  g.k = 3;
  g.kind = GroupKind::MatrixGroup;
  g.identity = Vec::Zero(3);
  g.multiply = [](const Vec& a, const Vec& b) -> Vec {
    Eigen::Vector3d ta = a, tb = b;
    check_chart(ta);
    check_chart(tb);
    return so3_log(so3_exp(ta) * so3_exp(tb));
  };
  g.inverse = [](const Vec& a) -> Vec { return -a; };
  // Chart coordinates are exponential coordinates, so exp/log are the
  // identity on components within the chart ball.
  g.exp = [](const Vec& xi) -> Vec {
    Eigen::Vector3d t = xi;
    check_chart(t);
    return xi;
  };
  g.log = [](const Vec& a) -> Vec {
    Eigen::Vector3d t = a;
    check_chart(t);
    return a;
  };
  g.Ad = [](const Vec& a) -> Mat {
    Eigen::Vector3d t = a;
    check_chart(t);
    return so3_exp(t);
  };
  // [e_b, e_c] = e_b x e_c: C[a](b,c) is the Levi-Civita symbol eps_{bca}.
  g.C.assign(3, Mat::Zero(3, 3));
  auto levi = [](int i, int j, int l) -> double {
    if (i == j || j == l || i == l) return 0.0;
    return ((j - i + 3) % 3 == 1 && (l - j + 3) % 3 == 1) ? 1.0 : -1.0;
  };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) g.C[a](b, c) = levi(b, c, a);
  return g;
}

}  // namespace redopt
