#pragma once

#include <optional>
#include <vector>

#include "redopt/geometry.hpp"

namespace redopt {

/// Affine control system  xdot = X_0(x) + sum_i u_i X_i(x)  on an
/// m-dimensional chart, with a symmetric positive-definite cost metric
/// g_ij(x) on the control space.
struct AffineControlSystem {
  int m = 0;
  int d = 0;
  VecFn drift;                  // X_0
  std::vector<VecFn> fields;    // X_1 .. X_d
  std::function<Mat(const Vec&)> metric;  // d x d, SPD

  Mat field_matrix(const Vec& x) const;  // m x d, columns X_i(x)
};

/// Running cost.  QuadraticMetric means C(x, u) = u^T g(x) u / 2 with the
/// system's metric; General supplies an arbitrary smooth value function and
/// routes optimal-control elimination through a damped Newton iteration.
struct Cost {
  enum class Kind { QuadraticMetric, General };
  Kind kind = Kind::QuadraticMetric;
  std::function<double(const Vec& x, const Vec& u)> value;

  double operator()(const AffineControlSystem& sys, const Vec& x, const Vec& u) const;
};

Cost quadratic_cost();

struct SymmetrySpec {
  LieGroup group;
  GroupAction action;
  // Control representation sigma_g; identity when absent.
  std::optional<std::function<Mat(const Vec& g)>> sigma;

  Mat sigma_at(const Vec& g, int d) const;
};

Vec eval_dynamics(const AffineControlSystem& sys, const Vec& x, const Vec& u);

/// Per-sample equivariance residuals for the dynamics, the drift, the
/// control distribution and the cost.  The report is advisory; reduction is
/// gated on max_residual() against a caller-chosen tolerance.
struct SymmetryReport {
  struct Row {
    Vec x, u, g;
    double dynamics = 0;      // |TPhi_g f(x,u) - f(Psi_g(x,u))|
    double drift = 0;         // |TPhi_g X0(x) - X0(gx)|
    double distribution = 0;  // subspace distance TPhi_g(D_x) vs D_gx
    double cost = 0;          // |C(Psi_g(x,u)) - C(x,u)|
    double max() const;
  };
  std::vector<Row> rows;
  double max_residual() const;
  bool passed(double tol) const { return max_residual() <= tol; }
};

SymmetryReport verify_symmetry(const AffineControlSystem& sys, const SymmetrySpec& sym,
                               const Cost& cost,
                               const std::vector<std::array<Vec, 3>>& samples);

/// Solves T_x Phi_g X_i(x) = sum_j R_i^j(x,g) X_j(gx) in the least-squares
/// sense.  R composes as R(x, gh) = R(x, h) R(hx, g).
struct ControlRepresentation {
  Mat R;
  double residual = 0;
};

ControlRepresentation control_representation(const AffineControlSystem& sys,
                                             const SymmetrySpec& sym, const Vec& x,
                                             const Vec& g, double tol = 1e-6);

}  // namespace redopt
