#pragma once

#include "redopt/geometry.hpp"

namespace redopt {

/// Rotation-group chart in exponential coordinates.  Chart coordinates of an
/// element are its logarithm, so the chart is restricted to rotation angles
/// below pi - 0.1; operations whose result would leave that ball throw
/// ChartDomainError.

Eigen::Matrix3d so3_hat(const Eigen::Vector3d& w);
Eigen::Vector3d so3_vee(const Eigen::Matrix3d& m);

/// Rodrigues formula.
Eigen::Matrix3d so3_exp(const Eigen::Vector3d& theta);

/// Inverse of so3_exp; requires the rotation angle to stay inside the chart.
Eigen::Vector3d so3_log(const Eigen::Matrix3d& r);

/// Solution v of Dexp_u(v) = w, i.e. the chart velocity producing a given
/// body/spatial algebra velocity:
///   dexpinv_u(w) = w - u x w / 2 + beta(|u|) u x (u x w),
/// beta(a) = (1 - (a/2) cot(a/2)) / a^2.
Eigen::Vector3d so3_dexpinv(const Eigen::Vector3d& u, const Eigen::Vector3d& w);

/// Chart velocity at theta of the left-invariant field with body direction e,
/// i.e. the coordinate expression of g -> T_e L_g(e).
Eigen::Vector3d so3_left_invariant_field(const Eigen::Vector3d& theta,
                                         const Eigen::Vector3d& e);

LieGroup make_so3_group();

}  // namespace redopt
