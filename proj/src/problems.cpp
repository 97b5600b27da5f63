#include "redopt/problems.hpp"

#include <cmath>

#include "redopt/so3.hpp"

namespace redopt {

ProblemDefinition build_snakeboard(double r, SnakeboardSymmetry symmetry,
                                   bool broken_action) {
  require(r > 0, "build_snakeboard: r must be positive");
  ProblemDefinition p;
  p.name = symmetry == SnakeboardSymmetry::R2 ? "snakeboard-r2" : "snakeboard-r2xso2";
  p.params["r"] = r;

  p.sys.m = 5;
  p.sys.d = 3;
  p.sys.drift = [](const Vec& x) { return Vec::Zero(x.size()); };
  p.sys.fields = {
      [r](const Vec& x) -> Vec {
        Vec v(5);
        v << std::cos(x[2]), std::sin(x[2]), -std::tan(x[4]) / r, 0, 0;
        return v;
      },
      [](const Vec&) -> Vec {
        Vec v = Vec::Zero(5);
        v[3] = 1;
        return v;
      },
      [](const Vec&) -> Vec {
        Vec v = Vec::Zero(5);
        v[4] = 1;
        return v;
      },
  };
  p.sys.metric = [](const Vec&) { return Mat::Identity(3, 3); };
  p.cost = quadratic_cost();

  const bool so2 = symmetry == SnakeboardSymmetry::R2xSO2;
  const int k = so2 ? 3 : 2;
  p.sym.group = make_abelian_group(k);
  p.sym.action.map = [so2, broken_action](const Vec& g, const Vec& x) -> Vec {
    Vec y = x;
    y[0] += g[0];
    y[1] += g[1];
    if (so2) y[3] += g[2];
    if (broken_action) y[2] += g[0];
    return y;
  };
  if (so2) {
    p.sym.action.shape_idx = {2, 4};
    p.sym.action.group_idx = {0, 1, 3};
  } else {
    p.sym.action.shape_idx = {2, 3, 4};
    p.sym.action.group_idx = {0, 1};
  }

  p.sample_lo = Vec(5);
  p.sample_hi = Vec(5);
  // phi keeps clear of the singular strata at 0 and pi/2.
  p.sample_lo << -1, -1, -1, -1, 0.3;
  p.sample_hi << 1, 1, 1, 1, 1.2;
  p.group_lo = Vec::Constant(k, -2.0);
  p.group_hi = Vec::Constant(k, 2.0);

  p.default_state = Vec(5);
  p.default_state << 0, 0, 0.3, 0, 0.8;
  p.default_costate = Vec(5);
  p.default_costate << 0.2, -0.1, 1.0, 0.5, 0.4;

  if (!broken_action) {
    if (so2) {
      p.known_connection = [r](const Vec& xbar) -> Mat {
        const double theta = xbar[0], phi = xbar[1];
        Mat a = Mat::Zero(3, 2);
        a(0, 0) = r * std::cos(theta) / std::tan(phi);
        a(1, 0) = r * std::sin(theta) / std::tan(phi);
        return a;
      };
      p.known_curvature = [r](const Vec& xbar) -> std::vector<Mat> {
        const double theta = xbar[0], phi = xbar[1];
        const double csc2 = 1.0 / (std::sin(phi) * std::sin(phi));
        std::vector<Mat> b(3, Mat::Zero(2, 2));
        b[0](0, 1) = r * std::cos(theta) * csc2;
        b[0](1, 0) = -b[0](0, 1);
        b[1](0, 1) = r * std::sin(theta) * csc2;
        b[1](1, 0) = -b[1](0, 1);
        return b;
      };
    } else {
      p.known_connection = [r](const Vec& xbar) -> Mat {
        const double theta = xbar[0], phi = xbar[2];
        Mat a = Mat::Zero(2, 3);
        a(0, 0) = r * std::cos(theta) / std::tan(phi);
        a(1, 0) = r * std::sin(theta) / std::tan(phi);
        return a;
      };
      p.known_curvature = [r](const Vec& xbar) -> std::vector<Mat> {
        const double theta = xbar[0], phi = xbar[2];
        const double csc2 = 1.0 / (std::sin(phi) * std::sin(phi));
        std::vector<Mat> b(2, Mat::Zero(3, 3));
        b[0](0, 2) = r * std::cos(theta) * csc2;
        b[0](2, 0) = -b[0](0, 2);
        b[1](0, 2) = r * std::sin(theta) * csc2;
        b[1](2, 0) = -b[1](0, 2);
        return b;
      };
    }
  }
  return p;
}

ProblemDefinition build_rigid_body(double i1, double i2, double i3,
                                   const std::vector<int>& actuated) {
  require(i1 > 0 && i2 > 0 && i3 > 0, "build_rigid_body: inertias must be positive");
  require(!actuated.empty(), "build_rigid_body: need at least one actuated axis");
  ProblemDefinition p;
  p.name = "rigid-body";
  p.params["I1"] = i1;
  p.params["I2"] = i2;
  p.params["I3"] = i3;

  const Eigen::Vector3d inertia(i1, i2, i3);
  p.sys.m = 3;
  p.sys.d = static_cast<int>(actuated.size());
  p.sys.drift = [](const Vec& x) { return Vec::Zero(x.size()); };
  Vec diag(p.sys.d);
  for (int i = 0; i < p.sys.d; ++i) {
    const int axis = actuated[i];
    require(axis >= 1 && axis <= 3, "build_rigid_body: actuated axes are 1..3");
    p.sys.fields.push_back([axis](const Vec& x) -> Vec {
      return so3_left_invariant_field(Eigen::Vector3d(x),
                                      Eigen::Vector3d::Unit(axis - 1));
    });
    diag[i] = inertia[axis - 1];
  }
  const Mat metric = diag.asDiagonal();
  p.sys.metric = [metric](const Vec&) { return metric; };
  p.cost = quadratic_cost();

  p.sym.group = make_so3_group();
  p.sym.action.map = [group = p.sym.group](const Vec& g, const Vec& h) {
    return group.multiply(g, h);
  };
  p.sym.action.shape_idx = {};
  p.sym.action.group_idx = {0, 1, 2};

  p.sample_lo = Vec::Constant(3, -0.5);
  p.sample_hi = Vec::Constant(3, 0.5);
  p.group_lo = Vec::Constant(3, -0.5);
  p.group_hi = Vec::Constant(3, 0.5);

  p.default_state = Vec::Zero(3);
  p.default_costate = Vec(3);
  p.default_costate << 1.0, 0.5, 0.25;
  return p;
}

ProblemDefinition build_heisenberg() {
  ProblemDefinition p;
  p.name = "heisenberg";

  p.sys.m = 3;
  p.sys.d = 2;
  p.sys.drift = [](const Vec& x) { return Vec::Zero(x.size()); };
  p.sys.fields = {
      [](const Vec& x) -> Vec {
        Vec v(3);
        v << 1, 0, -x[1] / 2.0;
        return v;
      },
      [](const Vec& x) -> Vec {
        Vec v(3);
        v << 0, 1, x[0] / 2.0;
        return v;
      },
  };
  p.sys.metric = [](const Vec&) { return Mat::Identity(2, 2); };
  p.cost = quadratic_cost();

  p.sym.group = make_abelian_group(1);
  p.sym.action.map = [](const Vec& g, const Vec& x) -> Vec {
    Vec y = x;
    y[2] += g[0];
    return y;
  };
  p.sym.action.shape_idx = {0, 1};
  p.sym.action.group_idx = {2};

  p.sample_lo = Vec::Constant(3, -1.0);
  p.sample_hi = Vec::Constant(3, 1.0);
  p.group_lo = Vec::Constant(1, -2.0);
  p.group_hi = Vec::Constant(1, 2.0);

  p.default_state = Vec::Zero(3);
  p.default_costate = Vec(3);
  p.default_costate << 1, 0, 1;

  p.known_connection = [](const Vec& xbar) -> Mat {
    Mat a(1, 2);
    a << xbar[1] / 2.0, -xbar[0] / 2.0;
    return a;
  };
  p.known_curvature = [](const Vec&) -> std::vector<Mat> {
    std::vector<Mat> b(1, Mat::Zero(2, 2));
    b[0](0, 1) = -1.0;
    b[0](1, 0) = 1.0;
    return b;
  };
  return p;
}

}  // namespace redopt
