#include "redopt/pmp.hpp"

#include <cmath>
#include <cstdio>

namespace redopt {

double control_hamiltonian(const AffineControlSystem& sys, const Cost& cost,
                           const CotangentState& s, const Vec& u) {
  return s.lambda.dot(eval_dynamics(sys, s.x, u)) - cost(sys, s.x, u);
}

namespace {

Vec field_pairings(const AffineControlSystem& sys, const CotangentState& s) {
  Vec p(sys.d);
  for (int i = 0; i < sys.d; ++i) p[i] = s.lambda.dot(sys.fields[i](s.x));
  return p;
}

Vec newton_optimal_control(const AffineControlSystem& sys, const Cost& cost,
                           const CotangentState& s) {
  const Vec p = field_pairings(sys, s);
  const double fd = 1e-5;
  auto grad_c = [&](const Vec& u) {
    Vec g(sys.d);
    for (int i = 0; i < sys.d; ++i) {
      Vec up = u, um = u;
      up[i] += fd;
      um[i] -= fd;
      g[i] = (cost(sys, s.x, up) - cost(sys, s.x, um)) / (2 * fd);
    }
    return g;
  };
  auto hess_c = [&](const Vec& u) {
    Mat h(sys.d, sys.d);
    for (int i = 0; i < sys.d; ++i)
      for (int j = 0; j <= i; ++j) {
        Vec upp = u, upm = u, ump = u, umm = u;
        upp[i] += fd; upp[j] += fd;
        upm[i] += fd; upm[j] -= fd;
        ump[i] -= fd; ump[j] += fd;
        umm[i] -= fd; umm[j] -= fd;
        h(i, j) = h(j, i) = (cost(sys, s.x, upp) - cost(sys, s.x, upm) -
                             cost(sys, s.x, ump) + cost(sys, s.x, umm)) /
                            (4 * fd * fd);
      }
    return h;
  };

  Vec u = Vec::Zero(sys.d);
  const double tol = 1e-10 * std::max(1.0, p.norm());
  for (int it = 0; it < 50; ++it) {
    Vec f = p - grad_c(u);  // stationarity residual F_c Hhat(lambda, u)
    if (f.norm() <= tol) return u;
    Mat h = hess_c(u);
    Eigen::LDLT<Mat> ldlt(h);
    Vec step;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = ldlt.solve(f);
    } else {
      // Gauss-Newton style regularization when the Hessian is unusable.
      step = (h + 1e-6 * Mat::Identity(sys.d, sys.d)).ldlt().solve(f);
    }
    double alpha = 1.0;
    const double f0 = f.norm();
    while (alpha > 1e-10) {
      Vec trial = u + alpha * step;
      if ((p - grad_c(trial)).norm() < f0) {
        u = trial;
        break;
      }
      alpha *= 0.5;
    }
    if (alpha <= 1e-10) break;
  }
  if ((p - grad_c(u)).norm() > tol)
    throw NewtonError("optimal_control: no unique optimal control after 50 iterations");
  return u;
}

}  // namespace

Vec optimal_control(const AffineControlSystem& sys, const Cost& cost,
                    const CotangentState& s) {
  require(s.x.size() == sys.m && s.lambda.size() == sys.m,
          "optimal_control: dimension mismatch");
  if (cost.kind == Cost::Kind::QuadraticMetric) {
    Eigen::LDLT<Mat> ldlt(sys.metric(s.x));
    if (ldlt.info() != Eigen::Success)
      throw Error("optimal_control: cost metric not positive definite");
    return ldlt.solve(field_pairings(sys, s));
  }
  return newton_optimal_control(sys, cost, s);
}

double optimal_hamiltonian(const AffineControlSystem& sys, const Cost& cost,
                           const CotangentState& s) {
  return control_hamiltonian(sys, cost, s, optimal_control(sys, cost, s));
}

void canonical_flow_field(const AffineControlSystem& sys, const Cost& cost,
                          const CotangentState& s, Vec& xdot, Vec& lambdadot) {
  xdot = fd_gradient(
      [&](const Vec& lam) { return optimal_hamiltonian(sys, cost, {s.x, lam}); },
      s.lambda);
  lambdadot = -fd_gradient(
      [&](const Vec& x) { return optimal_hamiltonian(sys, cost, {x, s.lambda}); }, s.x);
}

Vec momentum_map(const SymmetrySpec& sym, const CotangentState& s) {
  return generator_matrix(sym.group, sym.action, s.x).transpose() * s.lambda;
}

CotangentState cotangent_lift(const SymmetrySpec& sym, const Vec& g,
                              const CotangentState& s) {
  const Vec gx = sym.action.map(g, s.x);
  const Vec ginv = sym.group.inverse(g);
  const Mat dphi_inv =
      numeric_jacobian([&](const Vec& p) { return sym.action.map(ginv, p); }, gx);
  return {gx, dphi_inv.transpose() * s.lambda};
}

Trajectory integrate_canonical(const ProblemDefinition& p, const CotangentState& s0,
                               double t0, double t1, double h) {
  require(h > 0 && t1 > t0, "integrate_canonical: need h > 0 and t1 > t0");
  const int m = p.m();
  require(s0.x.size() == m && s0.lambda.size() == m, "integrate_canonical: bad state");

  const long n = std::max(1L, std::lround((t1 - t0) / h));
  const double step = (t1 - t0) / static_cast<double>(n);

  auto flow = [&](const Vec& y) {
    CotangentState s{y.head(m), y.tail(m)};
    Vec xd, ld, out(2 * m);
    canonical_flow_field(p.sys, p.cost, s, xd, ld);
    out << xd, ld;
    return out;
  };

  Trajectory traj;
  Vec y(2 * m);
  y << s0.x, s0.lambda;
  double t = t0;
  for (long i = 0; i <= n; ++i) {
    CotangentState s{y.head(m), y.tail(m)};
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.controls.push_back(optimal_control(p.sys, p.cost, s));
    traj.hamiltonian.push_back(optimal_hamiltonian(p.sys, p.cost, s));
    traj.momentum.push_back(momentum_map(p.sym, s));
    if (i == n) break;

    try {
      Vec k1 = flow(y);
      Vec k2 = flow(y + 0.5 * step * k1);
      Vec k3 = flow(y + 0.5 * step * k2);
      Vec k4 = flow(y + step * k3);
      y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const DifferentiationError&) {
      throw BlowUpError("integrate_canonical: state became non-finite", t);
    }
    t = t0 + step * static_cast<double>(i + 1);
    if (!y.allFinite())
      throw BlowUpError("integrate_canonical: state became non-finite", traj.times.back());
  }
  return traj;
}

namespace {
void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}
}  // namespace

std::string trajectory_csv(const ProblemDefinition& p, const Trajectory& traj) {
  std::string out = "t";
  for (int i = 1; i <= p.m(); ++i) out += ",x_" + std::to_string(i);
  for (int i = 1; i <= p.m(); ++i) out += ",lambda_" + std::to_string(i);
  for (int i = 1; i <= p.d(); ++i) out += ",u_" + std::to_string(i);
  out += ",H";
  for (int i = 1; i <= p.k(); ++i) out += ",J_" + std::to_string(i);
  out += "\n";
  for (size_t r = 0; r < traj.size(); ++r) {
    append_num(out, traj.times[r]);
    for (int i = 0; i < p.m(); ++i) { out += ','; append_num(out, traj.states[r].x[i]); }
    for (int i = 0; i < p.m(); ++i) { out += ','; append_num(out, traj.states[r].lambda[i]); }
    for (int i = 0; i < p.d(); ++i) { out += ','; append_num(out, traj.controls[r][i]); }
    out += ',';
    append_num(out, traj.hamiltonian[r]);
    for (int i = 0; i < p.k(); ++i) { out += ','; append_num(out, traj.momentum[r][i]); }
    out += '\n';
  }
  return out;
}

}  // namespace redopt
