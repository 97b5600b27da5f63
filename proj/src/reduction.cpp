#include "redopt/reduction.hpp"

#include <cmath>
#include <cstdio>

namespace redopt {

ReducedState reduce_costate(const ProblemDefinition& p, const CotangentState& s) {
  const Frame f = frame_at(p, s.x);
  ReducedState rs;
  rs.xbar = p.sym.action.shape_of(s.x);
  rs.g = p.sym.action.group_of(s.x);
  Vec momentum;
  f.reduce(s.lambda, rs.lambdabar, momentum);
  rs.mutilde = adjoint(p.sym.group, rs.g).transpose() * momentum;
  return rs;
}

CotangentState representative_costate(const Frame& f, const ReducedState& rs) {
  return {f.x, f.costate_from(rs.lambdabar, rs.mutilde)};
}

ReducedSplit reduced_split(const ProblemDefinition& p, const Frame& f,
                           const ReducedState& rs) {
  const CotangentState rep = representative_costate(f, rs);
  ReducedSplit out;
  out.u = optimal_control(p.sys, p.cost, rep);
  const Vec vel = eval_dynamics(p.sys, rep.x, out.u);
  f.split_velocity(vel, out.shape_velocity, out.body_velocity);
  out.cost = p.cost(p.sys, rep.x, out.u);
  return out;
}

double reduced_hamiltonian(const ProblemDefinition& p, const ReducedState& rs) {
  const Frame f = frame_at_shape(p, rs.xbar);
  return optimal_hamiltonian(p.sys, p.cost, representative_costate(f, rs));
}

HPDerivatives hp_field(const ProblemDefinition& p, const ReducedState& rs,
                       ConnectionCache* cache) {
  const int k = p.k(), s = p.s();
  require(rs.xbar.size() == s && rs.lambdabar.size() == s && rs.mutilde.size() == k,
          "hp_field: dimension mismatch");
  const Frame f = frame_at_shape(p, rs.xbar);

  // The fiber derivatives of Hbar are the split of the optimal velocity at a
  // representative (the Legendre relation dH/dlambda = f(x, u*)).
  const ReducedSplit split = reduced_split(p, f, rs);

  HPDerivatives out;
  out.xbar_dot = split.shape_velocity;
  out.xitilde = split.body_velocity;
  out.cost_rate = split.cost;
  out.hbar = rs.lambdabar.dot(split.shape_velocity) +
             rs.mutilde.dot(split.body_velocity) - split.cost;
  out.group_velocity = split.body_velocity - f.A * split.shape_velocity;

  // -dHbar/dxbar by central differences; the geometry is rebuilt at each
  // perturbed shape point while (lambdabar, mutilde) stay fixed.
  Vec grad_x(s);
  if (s > 0)
    grad_x = fd_gradient(
        [&](const Vec& xb) {
          const Frame fp = frame_at_shape(p, xb);
          return optimal_hamiltonian(p.sys, p.cost, representative_costate(fp, rs));
        },
        rs.xbar);

  out.lambdabar_dot = Vec::Zero(s);
  if (s > 0) {
    const LocalConnectionData* conn;
    LocalConnectionData local;
    if (cache) {
      conn = &cache->at(rs.xbar);
    } else {
      local = curvature(p, rs.xbar);
      conn = &local;
    }
    for (int alpha = 0; alpha < s; ++alpha) {
      double v = -grad_x[alpha];
      for (int a = 0; a < k; ++a) {
        double magnetic = 0;
        for (int beta = 0; beta < s; ++beta)
          magnetic += conn->B[a](beta, alpha) * out.xbar_dot[beta];
        double coad = 0;
        for (int b = 0; b < k; ++b)
          for (int d = 0; d < k; ++d)
            coad += conn->A(b, alpha) * p.sym.group.C[a](d, b) * out.xitilde[d];
        v -= rs.mutilde[a] * (magnetic + coad);
      }
      out.lambdabar_dot[alpha] = v;
    }
  }

  if (p.sym.group.abelian()) {
    out.mutilde_dot = Vec::Zero(k);
  } else {
    const Vec relative = out.xitilde - f.A * out.xbar_dot;
    out.mutilde_dot = ad_star(p.sym.group, relative, rs.mutilde);
  }
  return out;
}

namespace {

Vec pack(const ReducedState& rs) {
  const Eigen::Index s = rs.xbar.size(), k = rs.mutilde.size();
  Vec y(2 * s + k);
  y.segment(0, s) = rs.xbar;
  y.segment(s, s) = rs.lambdabar;
  y.segment(2 * s, k) = rs.mutilde;
  return y;
}

Vec pack_field(const HPDerivatives& d) {
  const Eigen::Index s = d.xbar_dot.size(), k = d.mutilde_dot.size();
  Vec y(2 * s + k);
  y.segment(0, s) = d.xbar_dot;
  y.segment(s, s) = d.lambdabar_dot;
  y.segment(2 * s, k) = d.mutilde_dot;
  return y;
}

ReducedState unpack(const Vec& y, int s, int k, const Vec& g) {
  return {y.segment(0, s), y.segment(s, s), y.segment(2 * s, k), g};
}

}  // namespace

ReducedTrajectory integrate_reduced(const ProblemDefinition& p, const ReducedState& rs0,
                                    double t0, double t1, double h) {
  require(h > 0 && t1 > t0, "integrate_reduced: need h > 0 and t1 > t0");
  const int s = p.s(), k = p.k();
  const long n = std::max(1L, std::lround((t1 - t0) / h));
  const double step = (t1 - t0) / static_cast<double>(n);

  auto flow = [&](const Vec& y) {
    return pack_field(hp_field(p, unpack(y, s, k, rs0.g)));
  };

  ReducedTrajectory traj;
  Vec y = pack(rs0);
  double t = t0;
  for (long i = 0; i <= n; ++i) {
    ReducedState rs = unpack(y, s, k, rs0.g);
    try {
      // The node evaluation doubles as the first RK4 stage.
      const HPDerivatives d = hp_field(p, rs);
      traj.times.push_back(t);
      traj.states.push_back(rs);
      traj.hbar.push_back(d.hbar);
      traj.xitilde.push_back(d.xitilde);
      traj.cost_rate.push_back(d.cost_rate);
      traj.node_field.push_back(pack_field(d));
      traj.group_velocity.push_back(d.group_velocity);
      if (i == n) break;

      const Vec& k1 = traj.node_field.back();
      Vec k2 = flow(y + 0.5 * step * k1);
      Vec k3 = flow(y + 0.5 * step * k2);
      Vec k4 = flow(y + step * k3);
      y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const DifferentiationError&) {
      throw BlowUpError("integrate_reduced: state became non-finite", t);
    }
    t = t0 + step * static_cast<double>(i + 1);
    if (!y.allFinite())
      throw BlowUpError("integrate_reduced: state became non-finite", traj.times.back());
  }
  return traj;
}

namespace {

/// xi = xitilde - A(xbar) xbardot at a reduced state, from one frame.
Vec group_velocity_at(const ProblemDefinition& p, const ReducedState& rs) {
  const Frame f = frame_at_shape(p, rs.xbar);
  const ReducedSplit split = reduced_split(p, f, rs);
  return split.body_velocity - f.A * split.shape_velocity;
}

}  // namespace

std::vector<Vec> reconstruct_group(const ProblemDefinition& p, const ReducedTrajectory& rt) {
  require(rt.size() >= 1, "reconstruct_group: empty trajectory");
  require(rt.node_field.size() == rt.size(),
          "reconstruct_group: trajectory lacks node fields");
  const int s = p.s(), k = p.k();
  std::vector<Vec> group;
  group.reserve(rt.size());
  group.push_back(rt.states.front().g);

  for (size_t i = 0; i + 1 < rt.size(); ++i) {
    const double h = rt.times[i + 1] - rt.times[i];
    // Cubic Hermite midpoint from the stored nodes and node fields.
    const Vec y_mid = 0.5 * (pack(rt.states[i]) + pack(rt.states[i + 1])) +
                      (h / 8.0) * (rt.node_field[i] - rt.node_field[i + 1]);
    const Vec xi_mid = group_velocity_at(p, unpack(y_mid, s, k, rt.states[i].g));
    if (p.sym.group.abelian()) {
      group.push_back(group.back() +
                      (h / 6.0) * (rt.group_velocity[i] + 4.0 * xi_mid +
                                   rt.group_velocity[i + 1]));
    } else {
      group.push_back(p.sym.group.multiply(group.back(), p.sym.group.exp(h * xi_mid)));
    }
  }
  return group;
}

void lie_poisson_field(const ProblemDefinition& p, const Vec& mutilde, Vec& xi,
                       Vec& mutilde_dot) {
  require(p.s() == 0, "lie_poisson_field: problem must have no shape variables (M = G)");
  const ReducedState rs{Vec(0), Vec(0), mutilde, p.sym.group.identity};
  const HPDerivatives d = hp_field(p, rs);
  xi = d.xitilde;
  mutilde_dot = d.mutilde_dot;
}

namespace {
void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

std::string reduced_header(const ProblemDefinition& p) {
  std::string out = "t";
  for (int i = 1; i <= p.s(); ++i) out += ",xbar_" + std::to_string(i);
  for (int i = 1; i <= p.s(); ++i) out += ",lambdabar_" + std::to_string(i);
  for (int i = 1; i <= p.k(); ++i) out += ",mutilde_" + std::to_string(i);
  for (int i = 1; i <= p.k(); ++i) out += ",xitilde_" + std::to_string(i);
  out += ",Hbar";
  return out;
}

void reduced_row(std::string& out, const ProblemDefinition& p, const ReducedTrajectory& rt,
                 size_t r) {
  append_num(out, rt.times[r]);
  for (int i = 0; i < p.s(); ++i) { out += ','; append_num(out, rt.states[r].xbar[i]); }
  for (int i = 0; i < p.s(); ++i) { out += ','; append_num(out, rt.states[r].lambdabar[i]); }
  for (int i = 0; i < p.k(); ++i) { out += ','; append_num(out, rt.states[r].mutilde[i]); }
  for (int i = 0; i < p.k(); ++i) { out += ','; append_num(out, rt.xitilde[r][i]); }
  out += ',';
  append_num(out, rt.hbar[r]);
}
}  // namespace

std::string reduced_csv(const ProblemDefinition& p, const ReducedTrajectory& rt) {
  std::string out = reduced_header(p) + "\n";
  for (size_t r = 0; r < rt.size(); ++r) {
    reduced_row(out, p, rt, r);
    out += '\n';
  }
  return out;
}

std::string reconstructed_csv(const ProblemDefinition& p, const ReducedTrajectory& rt,
                              const std::vector<Vec>& group) {
  require(group.size() == rt.size(), "reconstructed_csv: length mismatch");
  std::string out = reduced_header(p);
  for (int i = 1; i <= p.k(); ++i) out += ",g_" + std::to_string(i);
  out += "\n";
  for (size_t r = 0; r < rt.size(); ++r) {
    reduced_row(out, p, rt, r);
    for (int i = 0; i < p.k(); ++i) { out += ','; append_num(out, group[r][i]); }
    out += '\n';
  }
  return out;
}

}  // namespace redopt
