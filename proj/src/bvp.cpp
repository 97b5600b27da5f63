#include "redopt/bvp.hpp"

#include <cmath>
#include <json.hpp>

namespace redopt {

namespace {

/// Composite Simpson over trajectory nodes; trapezoid on a trailing odd
/// interval.
double simpson(const std::vector<double>& t, const std::vector<double>& f) {
  const size_t n = t.size() - 1;
  double sum = 0;
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double h = t[i + 1] - t[i];
    sum += (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  }
  if (i < n) sum += 0.5 * (t[i + 1] - t[i]) * (f[i] + f[i + 1]);
  return sum;
}

struct Evaluation {
  Vec residual;
  double cost = 0;
  std::vector<double> times;
  std::vector<Vec> configs;
};

/// Damped Newton shared by both shooting modes.
ShootingResult newton_shoot(const ShootingProblem& sp, const Vec& start,
                            const std::function<Evaluation(const Vec&)>& eval) {
  ShootingResult out;
  out.unknowns = start;

  Evaluation current;
  try {
    current = eval(out.unknowns);
  } catch (const Error& e) {
    out.status = ShootStatus::BlowUp;
    out.message = e.what();
    return out;
  }

  const Eigen::Index n = start.size();
  for (int it = 1; it <= sp.max_iterations; ++it) {
    out.iterations = it;
    out.residual_history.push_back(current.residual.norm());
    if (current.residual.norm() <= sp.newton_tol) {
      out.converged = true;
      out.status = ShootStatus::Converged;
      break;
    }
    if (it == sp.max_iterations) {
      out.status = ShootStatus::MaxIterations;
      out.message = "no convergence within the iteration budget";
      break;
    }

    Mat jac(current.residual.size(), n);
    try {
      for (Eigen::Index j = 0; j < n; ++j) {
        Vec probe = out.unknowns;
        probe[j] += sp.fd_step;
        jac.col(j) = (eval(probe).residual - current.residual) / sp.fd_step;
      }
    } catch (const Error& e) {
      out.status = ShootStatus::BlowUp;
      out.message = e.what();
      break;
    }

    Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) {
      out.status = ShootStatus::SingularJacobian;
      out.message = "endpoint Jacobian singular";
      break;
    }
    const Vec step = lu.solve(-current.residual);

    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-8) {
      const Vec trial = out.unknowns + alpha * step;
      try {
        Evaluation cand = eval(trial);
        if (cand.residual.norm() < current.residual.norm()) {
          out.unknowns = trial;
          current = std::move(cand);
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // Trial integration blew up; shrink the step.
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Stalled line search; remaining iterations cannot make progress.
      out.status = ShootStatus::MaxIterations;
      out.message = "line search stalled";
      out.iterations = sp.max_iterations;
      break;
    }
  }

  out.endpoint_residual = current.residual.norm();
  out.cost = current.cost;
  out.times = std::move(current.times);
  out.configs = std::move(current.configs);
  return out;
}

}  // namespace

ShootingResult shoot_full(const ShootingProblem& sp) {
  const ProblemDefinition& p = *sp.problem;
  require(sp.t1 > sp.t0, "shoot_full: t1 must exceed t0");
  require(sp.guess.size() == p.m(), "shoot_full: guess must be a full costate");

  auto eval = [&](const Vec& lambda0) {
    Trajectory traj = integrate_canonical(p, {sp.x0, lambda0}, sp.t0, sp.t1, sp.h);
    Evaluation e;
    e.residual = traj.states.back().x - sp.x1;
    std::vector<double> rate(traj.size());
    for (size_t i = 0; i < traj.size(); ++i)
      rate[i] = p.cost(p.sys, traj.states[i].x, traj.controls[i]);
    e.cost = simpson(traj.times, rate);
    e.times = traj.times;
    e.configs.reserve(traj.size());
    for (const CotangentState& s : traj.states) e.configs.push_back(s.x);
    return e;
  };

  ShootingResult out = newton_shoot(sp, sp.guess, eval);
  out.dims_integrated = 2 * p.m();
  return out;
}

std::vector<std::pair<int, double>> detect_decoupled_momenta(const ProblemDefinition& p) {
  std::vector<std::pair<int, double>> out;
  if (!p.sym.group.abelian() || p.k() == 0) return out;
  const int k = p.k(), s = p.s();

  const int nsamp = 8;
  Mat xs = halton_box(nsamp, p.sample_lo, p.sample_hi, 500);
  Mat red = halton_box(nsamp, Vec::Constant(s + k, -1.0), Vec::Constant(s + k, 1.0), 700);

  for (int a = 0; a < k; ++a) {
    bool zero_row = true;
    double coeff = 0;
    bool coeff_set = false;
    bool linear = true;
    for (int i = 0; i < nsamp && zero_row; ++i) {
      const Vec xbar = p.sym.action.shape_of(xs.col(i));
      const Frame f = frame_at_shape(p, xbar);
      if (s > 0 && f.A.row(a).cwiseAbs().maxCoeff() > 1e-12) {
        zero_row = false;
        break;
      }
      // Probe xitilde^a = c mutilde_a across states.
      ReducedState rs;
      rs.xbar = xbar;
      rs.lambdabar = red.col(i).head(s);
      rs.mutilde = red.col(i).tail(k);
      rs.g = p.sym.group.identity;
      rs.mutilde[a] = 1.0 + 0.25 * i;  // keep the probed component away from zero
      const ReducedSplit split = reduced_split(p, f, rs);
      const double c = split.body_velocity[a] / rs.mutilde[a];
      if (!coeff_set) {
        coeff = c;
        coeff_set = true;
      } else if (std::abs(c - coeff) > 1e-9) {
        linear = false;
        break;
      }
    }
    if (zero_row && linear && coeff_set && std::abs(coeff) > 1e-8)
      out.emplace_back(a, coeff);
  }
  return out;
}

ShootingResult shoot_reduced(const ShootingProblem& sp) {
  const ProblemDefinition& p = *sp.problem;
  require(sp.t1 > sp.t0, "shoot_reduced: t1 must exceed t0");
  require(sp.guess.size() == p.m(), "shoot_reduced: guess must be a full costate");
  const int k = p.k(), s = p.s();

  const Vec xbar0 = p.sym.action.shape_of(sp.x0);
  const Vec g0 = p.sym.action.group_of(sp.x0);
  const Vec xbar1 = p.sym.action.shape_of(sp.x1);
  const Vec g1 = p.sym.action.group_of(sp.x1);

  // Closed-form elimination of decoupled Abelian momenta:
  // g^a(t1) = g^a(t0) + c_a mutilde_a (t1 - t0).
  const auto eliminations = detect_decoupled_momenta(p);
  std::vector<bool> eliminated(k, false);
  Vec mutilde_fixed = Vec::Zero(k);
  for (const auto& [a, c] : eliminations) {
    eliminated[a] = true;
    mutilde_fixed[a] = (g1[a] - g0[a]) / (c * (sp.t1 - sp.t0));
  }
  std::vector<int> free_idx;
  for (int a = 0; a < k; ++a)
    if (!eliminated[a]) free_idx.push_back(a);

  const ReducedState guess_rs = reduce_costate(p, {sp.x0, sp.guess});
  Vec start(s + static_cast<int>(free_idx.size()));
  start.head(s) = guess_rs.lambdabar;
  for (size_t i = 0; i < free_idx.size(); ++i) start[s + i] = guess_rs.mutilde[free_idx[i]];

  auto eval = [&](const Vec& unknowns) {
    ReducedState rs0;
    rs0.xbar = xbar0;
    rs0.lambdabar = unknowns.head(s);
    rs0.mutilde = mutilde_fixed;
    for (size_t i = 0; i < free_idx.size(); ++i) rs0.mutilde[free_idx[i]] = unknowns[s + i];
    rs0.g = g0;

    ReducedTrajectory rt = integrate_reduced(p, rs0, sp.t0, sp.t1, sp.h);
    std::vector<Vec> group = reconstruct_group(p, rt);

    Evaluation e;
    e.residual.resize(s + free_idx.size());
    e.residual.head(s) = rt.states.back().xbar - xbar1;
    Vec gdiff;
    if (p.sym.group.abelian()) {
      gdiff = group.back() - g1;
    } else {
      gdiff = p.sym.group.log(p.sym.group.multiply(p.sym.group.inverse(g1), group.back()));
    }
    for (size_t i = 0; i < free_idx.size(); ++i) e.residual[s + i] = gdiff[free_idx[i]];
    e.cost = simpson(rt.times, rt.cost_rate);
    e.times = rt.times;
    e.configs.reserve(rt.size());
    for (size_t i = 0; i < rt.size(); ++i)
      e.configs.push_back(p.sym.action.assemble(rt.states[i].xbar, group[i]));
    return e;
  };

  ShootingResult out = newton_shoot(sp, start, eval);
  out.dims_integrated = 2 * s + k;
  for (const auto& [a, c] : eliminations) {
    out.eliminated_indices.push_back(a);
  }
  out.eliminated_values.resize(out.eliminated_indices.size());
  for (size_t i = 0; i < out.eliminated_indices.size(); ++i)
    out.eliminated_values[i] = mutilde_fixed[out.eliminated_indices[i]];
  return out;
}

std::string shooting_result_json(const ShootingResult& r) {
  nlohmann::json j;
  j["converged"] = r.converged;
  switch (r.status) {
    case ShootStatus::Converged: j["status"] = "converged"; break;
    case ShootStatus::MaxIterations: j["status"] = "max-iterations"; break;
    case ShootStatus::SingularJacobian: j["status"] = "singular-jacobian"; break;
    case ShootStatus::BlowUp: j["status"] = "blow-up"; break;
  }
  if (!r.message.empty()) j["message"] = r.message;
  j["iterations"] = r.iterations;
  j["residual_history"] = r.residual_history;
  j["unknowns"] = std::vector<double>(r.unknowns.data(), r.unknowns.data() + r.unknowns.size());
  j["endpoint_residual"] = r.endpoint_residual;
  j["cost"] = r.cost;
  j["dimensions_integrated"] = r.dims_integrated;
  j["eliminated_indices"] = r.eliminated_indices;
  j["eliminated_values"] = std::vector<double>(
      r.eliminated_values.data(), r.eliminated_values.data() + r.eliminated_values.size());
  return j.dump(2);
}

}  // namespace redopt
