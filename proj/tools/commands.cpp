#include "commands.hpp"

#include <cstdio>
#include <iostream>
#include <json.hpp>

#include "redopt/bvp.hpp"
#include "redopt/connection.hpp"
#include "redopt/problems.hpp"
#include "redopt/reduction.hpp"

namespace redopt::cli {

namespace {

using nlohmann::json;

template <typename Derived>
std::vector<double> to_std(const Eigen::MatrixBase<Derived>& v) {
  std::vector<double> out(static_cast<size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
  return out;
}

struct RunSetup {
  ProblemDefinition problem;
  Vec x0, lambda0;
  double t0, t1, h;
};

RunSetup setup_run(const Config& cfg) {
  RunSetup run{problem_from_config(cfg), Vec(), Vec(), 0, 0, 0};
  run.x0 = cfg.get_vector("x0", run.problem.default_state);
  run.lambda0 = cfg.get_vector("lambda0", run.problem.default_costate);
  if (run.x0.size() != run.problem.m())
    throw ConfigError("config key `x0`: expected " + std::to_string(run.problem.m()) +
                      " values");
  if (run.lambda0.size() != run.problem.m())
    throw ConfigError("config key `lambda0`: expected " +
                      std::to_string(run.problem.m()) + " values");
  run.t0 = cfg.get_double("t0", 0.0);
  run.t1 = cfg.get_double("t1", 1.0);
  run.h = cfg.get_double("h", 1e-3);
  if (!(run.t1 > run.t0) || !(run.h > 0))
    throw ConfigError("config keys `t0`, `t1`, `h`: need t1 > t0 and h > 0");
  return run;
}

std::string out_path(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : dir + "/" + name;
}

}  // namespace

int cmd_simulate(const Config& cfg, const std::string& out_dir) {
  const RunSetup run = setup_run(cfg);
  Trajectory traj;
  try {
    traj = integrate_canonical(run.problem, {run.x0, run.lambda0}, run.t0, run.t1, run.h);
  } catch (const Error& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return 3;
  }

  double h_drift = 0, j_drift = 0;
  for (size_t i = 0; i < traj.size(); ++i) {
    h_drift = std::max(h_drift, std::abs(traj.hamiltonian[i] - traj.hamiltonian[0]));
    j_drift = std::max(j_drift,
                       (traj.momentum[i] - traj.momentum[0]).cwiseAbs().maxCoeff());
  }

  atomic_write(out_path(out_dir, run.problem.name + "_trajectory.csv"),
               trajectory_csv(run.problem, traj));
  json report;
  report["problem"] = run.problem.name;
  report["rows"] = traj.size();
  report["t0"] = run.t0;
  report["t1"] = run.t1;
  report["h"] = run.h;
  report["H_drift"] = h_drift;
  report["J_drift"] = j_drift;
  atomic_write(out_path(out_dir, run.problem.name + "_conservation.json"),
               report.dump(2) + "\n");
  std::cout << "simulate: " << traj.size() << " rows, H drift " << h_drift
            << ", J drift " << j_drift << "\n";
  return 0;
}

int cmd_reduce_compare(const Config& cfg, const std::string& out_dir) {
  const RunSetup run = setup_run(cfg);
  const ProblemDefinition& p = run.problem;
  try {
    Trajectory full =
        integrate_canonical(p, {run.x0, run.lambda0}, run.t0, run.t1, run.h);
    ReducedState rs0 = reduce_costate(p, {run.x0, run.lambda0});
    ReducedTrajectory rt = integrate_reduced(p, rs0, run.t0, run.t1, run.h);
    std::vector<Vec> group = reconstruct_group(p, rt);

    double config_dev = 0, h_diff = 0, mu_drift = 0, casimir_drift = 0;
    const double casimir0 = rs0.mutilde.squaredNorm();
    for (size_t i = 0; i < rt.size(); ++i) {
      const Vec cfg_red = p.sym.action.assemble(rt.states[i].xbar, group[i]);
      config_dev =
          std::max(config_dev, (cfg_red - full.states[i].x).cwiseAbs().maxCoeff());
      h_diff = std::max(h_diff, std::abs(full.hamiltonian[i] - rt.hbar[i]));
      mu_drift = std::max(
          mu_drift, (rt.states[i].mutilde - rs0.mutilde).cwiseAbs().maxCoeff());
      casimir_drift = std::max(
          casimir_drift, std::abs(rt.states[i].mutilde.squaredNorm() - casimir0));
    }

    atomic_write(out_path(out_dir, p.name + "_full.csv"), trajectory_csv(p, full));
    atomic_write(out_path(out_dir, p.name + "_reduced.csv"), reduced_csv(p, rt));
    atomic_write(out_path(out_dir, p.name + "_reconstructed.csv"),
                 reconstructed_csv(p, rt, group));

    json report;
    report["problem"] = p.name;
    report["rows"] = rt.size();
    report["dimensions"] = {{"full", 2 * p.m()}, {"reduced", 2 * p.s() + p.k()}};
    report["max_config_deviation"] = config_dev;
    report["max_H_Hbar_difference"] = h_diff;
    report["mutilde_drift"] = mu_drift;
    report["casimir_drift"] = casimir_drift;
    atomic_write(out_path(out_dir, p.name + "_compare.json"), report.dump(2) + "\n");
    std::cout << "reduce-compare: max configuration deviation " << config_dev << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "reduce-compare: " << e.what() << "\n";
    return 3;
  }
}

int cmd_shoot(const Config& cfg, const std::string& out_dir) {
  const RunSetup run = setup_run(cfg);
  const ProblemDefinition& p = run.problem;
  ShootingProblem sp;
  sp.problem = &p;
  sp.x0 = run.x0;
  sp.x1 = cfg.get_vector("x1");
  if (sp.x1.size() != p.m())
    throw ConfigError("config key `x1`: expected " + std::to_string(p.m()) + " values");
  sp.t0 = run.t0;
  sp.t1 = run.t1;
  sp.h = run.h;
  sp.guess = run.lambda0;
  sp.newton_tol = cfg.get_double("newton_tol", 1e-10);
  sp.max_iterations = cfg.get_int("newton_max_iter", 100);
  sp.fd_step = cfg.get_double("fd_step", 1e-6);

  const std::string mode = cfg.get_string("mode", "both");
  if (mode != "full" && mode != "reduced" && mode != "both")
    throw ConfigError("config key `mode`: expected full, reduced, or both");

  json report;
  report["problem"] = p.name;
  bool all_converged = true;
  ShootingResult full, reduced;
  if (mode == "full" || mode == "both") {
    full = shoot_full(sp);
    report["full"] = json::parse(shooting_result_json(full));
    all_converged = all_converged && full.converged;
  }
  if (mode == "reduced" || mode == "both") {
    reduced = shoot_reduced(sp);
    report["reduced"] = json::parse(shooting_result_json(reduced));
    all_converged = all_converged && reduced.converged;
  }
  if (mode == "both" && full.converged && reduced.converged) {
    report["cost_difference"] = std::abs(full.cost - reduced.cost);
    double dev = 0;
    for (size_t i = 0; i < full.configs.size() && i < reduced.configs.size(); ++i)
      dev = std::max(dev, (full.configs[i] - reduced.configs[i]).cwiseAbs().maxCoeff());
    report["max_config_deviation"] = dev;
  }
  atomic_write(out_path(out_dir, p.name + "_shoot.json"), report.dump(2) + "\n");
  std::cout << "shoot: " << (all_converged ? "converged" : "failed") << "\n";
  return all_converged ? 0 : 4;
}

int cmd_verify(const Config& cfg, const std::string& out_dir) {
  const ProblemDefinition p = problem_from_config(cfg);
  const int n = cfg.get_int("samples", 100);
  const double tol_sym = cfg.get_double("tol_symmetry", 1e-6);
  const double tol_inv = cfg.get_double("tol_invariance", 1e-6);
  const double tol_curv = cfg.get_double("tol_curvature", 1e-5);

  json report;
  report["problem"] = p.name;
  bool ok = true;

  try {
    // Symmetry residuals on Halton samples.
    SymmetryReport sym = verify_problem_symmetry(p, n);
    json rows = json::array();
    for (size_t i = 0; i < sym.rows.size(); i += sym.rows.size() / 10 + 1) {
      const auto& r = sym.rows[i];
      rows.push_back({{"dynamics", r.dynamics},
                      {"drift", r.drift},
                      {"distribution", r.distribution},
                      {"cost", r.cost}});
    }
    report["symmetry"] = {{"samples", n},
                          {"max_residual", sym.max_residual()},
                          {"tolerance", tol_sym},
                          {"passed", sym.passed(tol_sym)},
                          {"sample_rows", rows}};
    ok = ok && sym.passed(tol_sym);

    // Horizontal-space invariance.
    Mat xs = halton_box(n, p.sample_lo, p.sample_hi, 10);
    Mat gs = halton_box(n, p.group_lo, p.group_hi, 110);
    std::vector<std::array<Vec, 2>> pairs;
    for (int i = 0; i < n; ++i) pairs.push_back({xs.col(i), gs.col(i)});
    InvarianceReport inv = check_connection_invariance(p, pairs);
    report["connection_invariance"] = {{"samples", n},
                                       {"max_distance", inv.max_distance()},
                                       {"tolerance", tol_inv},
                                       {"passed", inv.max_distance() <= tol_inv}};
    ok = ok && inv.max_distance() <= tol_inv;

    // Connection report: per-sample coefficients, class, and residuals.
    {
      json conn;
      json samples_json = json::array();
      const int conn_samples = std::min(8, n);
      for (int i = 0; i < conn_samples; ++i) {
        const Vec xbar = p.sym.action.shape_of(xs.col(i));
        json entry;
        entry["xbar"] = to_std(xbar);
        if (p.s() > 0) {
          auto data = curvature(p, xbar);
          json a_rows = json::array();
          for (int a = 0; a < p.k(); ++a) a_rows.push_back(to_std(data.A.row(a)));
          entry["A"] = a_rows;
          json b_bands = json::array();
          for (int a = 0; a < p.k(); ++a) {
            json rows = json::array();
            for (int al = 0; al < p.s(); ++al) rows.push_back(to_std(data.B[a].row(al)));
            b_bands.push_back(rows);
          }
          entry["B"] = b_bands;
        }
        samples_json.push_back(entry);
      }
      conn["samples"] = samples_json;
      KinematicClass kc = classify(p, p.default_state);
      conn["kinematic_class"] = {{"dim_S", kc.dim_S},
                                 {"dim_U", kc.dim_U},
                                 {"purely_kinematic", kc.purely_kinematic},
                                 {"dimension_assumption", kc.dimension_assumption_holds}};
      json resid = json::array();
      for (size_t i = 0; i < inv.rows.size() && i < 20; ++i)
        resid.push_back(inv.rows[i].distance);
      conn["invariance_residuals"] = resid;
      atomic_write(out_path(out_dir, p.name + "_connection_report.json"),
                   conn.dump(2) + "\n");
    }

    // Closed-form connection data, when the problem carries it.
    if (p.known_connection && p.known_curvature && p.s() > 0) {
      double a_err = 0, b_err = 0;
      Mat shape_pts = halton_box(25, p.sample_lo, p.sample_hi, 210);
      for (int i = 0; i < shape_pts.cols(); ++i) {
        const Vec xbar = p.sym.action.shape_of(shape_pts.col(i));
        auto data = curvature(p, xbar);
        a_err = std::max(a_err,
                         (data.A - p.known_connection(xbar)).cwiseAbs().maxCoeff());
        auto kb = p.known_curvature(xbar);
        for (int a = 0; a < p.k(); ++a)
          b_err = std::max(b_err, (data.B[a] - kb[a]).cwiseAbs().maxCoeff());
      }
      report["curvature_oracle"] = {{"connection_error", a_err},
                                    {"curvature_error", b_err},
                                    {"tolerance", tol_curv},
                                    {"passed", a_err <= tol_curv && b_err <= tol_curv}};
      ok = ok && a_err <= tol_curv && b_err <= tol_curv;
    } else {
      report["curvature_oracle"] = {{"skipped", true}};
    }

    // Classification at the default state.
    KinematicClass c = classify(p, p.default_state);
    report["classification"] = {{"dim_S", c.dim_S},
                                {"dim_U", c.dim_U},
                                {"purely_kinematic", c.purely_kinematic},
                                {"dimension_assumption", c.dimension_assumption_holds},
                                {"passed", c.dimension_assumption_holds}};
    ok = ok && c.dimension_assumption_holds;
  } catch (const Error& e) {
    report["error"] = e.what();
    ok = false;
  }

  report["passed"] = ok;
  atomic_write(out_path(out_dir, p.name + "_verify.json"), report.dump(2) + "\n");
  std::cout << "verify " << p.name << ": " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 5;
}

int cmd_list() {
  const auto describe = [](const ProblemDefinition& p) {
    std::printf("%-18s m=%d d=%d k=%d s=%d\n", p.name.c_str(), p.m(), p.d(), p.k(),
                p.s());
  };
  describe(build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2));
  describe(build_snakeboard(1.0, SnakeboardSymmetry::R2));
  describe(build_rigid_body(1, 2, 3));
  describe(build_heisenberg());
  std::printf(
      "\nproblem keys: snakeboard (r, symmetry=r2|r2xso2, broken_action), "
      "rigid-body (inertia, actuated), heisenberg\n");
  return 0;
}

}  // namespace redopt::cli
