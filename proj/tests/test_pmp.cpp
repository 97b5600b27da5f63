#include <doctest.h>

#include "oracles.hpp"
#include "redopt/pmp.hpp"
#include "redopt/problems.hpp"

using namespace redopt;
using oracles::vec;

namespace {
CotangentState snake_state(double theta, double phi, const Vec& lambda) {
  Vec x = Vec::Zero(5);
  x[2] = theta;
  x[4] = phi;
  return {x, lambda};
}
}  // namespace

TEST_CASE("control Hamiltonian") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);

  CHECK(control_hamiltonian(p.sys, p.cost, snake_state(0.7, 0.9, Vec::Zero(5)),
                            vec({1, 0, 0})) == doctest::Approx(-0.5));
  CHECK(control_hamiltonian(p.sys, p.cost, snake_state(0, 0, vec({1, 0, 0, 0, 0})),
                            vec({1, 0, 0})) == doctest::Approx(0.5));
  CHECK(control_hamiltonian(p.sys, p.cost, snake_state(0.3, 0.8, vec({1, 2, 3, 4, 5})),
                            Vec::Zero(3)) == doctest::Approx(0.0));
}

TEST_CASE("optimal control elimination") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);

  SUBCASE("closed form at theta = 0, phi = 0") {
    Vec u = optimal_control(p.sys, p.cost, snake_state(0, 0, vec({1, 0, 5, 2, 3})));
    CHECK((u - vec({1, 2, 3})).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("zero costate") {
    Vec u = optimal_control(p.sys, p.cost, snake_state(0.3, 0.8, Vec::Zero(5)));
    CHECK(u.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("steering through the wheel angle") {
    Vec u = optimal_control(p.sys, p.cost, snake_state(0, M_PI / 4, vec({0, 0, 1, 0, 0})));
    CHECK((u - vec({-1, 0, 0})).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("stationarity of the control Hamiltonian at u*") {
    CotangentState s = snake_state(0.4, 0.7, vec({0.3, -0.8, 1.2, 0.1, -0.5}));
    Vec ustar = optimal_control(p.sys, p.cost, s);
    Mat dirs = halton_box(5, Vec::Constant(3, -1.0), Vec::Constant(3, 1.0));
    for (int i = 0; i < dirs.cols(); ++i) {
      const Vec w = dirs.col(i);
      const double h = 1e-6;
      double plus = control_hamiltonian(p.sys, p.cost, s, ustar + h * w);
      double minus = control_hamiltonian(p.sys, p.cost, s, ustar - h * w);
      CHECK(std::abs((plus - minus) / (2 * h)) < 1e-8);
    }
  }

  SUBCASE("Newton fallback for a non-quadratic cost") {
    Cost quartic;
    quartic.kind = Cost::Kind::General;
    quartic.value = [](const Vec&, const Vec& u) {
      return 0.5 * u.squaredNorm() + 0.25 * u.squaredNorm() * u.squaredNorm();
    };
    CotangentState s = snake_state(0.2, 0.9, vec({0.5, 0.2, -0.4, 0.8, 0.3}));
    Vec u = optimal_control(p.sys, quartic, s);
    // Stationarity: <lambda, X_j> = dC/du_j at u*.
    for (int j = 0; j < 3; ++j) {
      const double pj = s.lambda.dot(p.sys.fields[j](s.x));
      const double dcj = (1.0 + u.squaredNorm()) * u[j];
      CHECK(pj == doctest::Approx(dcj).epsilon(1e-6));
    }
  }
}

TEST_CASE("optimal Hamiltonian values") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);

  CHECK(optimal_hamiltonian(p.sys, p.cost, snake_state(0, M_PI / 4, vec({0, 0, 1, 0, 0}))) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(optimal_hamiltonian(p.sys, p.cost, snake_state(0.5, 1.0, Vec::Zero(5))) == 0.0);
  CHECK(optimal_hamiltonian(p.sys, p.cost, snake_state(0, 0.6, vec({1, 0, 0, 2, 0}))) ==
        doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("canonical flow field") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);

  SUBCASE("closed-form point check") {
    Vec xd, ld;
    canonical_flow_field(p.sys, p.cost, snake_state(0, M_PI / 4, vec({0, 0, 1, 0, 0})), xd,
                         ld);
    CHECK(xd[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(xd[1]) < 1e-6);
    CHECK(xd[2] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(xd[3]) < 1e-9);
    CHECK(std::abs(xd[4]) < 1e-9);
    CHECK(std::abs(ld[2]) < 1e-6);
    CHECK(ld[4] == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(std::abs(ld[0]) < 1e-9);
    CHECK(std::abs(ld[1]) < 1e-9);
    CHECK(std::abs(ld[3]) < 1e-9);
  }

  SUBCASE("zero costate of a drift-free system is stationary") {
    Vec xd, ld;
    canonical_flow_field(p.sys, p.cost, snake_state(0.3, 0.8, Vec::Zero(5)), xd, ld);
    CHECK(xd.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ld.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("matches the hand-coded optimal system at random states") {
    Mat states = halton_box(8, Vec::Constant(10, -1.0), Vec::Constant(10, 1.0));
    for (int i = 0; i < states.cols(); ++i) {
      Vec x = states.col(i).head(5);
      x[4] = 0.5 + 0.3 * x[4];  // keep phi away from the singular strata
      Vec lam = states.col(i).tail(5);
      Vec xd, ld, oxd, old_;
      canonical_flow_field(p.sys, p.cost, {x, lam}, xd, ld);
      oracles::snakeboard_full_rhs(1.0, x, lam, oxd, old_);
      CHECK((xd - oxd).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((ld - old_).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("momentum map") {
  Vec lambda = vec({0.3, -1.1, 7, 0.5, 2});
  auto p3 = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);
  auto p2 = build_snakeboard(1.0, SnakeboardSymmetry::R2);
  CotangentState s{p3.default_state, lambda};

  CHECK((momentum_map(p3.sym, s) - vec({0.3, -1.1, 0.5})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(momentum_map(p3.sym, {p3.default_state, Vec::Zero(5)}).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((momentum_map(p2.sym, s) - vec({0.3, -1.1})).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cotangent lift invariance and control equivariance") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);
  Mat gs = halton_box(5, p.group_lo, p.group_hi);
  Mat states = halton_box(5, Vec::Constant(10, -1.0), Vec::Constant(10, 1.0), 60);
  for (int i = 0; i < 5; ++i) {
    Vec x = states.col(i).head(5);
    x[4] = 0.6 + 0.3 * x[4];
    CotangentState s{x, states.col(i).tail(5)};
    CotangentState lifted = cotangent_lift(p.sym, gs.col(i), s);
    CHECK(std::abs(optimal_hamiltonian(p.sys, p.cost, lifted) -
                   optimal_hamiltonian(p.sys, p.cost, s)) < 1e-8);
    Vec u0 = optimal_control(p.sys, p.cost, s);
    Vec u1 = optimal_control(p.sys, p.cost, lifted);
    CHECK((u1 - p.sym.sigma_at(gs.col(i), p.d()) * u0).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("canonical integration") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);

  SUBCASE("zero costate stays put") {
    Trajectory t = integrate_canonical(p, {p.default_state, Vec::Zero(5)}, 0, 0.05, 1e-2);
    CHECK(t.size() == 6);
    for (const auto& s : t.states)
      CHECK((s.x - p.default_state).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("energy and momentum conservation") {
    CotangentState s0 = snake_state(0, M_PI / 4, vec({0, 0, 1, 0, 0}));
    s0.x[3] = 0;
    Trajectory t = integrate_canonical(p, s0, 0, 0.1, 1e-3);
    double h_drift = 0, j_drift = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      h_drift = std::max(h_drift, std::abs(t.hamiltonian[i] - t.hamiltonian[0]));
      j_drift = std::max(j_drift, (t.momentum[i] - t.momentum[0]).cwiseAbs().maxCoeff());
    }
    CHECK(h_drift <= 1e-10);
    CHECK(j_drift <= 1e-12);
  }

  SUBCASE("fourth-order convergence") {
    // A stiff enough trajectory that truncation dominates the gradient noise
    // floor at these steps.
    CotangentState s0{p.default_state, (3.0 * p.default_costate).eval()};
    const double T = 1.0;
    Vec ref = integrate_canonical(p, s0, 0, T, 1e-5).states.back().x;
    double e1 =
        (integrate_canonical(p, s0, 0, T, 1e-3).states.back().x - ref).norm();
    double e2 =
        (integrate_canonical(p, s0, 0, T, 5e-4).states.back().x - ref).norm();
    CHECK(e1 / e2 > 10.0);
    CHECK(e1 / e2 < 22.0);
  }

  SUBCASE("blow-up reporting") {
    AffineControlSystem bad;
    bad.m = 1;
    bad.d = 1;
    bad.drift = [](const Vec& x) -> Vec { return vec({x[0] * x[0]}); };
    bad.fields = {[](const Vec& x) -> Vec { return vec({x[0] * x[0]}); }};
    bad.metric = [](const Vec&) { return Mat::Identity(1, 1); };
    ProblemDefinition q;
    q.name = "blowup";
    q.sys = bad;
    q.cost = quadratic_cost();
    q.sym.group = make_abelian_group(0);
    q.sym.action.map = [](const Vec&, const Vec& x) { return x; };
    q.sym.action.shape_idx = {0};
    q.sym.action.group_idx = {};
    CHECK_THROWS_AS(integrate_canonical(q, {vec({1.0}), vec({50.0})}, 0, 50.0, 0.5),
                    BlowUpError);
  }
}
