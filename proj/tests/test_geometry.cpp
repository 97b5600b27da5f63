#include <doctest.h>

#include "oracles.hpp"
#include "redopt/geometry.hpp"
#include "redopt/problems.hpp"
#include "redopt/so3.hpp"

using namespace redopt;
using oracles::vec;

TEST_CASE("numeric_jacobian of the identity is the identity") {
  auto id = [](const Vec& x) { return x; };
  Vec at = vec({0.3, -1.2, 7.0});
  CHECK((numeric_jacobian(id, at) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));
}

TEST_CASE("numeric_jacobian matches hand differentiation") {
  auto f = [](const Vec& x) {
    Vec y(2);
    y << x[0] * x[0], x[0] * x[1];
    return y;
  };
  Mat j = numeric_jacobian(f, vec({1, 2}));
  Mat expected(2, 2);
  expected << 2, 0, 2, 1;
  CHECK((j - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("numeric_jacobian of a snakeboard translation is the identity") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);
  Vec g = vec({1.0, -2.0, 0.7});
  auto phi = [&](const Vec& x) { return p.sym.action.map(g, x); };
  Mat j = numeric_jacobian(phi, p.default_state);
  CHECK((j - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("numeric_jacobian rejects non-finite maps") {
  auto f = [](const Vec& x) {
    Vec y(1);
    y << std::sqrt(x[0]);
    return y;
  };
  CHECK_THROWS_AS(numeric_jacobian(f, vec({-1.0})), DifferentiationError);
}

TEST_CASE("infinitesimal generators") {
  auto p = build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2);

  SUBCASE("snakeboard translation direction") {
    Vec gen = infinitesimal_generator(p.sym.group, p.sym.action, vec({1, 0, 0}),
                                      p.default_state);
    Vec expected = vec({1, 0, 0, 0, 0});
    CHECK((gen - expected).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("zero algebra vector") {
    Vec gen = infinitesimal_generator(p.sym.group, p.sym.action, vec({0, 0, 0}),
                                      p.default_state);
    CHECK(gen.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("generator linearity on random pairs") {
    Mat xis = halton_box(6, Vec::Constant(3, -1.0), Vec::Constant(3, 1.0));
    for (int i = 0; i + 1 < xis.cols(); i += 2) {
      Vec a = xis.col(i), b = xis.col(i + 1);
      Vec sum = infinitesimal_generator(p.sym.group, p.sym.action, a + b, p.default_state);
      Vec parts =
          infinitesimal_generator(p.sym.group, p.sym.action, a, p.default_state) +
          infinitesimal_generator(p.sym.group, p.sym.action, b, p.default_state);
      CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("rotation-group generator matches a finite-difference oracle") {
  auto rb = build_rigid_body(1, 2, 3);
  const Vec at = Vec::Zero(3);
  Vec gen = infinitesimal_generator(rb.sym.group, rb.sym.action, vec({0, 0, 1}), at);
  // Independent oracle: difference the multiplication map directly.
  const double h = 1e-6;
  Vec plus = rb.sym.group.multiply(h * vec({0, 0, 1}), at);
  Vec minus = rb.sym.group.multiply(-h * vec({0, 0, 1}), at);
  Vec oracle = (plus - minus) / (2 * h);
  CHECK((gen - oracle).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("generator equivariance under the action") {
  // Components of (Ad_g xi)_M(gx) equal the pushforward of xi_M(x).
  for (const auto& p : {build_rigid_body(1, 2, 3),
                        build_snakeboard(1.0, SnakeboardSymmetry::R2xSO2)}) {
    Mat xs = halton_box(4, p.sample_lo, p.sample_hi);
    Mat gs = halton_box(4, p.group_lo, p.group_hi, 40);
    Mat xis = halton_box(4, Vec::Constant(p.k(), -1.0), Vec::Constant(p.k(), 1.0), 80);
    for (int i = 0; i < 4; ++i) {
      const Vec x = xs.col(i), g = gs.col(i), xi = xis.col(i);
      const Vec gx = p.sym.action.map(g, x);
      const Vec lhs = infinitesimal_generator(p.sym.group, p.sym.action,
                                              adjoint(p.sym.group, g) * xi, gx);
      const Mat tphi =
          numeric_jacobian([&](const Vec& q) { return p.sym.action.map(g, q); }, x);
      const Vec rhs = tphi * infinitesimal_generator(p.sym.group, p.sym.action, xi, x);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("ad_star") {
  LieGroup so3 = make_so3_group();
  LieGroup r3 = make_abelian_group(3);

  SUBCASE("vanishes for translation groups") {
    CHECK(ad_star(r3, vec({1, 2, 3}), vec({-1, 5, 0.5})).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("principal-axis equilibrium") {
    Vec out = ad_star(so3, vec({0, 0, 1.0 / 3.0}), vec({0, 0, 1}));
    CHECK(out.cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("matches the cross product mu x xi") {
    Vec out = ad_star(so3, vec({1, 0.5, 1.0 / 3.0}), vec({1, 1, 1}));
    Vec expected = vec({-1.0 / 6.0, 2.0 / 3.0, -0.5});
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("brute-force contraction and bracket pairing") {
    Mat samples = halton_box(6, Vec::Constant(9, -1.0), Vec::Constant(9, 1.0));
    for (int i = 0; i < samples.cols(); ++i) {
      Vec xi = samples.col(i).segment(0, 3);
      Vec mu = samples.col(i).segment(3, 3);
      Vec eta = samples.col(i).segment(6, 3);
      Vec lhs = ad_star(so3, xi, mu);
      Vec brute = Vec::Zero(3);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) brute[a] += mu[b] * so3.C[b](c, a) * xi[c];
      CHECK((lhs - brute).cwiseAbs().maxCoeff() < 1e-12);
      // <ad*_xi mu, eta> = <mu, [xi, eta]>
      CHECK(lhs.dot(eta) ==
            doctest::Approx(mu.dot(lie_bracket(so3, xi, eta))).epsilon(1e-12));
    }
  }
}

TEST_CASE("adjoint operator") {
  LieGroup so3 = make_so3_group();
  LieGroup r3 = make_abelian_group(3);

  CHECK((adjoint(so3, Vec::Zero(3)) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((adjoint(r3, vec({4, -1, 2})) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        0.0);

  SUBCASE("quarter turn about the third axis") {
    Vec g = vec({0, 0, M_PI / 2});
    Mat ad = adjoint(so3, g);
    Mat expected(3, 3);
    expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    CHECK((ad - expected).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("matches conjugation oracle at random elements") {
    Mat gs = halton_box(5, Vec::Constant(3, -1.0), Vec::Constant(3, 1.0));
    for (int i = 0; i < gs.cols(); ++i) {
      Mat ad = adjoint(so3, gs.col(i));
      Mat oracle = oracles::so3_adjoint_by_conjugation(gs.col(i));
      CHECK((ad - oracle).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("group validation") {
  CHECK_NOTHROW(validate_group(make_so3_group()));
  CHECK_NOTHROW(validate_group(make_abelian_group(4)));

  LieGroup bad = make_so3_group();
  bad.C[0](1, 2) += 0.5;  // breaks antisymmetry
  CHECK_THROWS_AS(validate_group(bad), Error);
}

TEST_CASE("rotation chart round trips and domain guard") {
  Mat thetas = halton_box(6, Vec::Constant(3, -1.2), Vec::Constant(3, 1.2));
  for (int i = 0; i < thetas.cols(); ++i) {
    Eigen::Vector3d th = thetas.col(i);
    CHECK((so3_log(so3_exp(th)) - th).cwiseAbs().maxCoeff() < 1e-12);
  }
  LieGroup so3 = make_so3_group();
  CHECK_THROWS_AS(so3.exp(vec({3.1, 0, 0})), ChartDomainError);
}

TEST_CASE("orthonormalize and subspace distance") {
  Mat v(3, 3);
  v << 1, 2, 1, 0, 0, 1, 0, 0, 0;  // second column dependent on the first
  Mat q = orthonormalize(v);
  CHECK(q.cols() == 2);
  CHECK((q.transpose() * q - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  Mat a(3, 1), b(3, 1);
  a << 1, 0, 0;
  b << 0, 1, 0;
  CHECK(subspace_distance(a, a) == doctest::Approx(0.0));
  CHECK(subspace_distance(a, b) == doctest::Approx(1.0));
  CHECK(subspace_distance(Mat(3, 0), Mat(3, 0)) == 0.0);
}
