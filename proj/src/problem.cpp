#include "redopt/problem.hpp"

#include <array>

namespace redopt {

std::vector<std::array<Vec, 3>> symmetry_samples(const ProblemDefinition& p, int n) {
  Mat xs = halton_box(n, p.sample_lo, p.sample_hi);
  Vec ulo = Vec::Constant(p.d(), -p.control_scale);
  Vec uhi = Vec::Constant(p.d(), p.control_scale);
  Mat us = halton_box(n, ulo, uhi, 1000);
  Mat gs = halton_box(n, p.group_lo, p.group_hi, 2000);
  std::vector<std::array<Vec, 3>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back({xs.col(i), us.col(i), gs.col(i)});
  return out;
}

SymmetryReport verify_problem_symmetry(const ProblemDefinition& p, int n) {
  return verify_symmetry(p.sys, p.sym, p.cost, symmetry_samples(p, n));
}

void validate_problem(const ProblemDefinition& p, int samples, double tol) {
  require(p.s() + p.k() == p.m(), "problem: shape + group dimensions must equal m");
  validate_group(p.sym.group);

  const auto triples = symmetry_samples(p, samples);
  const Vec e = p.sym.group.identity;
  for (size_t i = 0; i < triples.size(); ++i) {
    const auto& [x, u, g] = triples[i];
    if ((p.sym.action.map(e, x) - x).cwiseAbs().maxCoeff() > 1e-12)
      throw Error("action: identity does not fix points");

    // Composition against the next sample's group element.
    const Vec h = triples[(i + 1) % triples.size()][2];
    const Vec lhs = p.sym.action.map(g, p.sym.action.map(h, x));
    const Vec rhs = p.sym.action.map(p.sym.group.multiply(g, h), x);
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10)
      throw Error("action: composition law violated");

    Mat gen = generator_matrix(p.sym.group, p.sym.action, x);
    // The trivialization requires shape coordinates to be action-invariant.
    for (int a = 0; a < p.s(); ++a)
      if (gen.row(p.sym.action.shape_idx[a]).cwiseAbs().maxCoeff() > 1e-9)
        throw Error("action: generators have shape components");
    if (orthonormalize(gen).cols() < p.k())
      throw Error("action: not free on samples (generator rank deficient)");

    if (orthonormalize(p.sys.field_matrix(x)).cols() < p.d())
      throw Error("control fields dependent at a sample point");
    Eigen::LLT<Mat> llt(p.sys.metric(x));
    if (llt.info() != Eigen::Success) throw Error("cost metric not positive definite");

    if (p.sym.sigma) {
      const Mat sg = (*p.sym.sigma)(g);
      const Mat sh = (*p.sym.sigma)(h);
      const Mat sgh = (*p.sym.sigma)(p.sym.group.multiply(g, h));
      if ((sgh - sg * sh).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("control representation is not a homomorphism");
      if (std::abs(sg.determinant()) < 1e-12)
        throw Error("control representation not invertible");
    }
  }

  SymmetryReport rep = verify_symmetry(p.sys, p.sym, p.cost, triples);
  if (!rep.passed(tol))
    throw NotInvariantError("problem fails symmetry verification at tolerance");
}

}  // namespace redopt
