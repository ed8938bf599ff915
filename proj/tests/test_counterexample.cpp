#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ortholab/counterexample.hpp"
#include "ortholab/error.hpp"
#include "ortholab/random.hpp"

using namespace ortholab;

namespace {

const LpSpace l33 = LpSpace::finite(3, 3.0);

Subspace skew_g() {
  Matrix g(3, 2);
  g << 1, 0, 1, 1, 0, 1;
  return span_of(g);
}

}  // namespace

TEST_CASE("E from g") {
  const auto e = build_E_from_g(Subspace::coordinate(4, {0, 1}));
  CHECK(gap_distance(e, Subspace::coordinate(4, {2, 3})) <= 1e-12);

  // Null space of [[1,1,0],[0,1,1]] by back substitution: x3 = t, x2 = -t, x1 = t.
  const auto line = build_E_from_g(skew_g());
  CHECK(gap_distance(line, span_of(Vector{{1.0, -1.0, 1.0}})) <= 1e-12);

  for (Seed s = 0; s < 10; ++s) {
    const Index n = 3 + static_cast<Index>(s % 4), m = 1 + static_cast<Index>(s % (n - 1));
    CHECK(build_E_from_g(random_grassmann(n, m, s)).dim() + m == n);
  }
}

TEST_CASE("certification on l^3_3") {
  const auto e = build_E_from_g(skew_g());
  const auto k2 = certify_no_orthogonal_subspace(l33, e, 2, 0);
  const auto scan = oracle::omega_g23(e.basis().col(0), 3.0);
  MESSAGE("Omega = " << k2.omega << ", dense scan " << scan.omega);
  CHECK(k2.converged);
  CHECK(k2.omega <= 0.99);
  CHECK(std::abs(k2.omega - scan.omega) <= 1e-6);
  CHECK(k2.epsilon == doctest::Approx(1.0 - k2.omega));
  CHECK(k2.starts == 3 + 16);
  CHECK(k2.trace.size() == 19);

  // Omega is reproduced by re-evaluating delta(best_K, E) from scratch.
  CHECK(std::abs(subspace_ortho_defect(l33, k2.best_K, e).delta - k2.omega) <= 1e-6);

  // KKM: some line is orthogonal to E.
  const auto k1 = certify_no_orthogonal_subspace(l33, e, 1, 0);
  CHECK(std::abs(k1.omega - 1.0) <= 1e-6);

  // Coordinate g: the plane span{e1, e2} is orthogonal to E = span{e3}.
  const auto contrast = certify_no_orthogonal_subspace(l33, build_E_from_g(Subspace::coordinate(3, {0, 1})), 2, 0);
  CHECK(contrast.omega == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gap_distance(contrast.best_K, Subspace::coordinate(3, {0, 1})) <= 1e-12);
}

TEST_CASE("certification: more starts never lower Omega") {
  const auto e = random_grassmann(3, 1, 8);
  double previous = 0.0;
  for (int starts : {0, 2, 5}) {
    CertifyOptions opt;
    opt.random_starts = starts;
    opt.search_grid = 45;
    DefectReport r;
    try {
      r = certify_no_orthogonal_subspace(l33, e, 2, 3, opt);
    } catch (const SolverFailure<DefectReport>& f) {
      r = f.best();
    }
    CHECK(r.omega >= previous);
    previous = r.omega;
  }
}

TEST_CASE("certification: k = 1 finds an orthogonal line") {
  for (Seed s = 0; s < 4; ++s) {
    const Index n = 3 + static_cast<Index>(s % 2);
    const auto space = LpSpace::finite(n, s % 2 ? 3.0 : 5.0);
    CertifyOptions opt;
    opt.random_starts = 2;
    opt.coordinate_starts = false;
    opt.agreement_count = 1;
    const auto r = certify_no_orthogonal_subspace(space, random_grassmann(n, n - 1, s), 1, s, opt);
    CHECK(std::abs(r.omega - 1.0) <= 1e-6);
  }
}

TEST_CASE("certification: threads do not change the report") {
  CertifyOptions a;
  a.random_starts = 4;
  a.threads = 1;
  CertifyOptions b = a;
  b.threads = 3;
  const auto e = build_E_from_g(skew_g());
  const auto r1 = certify_no_orthogonal_subspace(l33, e, 2, 11, a);
  const auto r2 = certify_no_orthogonal_subspace(l33, e, 2, 11, b);
  CHECK(r1.omega == r2.omega);
  REQUIRE(r1.trace.size() == r2.trace.size());
  for (std::size_t i = 0; i < r1.trace.size(); ++i) CHECK(r1.trace[i].value == r2.trace[i].value);
}

TEST_CASE("certification preconditions") {
  CHECK_THROWS_AS(certify_no_orthogonal_subspace(l33, Subspace::coordinate(3, {2}), 3, 0), Error);
  CHECK_THROWS_AS(certify_no_orthogonal_subspace(l33, Subspace::coordinate(4, {2}), 2, 0), Error);
}

TEST_CASE("exponent bookkeeping") {
  for (Index m = 2; m <= 8; ++m)
    for (Index k = 2; k <= m; ++k) CHECK(counterexample_exponent(m, k) == oracle::smallest_odd_above(m - k + 2));
  CHECK(counterexample_exponent(3, 2) == 5);
  CHECK(counterexample_exponent(5, 2) == 7);
  CHECK(counterexample_exponent(4, 4) == 3);
}

TEST_CASE("counterexample construction") {
  ConstructionOptions opt;
  opt.certify = false;
  const auto c = build_counterexample(3, 2, 1, opt);
  CHECK(c.p == 5);
  CHECK(c.ambient_dim == 6);
  CHECK(c.g.dim() == 3);
  CHECK(c.E.dim() == 3);
  CHECK(contains(Subspace(c.g.complement().basis()), c.E, 1e-10));

  // Rejection: a tolerance no draw can satisfy exhausts the budget.
  opt.coordinate_gap = 1.1;
  opt.max_draws = 3;
  try {
    build_counterexample(3, 2, 1, opt);
    FAIL("expected RejectionBudgetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRejectionBudgetExhausted);
  }
  CHECK_THROWS_AS(build_counterexample(2, 1, 0, {}), Error);

  ConstructionOptions small;
  small.certify_options.random_starts = 1;
  small.certify_options.search_grid = 45;
  small.certify_options.agreement_count = 1;
  const auto m2 = build_counterexample(2, 2, 5, small);
  REQUIRE(m2.report.has_value());
  MESSAGE("m = k = 2 in l^3_4: Omega = " << m2.report->omega);
  CHECK(m2.report->omega <= 1.0);
}

TEST_CASE("q1 construction") {
  const auto one = q1_demo(1, 1024, 50, 0);
  CHECK(one.d == 1);
  CHECK(one.bound == 1.0);

  const auto q = q1_demo(3, 2048, 400, 0);
  // Constant-sign P_i: f_i = +-P_i^2 spans the polynomials of degree <= 2n - 2.
  CHECK(q.d == 5);
  CHECK(q.d >= q.bound);
  CHECK(q.H_dim == 2048 - 5);
  CHECK(q.duality_residual <= 1e-8);
  CHECK(q.min_principal_angle_E_H > 1e-3);
  CHECK(q.min_principal_angle_F_E > 0.0);
  CHECK(q.min_principal_angle_F_H > 0.0);
  CHECK(q.separated == (q.min_principal_angle_F_H > 1e-3));
  CHECK(q.F_basis.dim() == q.d);

  CHECK_THROWS_AS(q1_demo(2, 2048, 10, 0), Error);
  CHECK_THROWS_AS(q1_demo(3, 512, 10, 0), Error);
}

TEST_CASE("rank lemma") {
  for (Index n : {1, 3, 5}) {
    const auto r = rank_lemma_check(n, 1024, 300, 2);
    CHECK(r.d == 2 * n - 1);
    CHECK(r.pass);
    CHECK(r.bound == doctest::Approx(n + n / 2.0 - 0.5));
  }
  // Too few samples cannot saturate: 3 samples against a rank-5 span.
  try {
    rank_lemma_check(3, 1024, 3, 0);
    FAIL("expected RankNotSaturated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRankNotSaturated);
  }
}
