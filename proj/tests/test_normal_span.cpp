#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ortholab/error.hpp"
#include "ortholab/normal_span.hpp"
#include "ortholab/random.hpp"

using namespace ortholab;

namespace {

// Gaussian elimination with partial pivoting; independent of the SVD path.
Index row_reduce_rank(Matrix m, double tol = 1e-9) {
  Index rank = 0;
  for (Index c = 0; c < m.cols() && rank < m.rows(); ++c) {
    Index piv = rank;
    for (Index r = rank; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (std::abs(m(piv, c)) <= tol) continue;
    m.row(piv).swap(m.row(rank));
    for (Index r = rank + 1; r < m.rows(); ++r) m.row(r) -= m(r, c) / m(rank, c) * m.row(rank);
    ++rank;
  }
  return rank;
}

GammaParam gamma_of(std::initializer_list<std::array<double, 2>> rows) {
  GammaParam g;
  g.gamma.resize(static_cast<Index>(rows.size()), 2);
  Index r = 0;
  for (const auto& row : rows) g.gamma.row(r++) << row[0], row[1];
  return g;
}

}  // namespace

TEST_CASE("normal span dimension examples") {
  for (Seed s = 0; s < 10; ++s)
    CHECK(normal_span_dim(LpSpace::finite(5, 2.0), random_grassmann(5, 2, s)).dim_normal_span == 2);

  const auto l33 = LpSpace::finite(3, 3.0);
  CHECK(normal_span_dim(l33, Subspace::coordinate(3, {0, 1})).dim_normal_span == 2);

  // Oracle: 200 points of L n S, normals sgn(x)|x|^2 by hand, Jacobi SVD.
  Matrix b(3, 2);
  b << 1, 0, 0, 1, 1, 1;
  const auto plane = span_of(b);
  Matrix rows(200, 3);
  for (int j = 0; j < 200; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 200.0;
    const Eigen::Vector3d x = b.col(0) * std::cos(t) + b.col(1) * std::sin(t);
    for (int i = 0; i < 3; ++i) rows(j, i) = x(i) * std::abs(x(i));
  }
  Eigen::JacobiSVD<Matrix> svd(rows);
  const auto& sv = svd.singularValues();
  Index oracle = 0;
  for (Index i = 0; i < sv.size(); ++i) oracle += sv(i) > 1e-8 * sv(0);
  CHECK(oracle == 3);
  CHECK(normal_span_dim(l33, plane).dim_normal_span == oracle);

  CHECK_THROWS_AS(normal_span_dim(l33, Subspace::zero(3)), Error);
}

TEST_CASE("normal span bounds: dim L <= dim N(S, L) <= N") {
  for (Seed s = 0; s < 40; ++s) {
    const Index n = 3 + static_cast<Index>(s % 4);
    const Index k = 1 + static_cast<Index>(s % 3);
    const double p = (s % 2) ? 3.0 : 2.5;
    const auto l = random_grassmann(n, std::min(k, n), s);
    const Index d = normal_span_dim(LpSpace::finite(n, p), l, {.seed = s}).dim_normal_span;
    CHECK(d >= l.dim());
    CHECK(d <= n);
  }
}

TEST_CASE("doubling the samples flags an unsaturated rank") {
  try {
    normal_span_dim(LpSpace::finite(3, 3.0), random_grassmann(3, 2, 1), {.samples = 1});
    FAIL("expected Unstable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnstable);
  }
}

TEST_CASE("algebraic test, p = 3") {
  const auto bad = algebraic_badness_p3(gamma_of({{1, 0}, {0, 1}}));
  CHECK(bad.rank == 2);
  CHECK(bad.is_bad);

  Matrix m(4, 3);
  m << 1, 0, 0, 0, 0, 1, 1, 2, 1, 1, -2, 1;
  CHECK(row_reduce_rank(m) == 3);
  const auto good = algebraic_badness_p3(gamma_of({{1, 1}, {1, -1}}));
  CHECK(good.rank == 3);
  CHECK_FALSE(good.is_bad);

  GammaParam zero;
  zero.gamma = Matrix::Zero(1, 2);
  CHECK(algebraic_badness_p3(zero).rank == 2);
  CHECK(algebraic_badness_p3(zero).is_bad);
}

TEST_CASE("algebraic test, p = 5") {
  const auto a = algebraic_badness_p5(gamma_of({{1, 0}, {0, 1}}));
  CHECK(a.rank == 2);
  CHECK(a.is_bad);
  CHECK(a.colinearity_check);

  Matrix m(4, 5);
  m << 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 4, 6, 4, 1, 0, 0, 0, 0, 1;
  CHECK(row_reduce_rank(m) == 3);
  const auto b = algebraic_badness_p5(gamma_of({{1, 1}, {0, 1}}));
  CHECK(b.rank == 3);
  CHECK(b.is_bad);
  CHECK(b.colinearity_check);

  m.row(3) << 1, 8, 24, 32, 16;
  CHECK(row_reduce_rank(m) == 4);
  const auto c = algebraic_badness_p5(gamma_of({{1, 1}, {1, 2}}));
  CHECK(c.rank == 4);
  CHECK_FALSE(c.is_bad);
  CHECK_FALSE(c.colinearity_check);

  // Colinearity of v31, v22, v13 agrees with the rank verdict on generic input.
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    GammaParam g;
    g.gamma = gaussian_matrix(rng, 1 + t % 4, 2);
    const auto r = algebraic_badness_p5(g);
    CHECK(r.colinearity_check == r.is_bad);
    CHECK(r.rank == row_reduce_rank(r.coefficients));
  }
}

TEST_CASE("sign-constant arc sampling reproduces the algebraic rank") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const Index n = 3 + t % 4;
    GammaParam g;
    g.gamma = gaussian_matrix(rng, n - 2, 2);
    // Every fifth draw: a bad section (one of each gamma row's entries zeroed).
    if (t % 5 == 0)
      for (Index r = 0; r < g.gamma.rows(); ++r) g.gamma(r, r % 2) = 0.0;
    for (double p : {3.0, 5.0}) {
      const auto alg = p == 3.0 ? algebraic_badness_p3(g) : algebraic_badness_p5(g);
      CHECK(arc_sampled_rank(LpSpace::finite(n, p), g) == alg.rank);
    }
  }
  const auto [a, b] = sign_constant_arc(gamma_of({{1, -1}}));
  // x_3 = cos t - sin t vanishes at pi/4: cuts 0, pi/4, pi/2, pi.
  CHECK(a == doctest::Approx(std::numbers::pi / 2));
  CHECK(b == doctest::Approx(std::numbers::pi));
}

TEST_CASE("arc rank resolves coordinates that are small on L") {
  // x_3 = 0.024 x_1 - 0.005 x_2: its quartic column is ~1e-7 of the others.
  GammaParam g;
  g.gamma = Matrix{{0.0244558, -0.00520724}, {0.472624, 0.0563152}, {0.728935, 0.353661}};
  const auto alg = algebraic_badness_p5(g);
  CHECK(alg.rank == 5);
  CHECK(arc_sampled_rank(LpSpace::finite(5, 5.0), g) == 5);
  CHECK(arc_normal_span_basis(LpSpace::finite(5, 5.0), g).dim() == 5);
  // while a coordinate that vanishes identically adds nothing
  GammaParam z;
  z.gamma = Matrix{{0.0, 0.0}, {1.0, 2.0}};
  CHECK(arc_sampled_rank(LpSpace::finite(4, 3.0), z) == algebraic_badness_p3(z).rank);
}

TEST_CASE("classify") {
  const auto l33 = LpSpace::finite(3, 3.0);
  for (auto axes : {std::vector<Index>{0, 1}, {0, 2}, {1, 2}}) {
    const auto v = classify(l33, Subspace::coordinate(3, axes), 3);
    CHECK(v.is_bad);
    CHECK(v.dim_normal_span == 2);
    REQUIRE(v.algebraic_rank.has_value());
    CHECK(*v.algebraic_rank == 2);
  }
  for (Seed s = 0; s < 20; ++s) {
    const auto v = classify(LpSpace::finite(5, 3.0), random_grassmann(5, 2, s), 3);
    CHECK_FALSE(v.is_bad);
    CHECK(v.sampled_rank == v.dim_normal_span);
    REQUIRE(v.arc_rank.has_value());
    CHECK(*v.arc_rank == *v.algebraic_rank);
  }
  for (Seed s = 0; s < 20; ++s) {
    const Index n = 3 + static_cast<Index>(s % 4), k = 1 + static_cast<Index>(s % 3);
    const auto v = classify(LpSpace::finite(n, 2.0), random_grassmann(n, k, s), k + 1);
    CHECK(v.dim_normal_span == k);
    CHECK(v.is_bad);
  }
  CHECK_THROWS_AS(classify(LpSpace::finite(3, 4.0), Subspace::coordinate(3, {0, 1}), 3), Error);
  CHECK(default_threshold(3.0, 2) == 3);
  CHECK(default_threshold(5.0, 2) == 4);
  CHECK(default_threshold(3.0, 3) == 4);
}

TEST_CASE("badness fraction") {
  CHECK(badness_fraction(2.0, 4, 2, 3, 50, 1) == 1.0);
  CHECK(badness_fraction(3.0, 5, 2, 3, 2000, 2) == 0.0);

  const auto l33 = LpSpace::finite(3, 3.0);
  const std::vector<std::vector<Index>> planes{{0, 1}, {0, 2}, {1, 2}};
  const auto coordinate_planes = [&](Index trial, Seed) {
    return Subspace::coordinate(3, planes[static_cast<std::size_t>(trial % 3)]);
  };
  CHECK(badness_fraction(l33, coordinate_planes, 3, 30, 0) == 1.0);

  // Mixed population: result must not depend on the worker count.
  const auto mixed = [&](Index trial, Seed s) {
    return trial % 4 == 0 ? Subspace::coordinate(3, planes[0]) : random_grassmann(3, 2, s);
  };
  const double one = badness_fraction(l33, mixed, 3, 101, 9, {.threads = 1});
  const double four = badness_fraction(l33, mixed, 3, 101, 9, {.threads = 4});
  CHECK(one == four);
  CHECK(one == doctest::Approx(26.0 / 101.0));
}

TEST_CASE("normal span varies Lipschitz-continuously with the section") {
  // On the sign-constant arc N(S, L) is a proper subspace (dim 3 in R^6 for
  // p = 3), so its gap to a nearby section's span is informative.
  double worst = 0.0;
  const auto space = LpSpace::finite(6, 3.0);
  for (Seed s = 0; s < 20; ++s) {
    Rng rng(100 + s);
    GammaParam g1;
    g1.gamma = gaussian_matrix(rng, 4, 2);
    GammaParam g2 = g1;
    g2.gamma += 1e-4 * gaussian_matrix(rng, 4, 2);
    const double delta = gap_distance(gamma_to_subspace(g1), gamma_to_subspace(g2));
    REQUIRE(delta <= 1e-3);
    const auto n1 = arc_normal_span_basis(space, g1), n2 = arc_normal_span_basis(space, g2);
    REQUIRE(n1.dim() == 3);
    REQUIRE(n2.dim() == 3);
    worst = std::max(worst, gap_distance(n1, n2) / delta);
  }
  MESSAGE("empirical Lipschitz constant C = " << worst);
  CHECK(worst > 0.0);
  CHECK(worst < 100.0);
}
