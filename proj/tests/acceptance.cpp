// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "ortholab/borsuk.hpp"
#include "ortholab/counterexample.hpp"
#include "ortholab/error.hpp"
#include "ortholab/normal_span.hpp"
#include "ortholab/projection.hpp"
#include "ortholab/random.hpp"

using namespace ortholab;

namespace {

// Frozen from the first certified run; the dense-scan oracle gives the same
// value to 1e-9.
constexpr double kFrozenOmega = 0.97487170;

struct Verdict {
  bool pass = true;
  std::string detail;
};

Verdict fail(std::string why) { return {false, std::move(why)}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict kkm_existence() {
  Index solved = 0;
  double worst_res = 0.0, worst_dist = 0.0;
  for (Seed s = 0; s < 50; ++s) {
    const Index n = 3 + static_cast<Index>(s % 4);
    const Index f_dim = 2 + static_cast<Index>(s % (n - 1));
    const Index e_dim = 1 + static_cast<Index>((s / 4) % (f_dim - 1));
    const auto space = LpSpace::finite(n, 3.0);
    const auto F = random_grassmann(n, f_dim, derive_seed(s, 0));
    const auto E = random_grassmann(n, e_dim, derive_seed(s, 1));
    try {
      const auto sol = find_orthogonal_unit(space, E, F, s);
      // independent re-check through the projection solver
      const double dist = distance(space, sol.v, E);
      const double res = orthogonality_residual(space, sol.v, E);
      worst_res = std::max(worst_res, res);
      worst_dist = std::max(worst_dist, std::abs(dist - 1.0));
      solved += res <= 1e-8 && std::abs(dist - 1.0) <= 1e-6 && contains(F, span_of(sol.v), 1e-9);
    } catch (const Error&) {
    }
  }
  const std::string d = fmt("%ld/50 solved, worst residual %.2e, worst |dist-1| %.2e",
                            static_cast<long>(solved), worst_res, worst_dist);
  return solved == 50 ? Verdict{true, d} : fail(d);
}

Verdict cubic_ellipsoid() {
  const auto l33 = LpSpace::finite(3, 3.0);
  int wrong = 0;
  for (auto axes : {std::vector<Index>{0, 1}, {0, 2}, {1, 2}}) {
    const auto v = classify(l33, Subspace::coordinate(3, axes), 3);
    wrong += !(v.is_bad && v.dim_normal_span == 2);
  }
  for (Seed s = 0; s < 100; ++s) {
    const auto v = classify(l33, random_grassmann(3, 2, s), 3, {.seed = s});
    wrong += !(!v.is_bad && v.dim_normal_span == 3);
  }
  const std::string d = fmt("3 coordinate + 100 random planes, %d misclassified", wrong);
  return wrong == 0 ? Verdict{true, d} : fail(d);
}

Verdict euclidean_degeneration() {
  int wrong = 0;
  for (Index n = 3; n <= 6; ++n) {
    const auto l2 = LpSpace::finite(n, 2.0);
    for (Seed s = 0; s < 100; ++s)
      wrong += normal_span_dim(l2, random_grassmann(n, 2, derive_seed(n, s))).dim_normal_span != 2;
  }
  const std::string d = fmt("400 planes (N = 3..6), %d with dim != 2", wrong);
  return wrong == 0 ? Verdict{true, d} : fail(d);
}

Verdict rare_bad_sections() {
  std::string d;
  bool ok = true;
  for (Index n = 4; n <= 6; ++n) {
    const double f = badness_fraction(3.0, n, 2, 3, 10000, static_cast<Seed>(n));
    d += fmt("N=%ld: %g  ", static_cast<long>(n), f);
    ok = ok && f == 0.0;
  }
  return {ok, d};
}

Verdict desk_counterexample() {
  const auto l33 = LpSpace::finite(3, 3.0);
  Matrix g(3, 2);
  g << 1, 0, 1, 1, 0, 1;
  const auto E = build_E_from_g(span_of(g));
  const auto k2 = certify_no_orthogonal_subspace(l33, E, 2, 0);
  const auto k1 = certify_no_orthogonal_subspace(l33, E, 1, 0);
  const auto scan = oracle::omega_g23(E.basis().col(0), 3.0);
  const auto contrast =
      certify_no_orthogonal_subspace(l33, build_E_from_g(Subspace::coordinate(3, {0, 1})), 2, 0);
  const double gap = gap_distance(contrast.best_K, Subspace::coordinate(3, {0, 1}));
  const bool ok = k2.converged && k2.omega <= 0.99 && std::abs(k2.omega - kFrozenOmega) <= 1e-6 &&
                  std::abs(k2.omega - scan.omega) <= 1e-6 && std::abs(k1.omega - 1.0) <= 1e-6 &&
                  std::abs(contrast.omega - 1.0) <= 1e-6 && gap <= 1e-6;
  return {ok, fmt("k=2 Omega %.10f (converged %d, frozen %.8f, oracle %.10f); k=1 Omega %.12f; "
                  "contrast Omega %.12f, gap to span{e1,e2} %.1e",
                  k2.omega, k2.converged, kFrozenOmega, scan.omega, k1.omega, contrast.omega, gap)};
}

Verdict rank_bound_check() {
  std::string d;
  bool ok = true;
  const double bounds[] = {4.0, 7.0, 10.0};
  int i = 0;
  for (Index n : {3, 5, 7}) {
    try {
      const auto r = rank_lemma_check(n, 4096, 2000, 0, {.rank_tol = 1e-8});
      ok = ok && r.pass && r.bound == bounds[i] && r.d == r.d_doubled;
      d += fmt("n=%ld d=%ld bound %g  ", static_cast<long>(n), static_cast<long>(r.d), r.bound);
    } catch (const Error& e) {
      ok = false;
      d += fmt("n=%ld failed: %s  ", static_cast<long>(n), e.what());
    }
    ++i;
  }
  return {ok, d};
}

Verdict projection_solver() {
  double euclid_err = 0.0, worst_res = 0.0, worst_odd = 0.0;
  int failures = 0;
  for (double p : {2.0, 2.5, 3.0, 5.0}) {
    Rng rng(derive_seed(static_cast<Seed>(10 * p), 7));
    for (int t = 0; t < 1000; ++t) {
      const Index n = 2 + t % 7;
      const Index k = 1 + (t / 7) % (n - 1);
      const auto L = random_grassmann(n, k, derive_seed(static_cast<Seed>(10 * p), t));
      const Vector v = gaussian_vector(rng, n);
      const auto space = LpSpace::finite(n, p);
      try {
        const auto plus = metric_project(space, v, L);
        if (p == 2.0) {
          euclid_err = std::max(euclid_err, (plus.point - L.projector() * v).cwiseAbs().maxCoeff());
        } else {
          const auto minus = metric_project(space, -v, L);
          worst_res = std::max({worst_res, plus.optimality_residual, minus.optimality_residual});
          worst_odd = std::max(worst_odd, (plus.point + minus.point).cwiseAbs().maxCoeff());
        }
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  const bool ok = failures == 0 && euclid_err <= 1e-10 && worst_res <= 1e-8 && worst_odd <= 1e-10;
  return {ok, fmt("p=2 max error %.1e; p in {2.5,3,5}: worst residual %.1e, worst oddness %.1e; "
                  "%d solver failures",
                  euclid_err, worst_res, worst_odd, failures)};
}

Verdict algebraic_agreement() {
  Rng rng(2024);
  int mismatches = 0, bad3 = 0, bad5 = 0;
  for (int t = 0; t < 200; ++t) {
    const Index n = 3 + t % 4;
    GammaParam g3, g5;
    g3.gamma = gaussian_matrix(rng, n - 2, 2);
    g5.gamma = gaussian_matrix(rng, n - 2, 2);
    // every fifth draw is bad: p = 3 with one entry of each row zeroed,
    // p = 5 with all rows proportional
    if (t % 5 == 0) {
      for (Index r = 0; r < g3.gamma.rows(); ++r) g3.gamma(r, r % 2) = 0.0;
      for (Index r = 1; r < g5.gamma.rows(); ++r) g5.gamma.row(r) = (1.0 + r) * g5.gamma.row(0);
    }
    const auto a3 = algebraic_badness_p3(g3);
    const auto a5 = algebraic_badness_p5(g5);
    bad3 += a3.is_bad;
    bad5 += a5.is_bad;
    mismatches += arc_sampled_rank(LpSpace::finite(n, 3.0), g3) != a3.rank;
    mismatches += arc_sampled_rank(LpSpace::finite(n, 5.0), g5) != a5.rank;
  }
  return {mismatches == 0, fmt("400 cases (bad: %d at p=3, %d at p=5), %d mismatches", bad3, bad5,
                               mismatches)};
}

Verdict bookkeeping() {
  int wrong = 0;
  ConstructionOptions no_cert;
  no_cert.certify = false;
  auto check = [&](Index m, Index k, int expected) {
    const auto c = build_counterexample(m, k, 0, no_cert);
    wrong += c.p != expected || c.p != oracle::smallest_odd_above(m - k + 2) ||
             c.E.dim() != c.ambient_dim - m;
  };
  for (Index m = 2; m <= 8; ++m) check(m, m, 3);  // the construction needs k >= 2
  check(3, 2, 5);
  check(5, 2, 7);
  // the rule on the remaining pairs k <= m <= 8
  for (Index m = 1; m <= 8; ++m)
    for (Index k = 1; k <= m; ++k) wrong += counterexample_exponent(m, k) != oracle::smallest_odd_above(m - k + 2);
  return {wrong == 0, fmt("(m,m) 2<=m<=8 -> 3, (3,2) -> 5, (5,2) -> 7, all k<=m<=8 vs oracle: %d wrong", wrong)};
}

Verdict q1() {
  try {
    const auto r = q1_demo(3, 2048, 2000, 0);
    const bool ok = r.d == r.d_doubled && r.min_principal_angle_F_H > 1e-3 && r.separated &&
                    r.duality_residual <= 1e-8;
    return {ok, fmt("d=%ld (doubled %ld), angle(F,H) %.2e, separated %d, duality residual %.1e",
                    static_cast<long>(r.d), static_cast<long>(r.d_doubled), r.min_principal_angle_F_H,
                    r.separated, r.duality_residual)};
  } catch (const SolverFailure<Q1Report>& e) {
    return fail(fmt("%s (angle(F,H) %.2e)", e.what(), e.best().min_principal_angle_F_H));
  }
}

Verdict determinism() {
  const char* commands[] = {
      "project --p 3 --v '1 -2 3 0.5' --L '1 1 0 0; 0 1 -1 2'",
      "distance --p 5 --v '[2,1,-1]' --L-ker '[1,1,1]'",
      "ortho-test --p 3 --K '1 0 0 0; 0 1 0 0' --E '1 1 1 1'",
      "badness --p 3 --N 5 --sweep --trials 60 --seed 4",
      "badness --p 5 --random 4 2 --seed 8",
      "certify --p 3 --N 4 --random-g 2 --k 2 --starts 4 --seed 9",
      "borsuk --p 3 --N 6 --dim-E 3 --dim-F 4 --kkm 10 --seed 2",
      "q1 --n 3 --grid 2048",
      "rank-lemma --n 5 --grid 2048 --samples 1000",
      "bookkeeping --m 2 --k 2 --certify --starts 1",
      "certify --p 3 --N 3 --random-g 1 --k 2 --starts 2 --seed 9",
  };
  int differing = 0, errors = 0;
  std::string which;
  for (const char* c : commands) {
    const auto a = cli::run(std::string(c) + " --threads 1");
    const auto b = cli::run(std::string(c) + " --threads 1");
    const auto d = cli::run(std::string(c) + " --threads 4");
    if (a.exit_code != 0) {
      ++errors;
      which += std::string(" [exit ") + std::to_string(a.exit_code) + "] " + c;
      continue;
    }
    if (a.out.empty() || a.report() != b.report() || a.report() != d.report()) {
      ++differing;
      which += std::string(" [differs] ") + c;
    }
  }
  return {differing == 0 && errors == 0,
          fmt("%d commands x 3 runs (threads 1, 1, 4): %d differ, %d errors", 11, differing, errors) + which};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"KKM/Borsuk existence", kkm_existence},
      {"cubic ellipsoid in R^3", cubic_ellipsoid},
      {"Euclidean degeneration", euclidean_degeneration},
      {"bad sections are rare (10^4 trials)", rare_bad_sections},
      {"desk-scale counterexample in l^3_3", desk_counterexample},
      {"rank lemma", rank_bound_check},
      {"projection solver", projection_solver},
      {"algebraic vs sampled rank", algebraic_agreement},
      {"exponent bookkeeping", bookkeeping},
      {"L^3(0,1) construction", q1},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::printf("criterion %2zu %s: %s -- %s (%.1f s)\n", i + 1, v.pass ? "PASS" : "FAIL",
                criteria[i].name, v.detail.c_str(), s);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
