#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ortholab/lp_space.hpp"
#include "ortholab/subspace.hpp"

namespace ortholab {

struct NormalSpanOptions {
  Index samples = 0;       // 0: 64 k^2
  double rank_tol = 1e-8;  // relative to the largest singular value
  bool check_stability = true;
  Seed seed = 0;  // sphere directions for dim L >= 3 (dim L = 2 uses an angle grid)
};

struct BadnessVerdict {
  Index dim_normal_span = 0;
  Index threshold = 0;
  bool is_bad = false;
  Index sampled_rank = 0;
  std::optional<Index> algebraic_rank;  // chart + sign-constant arc (p = 3, 5, dim L = 2)
  std::optional<Index> arc_rank;        // sampled rank on that arc
  Vector singular_values;               // of the stacked full-sphere normals, columns unit-scaled
};

/// Rank of the duality-map images of points of L n S. Throws Error(kUnstable)
/// when doubling the sample count changes the rank. threshold/is_bad are left
/// for classify().
BadnessVerdict normal_span_dim(const LpSpace& space, const Subspace& section,
                               const NormalSpanOptions& options = {});

/// Orthonormal basis of N(S, L) (leading right singular vectors).
Subspace normal_span_basis(const LpSpace& space, const Subspace& section,
                           const NormalSpanOptions& options = {});

struct AlgebraicBadness {
  Index rank = 0;
  bool is_bad = false;
  bool colinearity_check = false;  // p = 5 only: v31, v22, v13 pairwise colinear
  Matrix coefficients;
};

/// p = 3 test in the chart (x_1, x_2): rows (1,0,0), (0,0,1) and
/// (g1^2, 2 g1 g2, g2^2) per dependent coordinate. Bad iff rank <= 2.
AlgebraicBadness algebraic_badness_p3(const GammaParam& gamma, double rel_tol = 1e-10);

/// p = 5 analogue with the quartic coefficients; bad iff rank <= 3.
AlgebraicBadness algebraic_badness_p5(const GammaParam& gamma, double rel_tol = 1e-10);

/// Longest angle interval [a, b] of [0, pi) on which no coordinate of
/// x(t) = cos t b_1 + sin t b_2 changes sign, for the chart basis of gamma.
std::pair<double, double> sign_constant_arc(const GammaParam& gamma);

/// Rank of sampled normals restricted to the sign-constant arc.
Index arc_sampled_rank(const LpSpace& space, const GammaParam& gamma,
                       const NormalSpanOptions& options = {});

/// Orthonormal basis of the span of the arc normals.
Subspace arc_normal_span_basis(const LpSpace& space, const GammaParam& gamma,
                               const NormalSpanOptions& options = {});

/// k + 1, except 4 for (p = 5, k = 2).
Index default_threshold(double p, Index k);

/// Verdict from the full-sphere sampled rank; the algebraic and arc ranks are
/// attached when p is 3 or 5, dim L = 2 and a chart exists.
BadnessVerdict classify(const LpSpace& space, const Subspace& section, Index threshold,
                        const NormalSpanOptions& options = {});

using SectionSampler = std::function<Subspace(Index trial, Seed trial_seed)>;

struct BadnessOptions {
  NormalSpanOptions span{};
  int threads = 0;  // 0: hardware concurrency
};

/// Fraction of random k-planes in l^p_N classified bad. Trial i uses the seed
/// derive_seed(seed, i), so the value does not depend on the thread count.
double badness_fraction(double p, Index ambient_dim, Index k, Index threshold, Index trials,
                        Seed seed, const BadnessOptions& options = {});

/// Per-trial verdicts behind badness_fraction (random k-planes of l^p_N).
std::vector<BadnessVerdict> classify_random_sections(double p, Index ambient_dim, Index k,
                                                     Index threshold, Index trials, Seed seed,
                                                     const BadnessOptions& options = {});

/// Same, with a caller-supplied section generator.
double badness_fraction(const LpSpace& space, const SectionSampler& sampler, Index threshold,
                        Index trials, Seed seed, const BadnessOptions& options = {});

}  // namespace ortholab
