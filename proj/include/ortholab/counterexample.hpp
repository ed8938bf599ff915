#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ortholab/lp_space.hpp"
#include "ortholab/projection.hpp"
#include "ortholab/subspace.hpp"

namespace ortholab {

/// E = {x : <n, x> = 0 for all n in g}.
Subspace build_E_from_g(const Subspace& g);

struct StartTrace {
  Index start_id = 0;
  Seed seed = 0;
  std::string kind;  // "coordinate" or "random"
  double value = 0.0;  // delta(K, E) at the end of this start (final grid)
  int iterations = 0;  // objective evaluations
  bool finished = false;
};

/// Omega(E) = max over k-planes K of delta(K, E).
struct DefectReport {
  double omega = 0.0;
  double epsilon = 1.0;
  Subspace best_K;
  Vector witness;  // unit vector of best_K attaining delta(best_K, E)
  Index starts = 0;
  Seed seed = 0;
  bool converged = false;  // top `agreement_count` starts within agreement_tol of omega
  std::vector<StartTrace> trace;
};

struct CertifyOptions {
  int random_starts = 16;
  bool coordinate_starts = true;  // all coordinate k-planes
  int max_evaluations = 1500;     // per simplex run
  double initial_step = 0.4;
  double restart_step = 0.05;
  double x_tol = 1e-6;
  int search_grid = 90;          // inner angle grid while searching (k = 2)
  int search_directions = 64;    // inner directions while searching (k >= 3)
  double search_refine_tol = 1e-7;
  DefectOptions final_defect{};  // evaluation of each start's result
  double agreement_tol = 1e-4;
  int agreement_count = 5;
  int threads = 0;
};

/// Multistart Nelder-Mead ascent of delta(K, E) over the chart
/// K(Z) = orth(Q1 + Q2 Z) around each start plane. Numerical evidence, not
/// proof. Throws SolverFailure<DefectReport> (kBudgetExhausted) when the start
/// attaining omega ran out of evaluations before its simplex collapsed.
DefectReport certify_no_orthogonal_subspace(const LpSpace& space, const Subspace& target, Index k,
                                            Seed seed, const CertifyOptions& options = {});

/// Smallest odd integer > m - k + 2.
int counterexample_exponent(Index m, Index k);

struct ConstructionOptions {
  Index ambient_dim = 0;  // 0: 2m
  int max_draws = 100;
  double coordinate_gap = 1e-3;
  bool certify = true;
  CertifyOptions certify_options{};
};

struct Counterexample {
  Index m = 0, k = 0;
  int p = 3;
  Index ambient_dim = 0;
  Subspace g, E;
  int draws = 0;
  std::optional<DefectReport> report;
};

/// Random g in G(m, N) away from every coordinate m-plane, E = ker g, and
/// (optionally) the certification for k-dimensional orthogonal subspaces.
Counterexample build_counterexample(Index m, Index k, Seed seed,
                                               const ConstructionOptions& options = {});

struct Q1Options {
  double rank_tol = 1e-8;
  double angle_tol = 1e-3;
  int nodes_per_panel = 8;
  Index max_draws_per_sample = 1000;
  int max_f_draws = 8;
  bool check_saturation = true;
};

struct Q1Report {
  Index n = 0;
  double p = 3.0;
  Index grid_size = 0;
  Index sample_count = 0;
  Seed seed = 0;
  Index polynomial_draws = 0;  // including rejected non-constant-sign draws
  Index d = 0;
  Index d_doubled = 0;  // rank with 2 x sample_count
  double bound = 0.0;
  Index H_dim = 0;
  Subspace F_basis;
  int f_draws = 0;
  double min_principal_angle_F_H = 0.0;
  double min_principal_angle_F_E = 0.0;
  double min_principal_angle_E_H = 0.0;
  double duality_residual = 0.0;  // max_i sup_{h in H, |h| = 1} |<f_i, h>|
  bool separated = false;
  Vector singular_values;  // of span{f_i}, leading d + 2
};

/// Discretized construction in L^3(0,1): E_n = polynomials of degree <= n-1,
/// f_i the duality-map images of sampled unit polynomials, H their common
/// kernel, F a random d-plane meeting H and E_n trivially.
Q1Report q1_demo(Index n, Index grid_size, Index sample_count, Seed seed,
                 const Q1Options& options = {});

struct RankLemmaReport {
  Index n = 0;
  Index d = 0;
  Index d_doubled = 0;
  double bound = 0.0;
  bool pass = false;
};

/// d = dim span{f_i} against the bound n + n/2 - 1/2.
RankLemmaReport rank_lemma_check(Index n, Index grid_size, Index sample_count, Seed seed,
                                 const Q1Options& options = {});

}  // namespace ortholab
