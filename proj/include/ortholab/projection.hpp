#pragma once

#include <optional>
#include <vector>

#include "ortholab/lp_space.hpp"
#include "ortholab/subspace.hpp"

namespace ortholab {

struct SolverOptions {
  /// Required optimality residual, max_b |<f_{v - Pv}, b>| over basis vectors b.
  double opt_tol = 1e-8;
  /// Residual the Newton iteration aims for before stopping.
  double inner_target = 1e-12;
  int max_iterations = 300;
  double hessian_floor = 1e-8;
  bool record_trace = false;
};

/// Nearest point to v in a subspace L under the l^p norm.
struct ProjectionResult {
  Vector coefficients;  // in the orthonormal basis of L
  Vector point;
  double distance = 0.0;
  double optimality_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // per accepted step (unit-scaled problem)
};

/// Minimizes ||v - B c||_p over c. `start` optionally gives initial
/// coefficients (default: Euclidean projection). Throws
/// SolverFailure<ProjectionResult> (kNoConvergence) carrying the best iterate.
ProjectionResult metric_project(const LpSpace& space, const Vector& v, const Subspace& section,
                                const SolverOptions& options = {},
                                const std::optional<Vector>& start = std::nullopt);

double distance(const LpSpace& space, const Vector& v, const Subspace& section,
                const SolverOptions& options = {});

/// max_b |<f_v, b>| over the orthonormal basis of E.
double orthogonality_residual(const LpSpace& space, const Vector& v, const Subspace& target);

/// True iff f_v annihilates E up to tol, i.e. span{v} is orthogonal to E.
bool is_orthogonal_vector(const LpSpace& space, const Vector& v, const Subspace& target,
                          double tol = 1e-9);

struct DefectOptions {
  int angle_grid = 720;        // dim K = 2
  double refine_tol = 1e-10;   // dim K = 2: golden-section bracket width (radians)
  int random_directions = 512;  // dim K >= 3
  int refine_starts = 4;       // dim K >= 3: best directions refined by coordinate descent
  Seed seed = 0;
  SolverOptions solver{};
  double slack = 1e-9;  // numerical allowance in the eps-orthogonality comparison
};

struct DefectResult {
  double delta = 1.0;  // min over unit v in K of dist(v, E)
  Vector witness;      // unit vector of K attaining delta
  Vector witness_params;
  int evaluations = 0;
};

/// Orthogonality defect of K with respect to E; K is orthogonal to E iff
/// delta = 1. Throws SolverFailure<DefectResult> (kNoConvergence) when an
/// inner projection fails.
DefectResult subspace_ortho_defect(const LpSpace& space, const Subspace& source,
                                   const Subspace& target, const DefectOptions& options = {});

/// delta(K, E) >= 1 - eps.
bool is_eps_orthogonal(const LpSpace& space, const Subspace& source, const Subspace& target,
                       double eps, const DefectOptions& options = {});

}  // namespace ortholab
