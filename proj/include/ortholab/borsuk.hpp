#pragma once

#include <optional>

#include "ortholab/lp_space.hpp"
#include "ortholab/subspace.hpp"

namespace ortholab {

struct BorsukOptions {
  int restarts = 64;
  double tol = 1e-8;        // required residual max_b |<f_v, b>|
  double target = 1e-13;    // residual the local solver aims for
  int max_iterations = 200;  // per restart
  double dist_tol = 1e-6;   // post-check |dist(v, E) - 1|
};

/// A unit vector of F spanning a line orthogonal to E.
struct OrthoSolution {
  Vector v;
  Vector coefficients;  // v = F.basis() * coefficients
  double residual = 0.0;
  double dist_check = 0.0;  // dist(v, E) from the projection solver
  int restarts_used = 0;
  int iterations = 0;
};

/// Seeded multistart Levenberg-Marquardt on the sphere of F for the
/// equations <f_v, b> = 0 (b in a basis of E). Requires dim E < dim F.
/// Failure (kExistenceSearchFailed, best attempt attached) is a solver
/// failure: a solution always exists.
OrthoSolution find_orthogonal_unit(const LpSpace& space, const Subspace& target,
                                   const Subspace& source, Seed seed,
                                   const BorsukOptions& options = {});

struct DualArgmax {
  Vector e_v;  // unit maximizer of <f_v, e> over e in E
  double m_value = 0.0;
  double stationarity = 0.0;
};

/// argmax of f_v over the unit sphere of E. Throws kDegenerateFunctional when
/// f_v (numerically) vanishes on E. `start` gives optional initial
/// coefficients in the basis of E.
DualArgmax dual_argmax(const LpSpace& space, const Vector& v, const Subspace& target,
                       const std::optional<Vector>& start = std::nullopt);

struct KkmCheck {
  Index trials = 0;
  Index successes = 0;
  double success_rate = 0.0;
  double worst_residual = 0.0;
  double worst_dist_error = 0.0;
};

/// Runs find_orthogonal_unit with seeds derive_seed(seed, i), i < trials.
KkmCheck verify_kkm(const LpSpace& space, const Subspace& target, const Subspace& source,
                    Index trials, Seed seed, const BorsukOptions& options = {},
                    int threads = 0);

}  // namespace ortholab
