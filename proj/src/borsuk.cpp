#include "ortholab/borsuk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/parallel.hpp"
#include "detail/power_newton.hpp"
#include "ortholab/error.hpp"
#include "ortholab/projection.hpp"
#include "ortholab/random.hpp"

namespace ortholab {
namespace {

void check_pair(const LpSpace& space, const Subspace& e, const Subspace& f) {
  require(e.ambient_dim() == space.dim() && f.ambient_dim() == space.dim(),
          ErrorCode::kDimensionMismatch, "subspaces do not match the space dimension");
  require(e.dim() < f.dim(), ErrorCode::kPrecondition, "need dim E < dim F");
}

// G(c) = E^T (w psi(F c)) / |F c|_p^(p-1): the pairings <f_v, b> at v = F c.
struct Equations {
  const LpSpace& space;
  Matrix we;  // w-weighted basis of E (N x e)
  const Matrix& f;

  Vector values(const Vector& c, double& scale) const {
    const Vector x = f * c;
    scale = std::pow(norm(space, x), space.p() - 1.0);
    Vector psi(x.size());
    for (Index i = 0; i < x.size(); ++i) psi(i) = signed_pow(x(i), space.p() - 1.0);
    return we.transpose() * psi / scale;
  }

  Matrix jacobian(const Vector& c, double scale) const {
    const Vector x = f * c;
    const double floor = 1e-8 * x.cwiseAbs().maxCoeff();
    Vector h(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      const double a = space.p() < 2.0 ? std::max(std::abs(x(i)), floor) : std::abs(x(i));
      h(i) = (space.p() - 1.0) * (space.p() == 2.0 ? 1.0 : std::pow(a, space.p() - 2.0));
    }
    // The normalization only rescales along c, which the tangent step drops.
    return we.transpose() * h.asDiagonal() * f / scale;
  }
};

struct Attempt {
  Vector c;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

// Levenberg-Marquardt restricted to the tangent space of the Euclidean unit
// sphere in coefficient space, followed by renormalization.
Attempt solve_from(const Equations& eq, Vector c, const BorsukOptions& opt) {
  Attempt out;
  c.normalize();
  double scale = 0.0;
  Vector g = eq.values(c, scale);
  double res = g.cwiseAbs().maxCoeff();
  double lambda = 1e-3;
  const Index nf = c.size();
  int it = 0;
  for (; it < opt.max_iterations && res > opt.target; ++it) {
    Eigen::HouseholderQR<Matrix> qr(c);
    const Matrix tangent = (qr.householderQ() * Matrix::Identity(nf, nf)).rightCols(nf - 1);
    const Matrix j = eq.jacobian(c, scale) * tangent;
    const Matrix jjt = j * j.transpose();
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      const double shift = lambda * std::max(jjt.trace() / std::max<Index>(jjt.rows(), 1), 1e-300);
      Matrix reg = jjt;
      reg.diagonal().array() += shift;
      const Vector s = -j.transpose() * reg.ldlt().solve(g);
      Vector trial = c + tangent * s;
      trial.normalize();
      double trial_scale = 0.0;
      const Vector trial_g = eq.values(trial, trial_scale);
      const double trial_res = trial_g.cwiseAbs().maxCoeff();
      if (std::isfinite(trial_res) && trial_g.norm() < g.norm()) {
        c = trial;
        g = trial_g;
        scale = trial_scale;
        res = trial_res;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) break;
  }
  out.c = c;
  out.residual = res;
  out.iterations = it;
  return out;
}

}  // namespace

OrthoSolution find_orthogonal_unit(const LpSpace& space, const Subspace& target,
                                   const Subspace& source, Seed seed,
                                   const BorsukOptions& options) {
  check_pair(space, target, source);
  require(options.restarts >= 1, ErrorCode::kInvalidArgument, "need at least one restart");
  const Matrix& f = source.basis();
  const Equations eq{space, space.weights().asDiagonal() * target.basis(), f};

  OrthoSolution best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Attempt a = target.is_zero() ? Attempt{Vector::Unit(f.cols(), 0), 0.0, 0}
                                 : solve_from(eq, gaussian_vector(rng, f.cols()), options);
    OrthoSolution cand;
    const Vector x = f * a.c;
    const double nx = norm(space, x);
    cand.v = x / nx;
    cand.coefficients = a.c / nx;
    cand.residual = target.is_zero() ? 0.0 : orthogonality_residual(space, cand.v, target);
    cand.restarts_used = r + 1;
    cand.iterations = a.iterations;
    if (cand.residual <= options.tol) {
      cand.dist_check = target.is_zero() ? 1.0 : distance(space, cand.v, target);
      if (std::abs(cand.dist_check - 1.0) <= options.dist_tol) return cand;
    }
    if (cand.residual < best.residual) best = cand;
  }
  best.restarts_used = options.restarts;
  throw SolverFailure<OrthoSolution>(ErrorCode::kExistenceSearchFailed,
                                     "no orthogonal unit vector found in " +
                                         std::to_string(options.restarts) +
                                         " restarts (solver failure; one exists)",
                                     best);
}

DualArgmax dual_argmax(const LpSpace& space, const Vector& v, const Subspace& target,
                       const std::optional<Vector>& start) {
  require(target.ambient_dim() == space.dim() && v.size() == space.dim(),
          ErrorCode::kDimensionMismatch, "dimensions do not match");
  require(!target.is_zero(), ErrorCode::kPrecondition, "E must be nontrivial");
  const Vector fv = duality_map(space, v);
  const Matrix& b = target.basis();
  const Vector g = b.transpose() * space.weights().cwiseProduct(fv);
  if (g.cwiseAbs().maxCoeff() <= 1e-12) {
    throw Error(ErrorCode::kDegenerateFunctional, "f_v vanishes on E (E lies in Ker f_v)");
  }
  // argmin (1/p)|B y|_p^p - g^T y is a positive multiple of the maximizer.
  const Vector zero = Vector::Zero(space.dim());
  const detail::PowerProblem problem{b, zero, g, space.weights(), space.p()};
  Vector y0 = start ? *start : g;
  require(y0.size() == b.cols(), ErrorCode::kDimensionMismatch, "start has the wrong length");
  if (y0.cwiseAbs().maxCoeff() == 0.0) y0 = g;
  // Scale the start onto the optimal level set, where |B y|^p = g^T y.
  const double ny = norm(space, b * y0), gy = g.dot(y0);
  if (gy > 0.0) y0 *= std::pow(gy / std::pow(ny, space.p()), 1.0 / (space.p() - 1.0));
  detail::PowerSettings settings;
  settings.target = 1e-13;
  const auto sol = detail::minimize_power_objective(problem, y0, settings);

  DualArgmax out;
  const Vector x = b * sol.y;
  const double nx = norm(space, x);
  out.e_v = x / nx;
  out.m_value = pairing(space, fv, out.e_v);
  out.stationarity = sol.stationarity;
  if (!(sol.stationarity <= 1e-9)) {
    throw SolverFailure<DualArgmax>(ErrorCode::kNoConvergence,
                                    "dual argmax did not converge", out);
  }
  return out;
}

KkmCheck verify_kkm(const LpSpace& space, const Subspace& target, const Subspace& source,
                    Index trials, Seed seed, const BorsukOptions& options, int threads) {
  check_pair(space, target, source);
  require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be at least 1");
  std::vector<double> residual(trials), dist_err(trials);
  std::vector<char> ok(trials, 0);
  detail::parallel_for(trials, threads, [&](Index i) {
    const Seed s = derive_seed(seed, static_cast<std::uint64_t>(i));
    try {
      const auto sol = find_orthogonal_unit(space, target, source, s, options);
      residual[i] = sol.residual;
      dist_err[i] = std::abs(sol.dist_check - 1.0);
      ok[i] = 1;
    } catch (const SolverFailure<OrthoSolution>& e) {
      residual[i] = e.best().residual;
      dist_err[i] = std::abs(e.best().dist_check - 1.0);
    }
  });
  KkmCheck out;
  out.trials = trials;
  out.successes = std::count(ok.begin(), ok.end(), 1);
  out.success_rate = static_cast<double>(out.successes) / static_cast<double>(trials);
  out.worst_residual = *std::max_element(residual.begin(), residual.end());
  out.worst_dist_error = *std::max_element(dist_err.begin(), dist_err.end());
  return out;
}

}  // namespace ortholab
