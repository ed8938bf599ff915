#include "ortholab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "detail/power_newton.hpp"
#include "ortholab/error.hpp"
#include "ortholab/random.hpp"

namespace ortholab {

namespace {

void check_pair(const LpSpace& space, const Vector& v, const Subspace& section) {
  require(v.size() == space.dim(), ErrorCode::kDimensionMismatch,
          "vector length does not match the space dimension");
  require(section.ambient_dim() == space.dim(), ErrorCode::kDimensionMismatch,
          "subspace ambient dimension does not match the space");
  require(v.allFinite(), ErrorCode::kInvalidArgument, "vector has non-finite entries");
}

// Distance from a unit vector, warm-started; updates `coeffs` in place.
double unit_distance(const LpSpace& space, const Vector& v, const Subspace& target,
                     const SolverOptions& opts, Vector& coeffs, bool& ok) {
  if (target.is_zero()) return norm(space, v);
  try {
    const ProjectionResult pr = metric_project(space, v, target, opts, coeffs);
    coeffs = pr.coefficients;
    return pr.distance;
  } catch (const SolverFailure<ProjectionResult>& failure) {
    ok = false;
    coeffs = failure.best().coefficients;
    return failure.best().distance;
  }
}

}  // namespace

ProjectionResult metric_project(const LpSpace& space, const Vector& v, const Subspace& section,
                                const SolverOptions& options, const std::optional<Vector>& start) {
  check_pair(space, v, section);
  ProjectionResult out;
  const Index k = section.dim();
  const double scale = norm(space, v);
  if (k == 0 || scale == 0.0) {
    out.coefficients = Vector::Zero(k);
    out.point = Vector::Zero(v.size());
    out.distance = scale;
    out.converged = true;
    return out;
  }

  const Vector unit = v / scale;
  Vector y0 = section.basis().transpose() * unit;
  if (start) {
    require(start->size() == k, ErrorCode::kDimensionMismatch, "start has wrong length");
    y0 = *start / scale;
  }
  detail::PowerSettings settings;
  settings.target = std::min(options.inner_target, options.opt_tol);
  settings.max_iterations = options.max_iterations;
  settings.hessian_floor = options.hessian_floor;
  settings.record_trace = options.record_trace;

  const Vector no_linear = Vector::Zero(k);
  const detail::PowerProblem primal{section.basis(), unit, no_linear, space.weights(),
                                    space.p()};
  Vector y;
  if (space.p() >= 2.0 || k == space.dim()) {
    detail::PowerOutcome sol = detail::minimize_power_objective(primal, std::move(y0), settings);
    y = std::move(sol.y);
    out.iterations = sol.iterations;
    out.objective_trace = std::move(sol.trace);
  } else {
    // For p < 2 the primal Newton map has unbounded curvature at zero
    // residuals. Solve the smooth dual instead: maximize <f, v> over
    // ||f||_q <= 1 with f annihilating L, i.e. minimize
    //   (1/q) ||A z||_q^q - (A^T W v)^T z,   A = W^{-1} C,  C = L^perp basis,
    // then recover the residual from the inverse duality map of f.
    const Matrix comp = section.complement().basis();
    const Matrix a = space.weights().cwiseInverse().asDiagonal() * comp;
    const Vector g = comp.transpose() * unit;
    const Vector zero_offset = Vector::Zero(space.dim());
    const detail::PowerProblem dual{a, zero_offset, g, space.weights(), space.q()};
    // Start from the duality map of the starting residual, pulled back to z.
    const Vector r0 = unit - section.basis() * y0;
    Vector z0 = Vector::Zero(comp.cols());
    if (r0.cwiseAbs().maxCoeff() > 0.0) {
      const Vector f0 = duality_map(space, r0);
      z0 = comp.transpose() * (space.weights().asDiagonal() * f0);
    }
    detail::PowerOutcome sol = detail::minimize_power_objective(dual, std::move(z0), settings);
    out.iterations = sol.iterations;
    out.objective_trace = std::move(sol.trace);
    const Vector f = a * sol.y;
    if (f.cwiseAbs().maxCoeff() == 0.0) {
      y = section.basis().transpose() * unit;
    } else {
      const Vector fn = f / dual_norm(space, f);
      const double dist = pairing(space, fn, unit);
      Vector r(fn.size());
      for (Index i = 0; i < r.size(); ++i) r(i) = dist * signed_pow(fn(i), space.q() - 1.0);
      y = section.basis().transpose() * (unit - r);
    }
  }

  out.coefficients = y * scale;
  out.point = section.basis() * out.coefficients;
  out.distance = norm(space, v - out.point);
  const Vector r_final = unit - section.basis() * y;
  out.optimality_residual = detail::power_stationarity(primal, r_final);
  out.converged = out.optimality_residual <=
                  std::max(options.opt_tol, detail::power_stationarity_floor(primal, r_final));
  if (!out.converged) {
    throw SolverFailure<ProjectionResult>(
        ErrorCode::kNoConvergence,
        "metric projection did not reach optimality residual " + std::to_string(options.opt_tol) +
            " (got " + std::to_string(out.optimality_residual) + ")",
        out);
  }
  return out;
}

double distance(const LpSpace& space, const Vector& v, const Subspace& section,
                const SolverOptions& options) {
  return metric_project(space, v, section, options).distance;
}

double orthogonality_residual(const LpSpace& space, const Vector& v, const Subspace& target) {
  check_pair(space, v, target);
  const Vector f = duality_map(space, v);
  double worst = 0.0;
  for (Index j = 0; j < target.dim(); ++j)
    worst = std::max(worst, std::abs(pairing(space, f, target.basis().col(j))));
  return worst;
}

bool is_orthogonal_vector(const LpSpace& space, const Vector& v, const Subspace& target,
                          double tol) {
  return orthogonality_residual(space, v, target) <= tol;
}

DefectResult subspace_ortho_defect(const LpSpace& space, const Subspace& source,
                                   const Subspace& target, const DefectOptions& options) {
  require(source.ambient_dim() == space.dim() && target.ambient_dim() == space.dim(),
          ErrorCode::kDimensionMismatch, "subspaces do not match the space dimension");
  require(!source.is_zero(), ErrorCode::kPrecondition, "K must be nontrivial");
  const Index k = source.dim();
  bool ok = true;
  DefectResult best;
  best.delta = std::numeric_limits<double>::infinity();
  Vector coeffs = Vector::Zero(target.dim());

  auto evaluate = [&](const Vector& params, Vector& warm) {
    const Vector v = sphere_point(space, source, params);
    ++best.evaluations;
    return std::pair{unit_distance(space, v, target, options.solver, warm, ok), v};
  };
  auto record = [&](double value, const Vector& v, const Vector& params) {
    if (value < best.delta) {
      best.delta = value;
      best.witness = v;
      best.witness_params = params;
    }
  };

  if (k == 1) {
    const Vector params = Vector::Ones(1);
    auto [value, v] = evaluate(params, coeffs);
    record(value, v, params);
  } else if (k == 2) {
    const int grid = std::max(8, options.angle_grid);
    const double step = std::numbers::pi / grid;
    auto params_at = [](double theta) { return Vector{{std::cos(theta), std::sin(theta)}}; };
    std::vector<double> values(grid);
    for (int j = 0; j < grid; ++j) {
      const Vector params = params_at(j * step);
      auto [value, v] = evaluate(params, coeffs);
      values[j] = value;
      record(value, v, params);
    }
    const int jmin = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
    // Golden-section refinement on the bracketing cells. dist(-v, E) = dist(v, E),
    // so the function is pi-periodic and brackets may wrap around.
    double lo = (jmin - 1) * step;
    double hi = (jmin + 1) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    Vector warm_c = coeffs;
    Vector warm_d = coeffs;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    auto [fc, vc] = evaluate(params_at(c), warm_c);
    auto [fd, vd] = evaluate(params_at(d), warm_d);
    record(fc, vc, params_at(c));
    record(fd, vd, params_at(d));
    while (hi - lo > options.refine_tol) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - inv_phi * (hi - lo);
        auto [f, v] = evaluate(params_at(c), warm_c);
        fc = f;
        record(f, v, params_at(c));
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + inv_phi * (hi - lo);
        auto [f, v] = evaluate(params_at(d), warm_d);
        fd = f;
        record(f, v, params_at(d));
      }
    }
  } else {
    Rng rng(options.seed);
    const int count = std::max(1, options.random_directions);
    std::vector<std::pair<double, Vector>> samples;
    samples.reserve(count);
    for (int s = 0; s < count; ++s) {
      Vector params = gaussian_vector(rng, k);
      params.normalize();
      auto [value, v] = evaluate(params, coeffs);
      record(value, v, params);
      samples.emplace_back(value, std::move(params));
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const int refine = std::min<int>(options.refine_starts, static_cast<int>(samples.size()));
    for (int s = 0; s < refine; ++s) {
      Vector params = samples[s].second;
      double value = samples[s].first;
      Vector warm = Vector::Zero(target.dim());
      double h = 0.25;
      while (h > 1e-7) {
        bool improved = false;
        for (Index i = 0; i < k; ++i) {
          for (double sign : {1.0, -1.0}) {
            Vector trial = params;
            trial(i) += sign * h;
            trial.normalize();
            auto [f, v] = evaluate(trial, warm);
            if (f < value) {
              value = f;
              params = trial;
              record(f, v, trial);
              improved = true;
            }
          }
        }
        if (!improved) h *= 0.5;
      }
    }
  }

  best.delta = std::clamp(best.delta, 0.0, 1.0);
  if (!ok) {
    throw SolverFailure<DefectResult>(ErrorCode::kNoConvergence,
                                      "an inner metric projection did not converge", best);
  }
  return best;
}

bool is_eps_orthogonal(const LpSpace& space, const Subspace& source, const Subspace& target,
                       double eps, const DefectOptions& options) {
  require(eps >= 0.0 && eps < 1.0, ErrorCode::kPrecondition, "eps must lie in [0, 1)");
  return subspace_ortho_defect(space, source, target, options).delta >= 1.0 - eps - options.slack;
}

}  // namespace ortholab
