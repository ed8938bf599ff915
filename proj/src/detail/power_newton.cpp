#include "detail/power_newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ortholab/lp_space.hpp"

namespace ortholab::detail {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double objective(const PowerProblem& pr, const Vector& y, const Vector& r) {
  double sum = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    const double a = std::abs(r(i));
    sum += pr.w(i) * a * std::abs(signed_pow(a, pr.p - 1.0));
  }
  return sum / pr.p - pr.g.dot(y);
}

Vector residual(const PowerProblem& pr, const Vector& y) { return pr.a * y - pr.b; }

Vector gradient(const PowerProblem& pr, const Vector& r) {
  Vector psi(r.size());
  for (Index i = 0; i < r.size(); ++i) psi(i) = pr.w(i) * signed_pow(r(i), pr.p - 1.0);
  return pr.a.transpose() * psi - pr.g;
}

double weighted_norm(const PowerProblem& pr, const Vector& r) {
  const double scale = r.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < r.size(); ++i)
    sum += pr.w(i) * std::pow(std::abs(r(i)) / scale, pr.p);
  return scale * std::pow(sum, 1.0 / pr.p);
}

}  // namespace

double power_stationarity(const PowerProblem& pr, const Vector& r) {
  const double gnorm = pr.g.size() ? pr.g.cwiseAbs().maxCoeff() : 0.0;
  if (gnorm > 0.0) return gradient(pr, r).cwiseAbs().maxCoeff() / gnorm;
  const double rn = weighted_norm(pr, r);
  const double bn = std::max(weighted_norm(pr, pr.b), std::numeric_limits<double>::min());
  // A residual at rounding level means b already lies in the range of A.
  if (rn <= 64.0 * kEps * bn) return 0.0;
  const Vector f = r / rn;
  Vector psi(r.size());
  for (Index i = 0; i < r.size(); ++i) psi(i) = pr.w(i) * signed_pow(f(i), pr.p - 1.0);
  return (pr.a.transpose() * psi).cwiseAbs().maxCoeff();
}

double power_stationarity_floor(const PowerProblem& pr, const Vector& r) {
  if (pr.g.size() && pr.g.cwiseAbs().maxCoeff() > 0.0) return 0.0;
  const double rn = weighted_norm(pr, r);
  if (rn <= 0.0) return std::numeric_limits<double>::infinity();
  // Rounding in r is magnified by |b|/|r| once it is normalised.
  return 64.0 * std::max(pr.p - 1.0, 1.0) * kEps * weighted_norm(pr, pr.b) / rn;
}

PowerOutcome minimize_power_objective(const PowerProblem& pr, Vector y0,
                                      const PowerSettings& settings) {
  PowerOutcome out;
  out.y = std::move(y0);
  out.r = residual(pr, out.y);
  double phi = objective(pr, out.y, out.r);
  out.stationarity = power_stationarity(pr, out.r);
  if (settings.record_trace) out.trace.push_back(phi);
  const Index k = out.y.size();

  while (out.stationarity > std::max(settings.target, power_stationarity_floor(pr, out.r)) &&
         out.iterations < settings.max_iterations) {
    ++out.iterations;
    const Vector grad = gradient(pr, out.r);

    const double rmax = out.r.cwiseAbs().maxCoeff();
    Vector h(out.r.size());
    for (Index i = 0; i < h.size(); ++i) {
      double a = std::abs(out.r(i));
      if (pr.p < 2.0) a = std::max(a, settings.hessian_floor * rmax);
      h(i) = pr.w(i) * (pr.p - 1.0) * (pr.p == 2.0 ? 1.0 : std::pow(a, pr.p - 2.0));
    }
    Matrix hess = pr.a.transpose() * h.asDiagonal() * pr.a;
    Vector dir = hess.ldlt().solve(-grad);
    if (!dir.allFinite() || grad.dot(dir) >= 0.0) {
      const double shift = 1e-13 * std::max(hess.trace() / static_cast<double>(k),
                                            std::numeric_limits<double>::min());
      hess.diagonal().array() += shift;
      dir = hess.ldlt().solve(-grad);
    }
    if (!dir.allFinite() || grad.dot(dir) >= 0.0) dir = -grad;

    const double slope = grad.dot(dir);
    double t = 1.0;
    bool accepted = false;
    Vector y_new, r_new;
    double phi_new = phi;
    for (int halving = 0; halving < 60; ++halving) {
      y_new = out.y + t * dir;
      r_new = residual(pr, y_new);
      phi_new = objective(pr, y_new, r_new);
      const double bound = phi + 1e-4 * t * slope;
      // Once the predicted decrease is below the resolution of Phi the test
      // is meaningless; switch to the stationarity safeguard below.
      if (!(bound < phi)) break;
      if (phi_new <= bound) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Near the optimum the decrease drops below the resolution of Phi;
      // fall back on the stationarity measure.
      // r = A y - b cancels when |r| << |b|, which costs Phi about p |b|/|r| ulps.
      const double bmax = pr.b.size() ? pr.b.cwiseAbs().maxCoeff() : 0.0;
      const double cancel = rmax > 0.0 ? pr.p * bmax / rmax : 0.0;
      const double noise = 64.0 * kEps * (std::abs(phi) * (1.0 + cancel) + std::abs(pr.g.dot(out.y)));
      for (double step = 1.0; step > 1e-3 && !accepted; step *= 0.5) {
        y_new = out.y + step * dir;
        r_new = residual(pr, y_new);
        phi_new = objective(pr, y_new, r_new);
        accepted = phi_new <= phi + noise && power_stationarity(pr, r_new) < out.stationarity;
      }
    }
    if (!accepted) break;
    out.y = std::move(y_new);
    out.r = std::move(r_new);
    phi = phi_new;
    out.stationarity = power_stationarity(pr, out.r);
    if (settings.record_trace) out.trace.push_back(phi);
  }
  out.converged = out.stationarity <= settings.target;
  return out;
}

}  // namespace ortholab::detail
