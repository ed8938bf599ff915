#pragma once

// Independent reference computations shared by unit and acceptance tests.
// They use only closed-form norms and 1-D searches, none of the library
// solvers.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-11) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d, d = c, fd = fc, c = hi - r * (hi - lo), fc = f(c);
    } else {
      lo = c, c = d, fc = fd, d = lo + r * (hi - lo), fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

inline double lp_norm(const Eigen::VectorXd& v, double p) {
  const double s = v.cwiseAbs().maxCoeff();
  if (s == 0.0) return 0.0;
  return s * std::pow((v.cwiseAbs() / s).array().pow(p).sum(), 1.0 / p);
}

// dist_p(v, span{e}) by golden section on the convex map t -> |v - t e|_p.
inline double dist_to_line(const Eigen::VectorXd& v, const Eigen::VectorXd& e, double p) {
  const double bound = 2.0 * lp_norm(v, p) / lp_norm(e, p) + 1.0;
  const auto f = [&](double t) { return lp_norm(v - t * e, p); };
  return f(golden_min(f, -bound, bound));
}

// delta(K, span{e}) for a plane K = span{b1, b2}: angle scan + golden refinement.
inline double plane_defect(const Eigen::VectorXd& b1, const Eigen::VectorXd& b2,
                           const Eigen::VectorXd& e, double p, int grid = 360) {
  const auto value = [&](double t) {
    const Eigen::VectorXd v = std::cos(t) * b1 + std::sin(t) * b2;
    return dist_to_line(v / lp_norm(v, p), e, p);
  };
  const double h = std::numbers::pi / grid;
  int best = 0;
  double best_value = value(0.0);
  for (int j = 1; j < grid; ++j) {
    const double f = value(j * h);
    if (f < best_value) best_value = f, best = j;
  }
  const double t = golden_min(value, (best - 1) * h, (best + 1) * h, 1e-9);
  return std::min(best_value, value(t));
}

// Omega(span{e}) over G(2, 3): planes n^perp for unit normals n on a
// (theta, phi) grid, then compass search on the best normal.
struct PlaneScan {
  double omega;
  Eigen::Vector3d normal;
};

inline PlaneScan omega_g23(const Eigen::Vector3d& e, double p, int grid = 48) {
  const auto plane_value = [&](double th, double ph) {
    const Eigen::Vector3d n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    Eigen::Vector3d a = n.unitOrthogonal();
    Eigen::Vector3d b = n.cross(a);
    return plane_defect(a, b, e, p, 120);
  };
  double best = -1.0, bt = 0.0, bp = 0.0;
  for (int i = 0; i <= grid / 2; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double th = std::numbers::pi * i / grid, ph = 2.0 * std::numbers::pi * j / grid;
      const double f = plane_value(th, ph);
      if (f > best) best = f, bt = th, bp = ph;
    }
  }
  for (double h = std::numbers::pi / grid; h > 1e-7; h *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [dt, dp] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}) {
        const double f = plane_value(bt + dt, bp + dp);
        if (f > best) best = f, bt += dt, bp += dp, moved = true;
      }
    }
  }
  const Eigen::Vector3d n(std::sin(bt) * std::cos(bp), std::sin(bt) * std::sin(bp), std::cos(bt));
  Eigen::Vector3d a = n.unitOrthogonal();
  return {plane_defect(a, n.cross(a), e, p, 720), n};
}

// Smallest odd integer strictly greater than t, by counting.
inline int smallest_odd_above(long t) {
  int p = 1;
  while (p <= t) p += 2;
  return p;
}

}  // namespace oracle
