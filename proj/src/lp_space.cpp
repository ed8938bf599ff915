#include "ortholab/lp_space.hpp"

#include <cmath>
#include <numbers>

#include "ortholab/error.hpp"

namespace ortholab {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, Vector& x, Vector& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x(i) = z;
    w(i) = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

void check_p(double p) {
  require(std::isfinite(p) && p > 1.0, ErrorCode::kInvalidArgument,
          "exponent p must be a finite real > 1");
}

void check_same_dim(const LpSpace& space, const Vector& v) {
  require(v.size() == space.dim(), ErrorCode::kDimensionMismatch,
          "vector length does not match the space dimension");
}

}  // namespace

LpSpace::LpSpace(SpaceKind kind, double p, Vector weights, Vector nodes)
    : kind_(kind), p_(p), weights_(std::move(weights)), nodes_(std::move(nodes)) {}

LpSpace LpSpace::finite(Index dim, double p) {
  check_p(p);
  require(dim >= 1, ErrorCode::kInvalidArgument, "dimension must be positive");
  return LpSpace(SpaceKind::kFiniteLp, p, Vector::Ones(dim), Vector());
}

LpSpace LpSpace::discretized_l01(double p, Index grid_size, int nodes_per_panel) {
  check_p(p);
  require(nodes_per_panel >= 1 && grid_size >= nodes_per_panel &&
              grid_size % nodes_per_panel == 0,
          ErrorCode::kInvalidArgument,
          "grid size must be a positive multiple of the nodes per panel");
  Vector x, w;
  gauss_legendre(nodes_per_panel, x, w);
  const Index panels = grid_size / nodes_per_panel;
  Vector nodes(grid_size), weights(grid_size);
  for (Index j = 0; j < panels; ++j) {
    const double a = static_cast<double>(j) / static_cast<double>(panels);
    const double h = 1.0 / static_cast<double>(panels);
    for (int i = 0; i < nodes_per_panel; ++i) {
      nodes(j * nodes_per_panel + i) = a + h * 0.5 * (x(i) + 1.0);
      weights(j * nodes_per_panel + i) = h * 0.5 * w(i);
    }
  }
  return LpSpace(SpaceKind::kDiscretizedLp01, p, std::move(weights), std::move(nodes));
}

double signed_pow(double x, double e) noexcept {
  if (x == 0.0) return 0.0;
  const double a = std::abs(x);
  double mag;
  if (e == 1.0) {
    mag = a;
  } else if (e == 2.0) {
    mag = a * a;
  } else if (e == 3.0) {
    mag = a * a * a;
  } else if (e == 4.0) {
    mag = (a * a) * (a * a);
  } else {
    mag = std::pow(a, e);
  }
  return x < 0.0 ? -mag : mag;
}

double norm(const LpSpace& space, const Vector& v) {
  check_same_dim(space, v);
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const double p = space.p();
  double sum = 0.0;
  for (Index i = 0; i < v.size(); ++i)
    sum += space.weights()(i) * std::abs(signed_pow(v(i) / scale, p));
  return scale * std::pow(sum, 1.0 / p);
}

double pairing(const LpSpace& space, const Vector& f, const Vector& v) {
  check_same_dim(space, f);
  check_same_dim(space, v);
  if (space.unit_weights()) return f.dot(v);
  return (space.weights().array() * f.array() * v.array()).sum();
}

double dual_norm(const LpSpace& space, const Vector& f) {
  check_same_dim(space, f);
  const double scale = f.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const double q = space.q();
  double sum = 0.0;
  for (Index i = 0; i < f.size(); ++i)
    sum += space.weights()(i) * std::pow(std::abs(f(i)) / scale, q);
  return scale * std::pow(sum, 1.0 / q);
}

Vector duality_map(const LpSpace& space, const Vector& v) {
  const double nv = norm(space, v);
  require(nv > 0.0, ErrorCode::kZeroVector, "duality map of the zero vector");
  const double e = space.p() - 1.0;
  Vector f(v.size());
  for (Index i = 0; i < v.size(); ++i) f(i) = signed_pow(v(i) / nv, e);
  return f;
}

Vector sphere_point(const LpSpace& space, const Subspace& section, const Vector& params) {
  require(section.ambient_dim() == space.dim(), ErrorCode::kDimensionMismatch,
          "subspace and space dimensions differ");
  require(params.size() == section.dim(), ErrorCode::kDimensionMismatch,
          "parameter count must equal the subspace dimension");
  const Vector x = section.basis() * params;
  const double nx = norm(space, x);
  require(nx > 0.0, ErrorCode::kZeroVector, "sphere_point of a zero combination");
  return x / nx;
}

}  // namespace ortholab
