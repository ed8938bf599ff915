#pragma once

#include "ortholab/subspace.hpp"
#include "ortholab/types.hpp"

namespace ortholab {

enum class SpaceKind { kFiniteLp, kDiscretizedLp01 };

/// l^p_N, or L^p(0,1) sampled on a composite Gauss-Legendre grid.
///
/// Vectors are coordinate arrays of length dim(). Dual elements (duality map
/// images) use the same representation and act through pairing(): the plain
/// dot product for l^p_N, the quadrature sum  sum_i w_i f_i v_i  for L^p(0,1).
class LpSpace {
 public:
  static constexpr Index kDefaultGridSize = 2048;
  static constexpr int kDefaultNodesPerPanel = 8;

  static LpSpace finite(Index dim, double p);
  static LpSpace discretized_l01(double p, Index grid_size = kDefaultGridSize,
                                 int nodes_per_panel = kDefaultNodesPerPanel);

  SpaceKind kind() const noexcept { return kind_; }
  Index dim() const noexcept { return weights_.size(); }
  double p() const noexcept { return p_; }
  /// Conjugate exponent p / (p - 1).
  double q() const noexcept { return p_ / (p_ - 1.0); }
  const Vector& weights() const noexcept { return weights_; }
  /// Quadrature nodes in (0, 1); empty for l^p_N.
  const Vector& nodes() const noexcept { return nodes_; }
  bool unit_weights() const noexcept { return kind_ == SpaceKind::kFiniteLp; }

 private:
  LpSpace(SpaceKind kind, double p, Vector weights, Vector nodes);

  SpaceKind kind_ = SpaceKind::kFiniteLp;
  double p_ = 2.0;
  Vector weights_;
  Vector nodes_;
};

/// sgn(x) |x|^e, with the convention sgn(0) 0^e = 0.
double signed_pow(double x, double e) noexcept;

double norm(const LpSpace& space, const Vector& v);
double pairing(const LpSpace& space, const Vector& f, const Vector& v);
/// q-norm of a dual element.
double dual_norm(const LpSpace& space, const Vector& f);

/// The norming functional f_v: <f_v, v> = ||v||_p and ||f_v||_q = 1.
/// Throws kZeroVector for v = 0.
Vector duality_map(const LpSpace& space, const Vector& v);

/// Normalization of  basis(L) * params  onto the unit sphere of the space.
/// Throws kZeroVector if the combination vanishes.
Vector sphere_point(const LpSpace& space, const Subspace& section, const Vector& params);

}  // namespace ortholab
