#pragma once

#include <array>
#include <vector>

#include "ortholab/types.hpp"

namespace ortholab {

/// Relative rank tolerance meaning "use max(rows, cols) * machine epsilon".
inline constexpr double kDefaultRankTol = -1.0;

/// A linear subspace of R^N stored through a Euclidean-orthonormal basis
/// (N x k). The zero subspace (k = 0) is representable and is how kernel and
/// intersection computations report a collapse to {0}.
class Subspace {
 public:
  Subspace() = default;

  /// Takes ownership of an N x k basis; throws unless its columns are
  /// orthonormal within 1e-10.
  explicit Subspace(Matrix orthonormal_basis);

  static Subspace zero(Index ambient_dim);
  static Subspace whole(Index ambient_dim);
  /// Span of the coordinate vectors with the given zero-based indices.
  static Subspace coordinate(Index ambient_dim, const std::vector<Index>& axes);

  Index ambient_dim() const noexcept { return ambient_; }
  Index dim() const noexcept { return basis_.cols(); }
  bool is_zero() const noexcept { return basis_.cols() == 0; }
  const Matrix& basis() const noexcept { return basis_; }

  /// Orthogonal projector B B^T.
  Matrix projector() const { return basis_ * basis_.transpose(); }
  /// Orthonormal basis of the Euclidean orthogonal complement.
  Subspace complement() const;

 private:
  Matrix basis_;
  Index ambient_ = 0;
};

/// Number of singular values above rel_tol * sigma_max. A negative rel_tol
/// selects max(rows, cols) * epsilon.
Index numerical_rank(const Vector& singular_values, Index rows, Index cols,
                     double rel_tol = kDefaultRankTol);

/// Orthonormal basis of the span of the columns of `vectors`.
/// Throws kRankDeficient if the columns are numerically dependent.
Subspace span_of(const Matrix& vectors, double rel_tol = kDefaultRankTol);

/// {x : <n, x> = 0 for every column n of `functionals`}. Returns the zero
/// subspace when the functionals have full rank N.
Subspace kernel_of(const Matrix& functionals, double rel_tol = kDefaultRankTol);

/// Orthonormalized seeded standard-Gaussian N x k matrix.
Subspace random_grassmann(Index ambient_dim, Index dim, Seed seed);

/// Principal angles in ascending order (radians), min(dim A, dim B) of them.
Vector principal_angles(const Subspace& a, const Subspace& b);

/// Sine of the largest principal angle between equal-dimensional subspaces.
double gap_distance(const Subspace& a, const Subspace& b);

/// Every basis vector of b lies within Euclidean distance tol of a.
bool contains(const Subspace& a, const Subspace& b, double tol = 1e-10);

/// a ∩ b via the null space of the stacked annihilators of a and b.
Subspace intersection(const Subspace& a, const Subspace& b, double rel_tol = 1e-10);

/// A 2-dimensional section written in a coordinate chart: every coordinate
/// k outside the chart pair satisfies x_k = gamma(r,0) x_i + gamma(r,1) x_j,
/// where (i, j) = chart and r enumerates the remaining coordinates in
/// increasing order.
struct GammaParam {
  Matrix gamma;                   // (N - 2) x 2
  std::array<Index, 2> chart{0, 1};

  Index ambient_dim() const noexcept { return gamma.rows() + 2; }
  /// Indices of the dependent coordinates, in row order of gamma.
  std::vector<Index> dependent_coordinates() const;
};

Subspace gamma_to_subspace(const GammaParam& param);

/// Throws kChartFailure when the projection of L onto the chart coordinates
/// is singular (smallest singular value below chart_tol).
GammaParam subspace_to_gamma(const Subspace& plane, std::array<Index, 2> chart = {0, 1},
                             double chart_tol = 1e-8);

/// The coordinate pair whose 2x2 minor is best conditioned; used as the
/// fallback when the (0, 1) chart fails.
std::array<Index, 2> best_chart(const Subspace& plane);

}  // namespace ortholab
