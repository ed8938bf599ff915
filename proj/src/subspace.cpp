#include "ortholab/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ortholab/error.hpp"
#include "ortholab/random.hpp"

namespace ortholab {

namespace {

constexpr double kOrthonormalTol = 1e-10;

Matrix thin_q(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

}  // namespace

Subspace::Subspace(Matrix orthonormal_basis)
    : basis_(std::move(orthonormal_basis)), ambient_(basis_.rows()) {
  require(basis_.allFinite(), ErrorCode::kInvalidArgument, "subspace basis has non-finite entries");
  require(basis_.cols() <= basis_.rows(), ErrorCode::kInvalidArgument,
          "subspace dimension exceeds ambient dimension");
  if (basis_.cols() > 0) {
    const double defect =
        (basis_.transpose() * basis_ - Matrix::Identity(basis_.cols(), basis_.cols()))
            .cwiseAbs()
            .maxCoeff();
    require(defect <= kOrthonormalTol, ErrorCode::kInvalidArgument,
            "subspace basis is not orthonormal (defect " + std::to_string(defect) + ")");
  }
}

Subspace Subspace::zero(Index ambient_dim) { return Subspace(Matrix(ambient_dim, 0)); }

Subspace Subspace::whole(Index ambient_dim) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::coordinate(Index ambient_dim, const std::vector<Index>& axes) {
  Matrix b = Matrix::Zero(ambient_dim, static_cast<Index>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) {
    require(axes[j] >= 0 && axes[j] < ambient_dim, ErrorCode::kInvalidArgument,
            "coordinate axis out of range");
    b(axes[j], static_cast<Index>(j)) = 1.0;
  }
  // Repeated axes would break orthonormality and are rejected by the constructor.
  return Subspace(std::move(b));
}

Subspace Subspace::complement() const {
  const Index n = ambient_;
  if (dim() == 0) return whole(n);
  Eigen::HouseholderQR<Matrix> qr(basis_);
  Matrix q = qr.householderQ();
  return Subspace(q.rightCols(n - dim()));
}

Index numerical_rank(const Vector& singular_values, Index rows, Index cols, double rel_tol) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (top <= 0.0) return 0;
  const double tol = rel_tol < 0.0 ? static_cast<double>(std::max(rows, cols)) *
                                         std::numeric_limits<double>::epsilon()
                                   : rel_tol;
  return static_cast<Index>((singular_values.array() > tol * top).count());
}

Subspace span_of(const Matrix& vectors, double rel_tol) {
  require(vectors.cols() >= 1, ErrorCode::kInvalidArgument, "span_of needs at least one vector");
  require(vectors.allFinite(), ErrorCode::kInvalidArgument, "non-finite vector entries");
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const Index rank = numerical_rank(svd.singularValues(), vectors.rows(), vectors.cols(), rel_tol);
  if (rank < vectors.cols()) {
    throw Error(ErrorCode::kRankDeficient, "vectors are linearly dependent: rank " +
                                               std::to_string(rank) + " < " +
                                               std::to_string(vectors.cols()));
  }
  return Subspace(svd.matrixU().leftCols(rank));
}

Subspace kernel_of(const Matrix& functionals, double rel_tol) {
  const Index n = functionals.rows();
  require(functionals.cols() >= 1, ErrorCode::kInvalidArgument,
          "kernel_of needs at least one functional");
  require(functionals.allFinite(), ErrorCode::kInvalidArgument, "non-finite functional entries");
  Eigen::JacobiSVD<Matrix> svd(functionals.transpose(), Eigen::ComputeFullV);
  const Index rank =
      numerical_rank(svd.singularValues(), functionals.cols(), functionals.rows(), rel_tol);
  require(rank >= 1, ErrorCode::kInvalidArgument, "all functionals vanish");
  if (rank == n) return Subspace::zero(n);
  return Subspace(svd.matrixV().rightCols(n - rank));
}

Subspace random_grassmann(Index ambient_dim, Index dim, Seed seed) {
  require(dim >= 1 && dim <= ambient_dim, ErrorCode::kInvalidArgument,
          "random_grassmann needs 1 <= k <= N");
  Rng rng(seed);
  for (;;) {
    const Matrix g = gaussian_matrix(rng, ambient_dim, dim);
    Eigen::JacobiSVD<Matrix> svd(g);
    // Measure-zero event; draw again from the same stream.
    if (numerical_rank(svd.singularValues(), ambient_dim, dim, 1e-12) == dim)
      return Subspace(thin_q(g));
  }
}

Vector principal_angles(const Subspace& a, const Subspace& b) {
  require(a.ambient_dim() == b.ambient_dim(), ErrorCode::kDimensionMismatch,
          "subspaces live in different ambient spaces");
  const Subspace& big = a.dim() >= b.dim() ? a : b;
  const Subspace& small = a.dim() >= b.dim() ? b : a;
  const Index m = small.dim();
  if (m == 0) return Vector(0);
  const Matrix cross = big.basis().transpose() * small.basis();
  const Matrix resid = small.basis() - big.basis() * cross;
  Eigen::JacobiSVD<Matrix> cos_svd(cross);
  Eigen::JacobiSVD<Matrix> sin_svd(resid);
  const Vector& cosv = cos_svd.singularValues();  // descending
  const Vector& sinv = sin_svd.singularValues();  // descending
  Vector angles(m);
  for (Index i = 0; i < m; ++i) {
    const double c = std::min(1.0, cosv(i));
    const double s = std::min(1.0, sinv(m - 1 - i));
    angles(i) = std::atan2(s, c);
  }
  return angles;
}

double gap_distance(const Subspace& a, const Subspace& b) {
  require(a.ambient_dim() == b.ambient_dim(), ErrorCode::kDimensionMismatch,
          "subspaces live in different ambient spaces");
  require(a.dim() == b.dim(), ErrorCode::kDimensionMismatch,
          "gap distance needs equal dimensions");
  if (a.dim() == 0) return 0.0;
  const Matrix resid = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
  Eigen::JacobiSVD<Matrix> svd(resid);
  return std::min(1.0, svd.singularValues()(0));
}

bool contains(const Subspace& a, const Subspace& b, double tol) {
  require(a.ambient_dim() == b.ambient_dim(), ErrorCode::kDimensionMismatch,
          "subspaces live in different ambient spaces");
  for (Index j = 0; j < b.dim(); ++j) {
    const Vector col = b.basis().col(j);
    const Vector resid = col - a.basis() * (a.basis().transpose() * col);
    if (resid.norm() > tol) return false;
  }
  return true;
}

Subspace intersection(const Subspace& a, const Subspace& b, double rel_tol) {
  require(a.ambient_dim() == b.ambient_dim(), ErrorCode::kDimensionMismatch,
          "subspaces live in different ambient spaces");
  const Index n = a.ambient_dim();
  if (a.is_zero() || b.is_zero()) return Subspace::zero(n);
  const Subspace ca = a.complement();
  const Subspace cb = b.complement();
  if (ca.is_zero()) return b;
  if (cb.is_zero()) return a;
  Matrix annihilators(n, ca.dim() + cb.dim());
  annihilators << ca.basis(), cb.basis();
  return kernel_of(annihilators, rel_tol);
}

std::vector<Index> GammaParam::dependent_coordinates() const {
  std::vector<Index> out;
  for (Index i = 0; i < ambient_dim(); ++i)
    if (i != chart[0] && i != chart[1]) out.push_back(i);
  return out;
}

Subspace gamma_to_subspace(const GammaParam& param) {
  require(param.gamma.cols() == 2, ErrorCode::kInvalidArgument, "gamma must have two columns");
  require(param.gamma.allFinite(), ErrorCode::kInvalidArgument, "gamma has non-finite entries");
  const Index n = param.ambient_dim();
  require(param.chart[0] != param.chart[1] && param.chart[0] >= 0 && param.chart[1] >= 0 &&
              param.chart[0] < n && param.chart[1] < n,
          ErrorCode::kInvalidArgument, "invalid chart");
  Matrix spanning = Matrix::Zero(n, 2);
  spanning(param.chart[0], 0) = 1.0;
  spanning(param.chart[1], 1) = 1.0;
  const auto deps = param.dependent_coordinates();
  for (std::size_t r = 0; r < deps.size(); ++r)
    spanning.row(deps[r]) = param.gamma.row(static_cast<Index>(r));
  return span_of(spanning);
}

GammaParam subspace_to_gamma(const Subspace& plane, std::array<Index, 2> chart,
                             double chart_tol) {
  require(plane.dim() == 2, ErrorCode::kInvalidArgument, "gamma charts describe 2-planes");
  const Index n = plane.ambient_dim();
  require(chart[0] != chart[1] && chart[0] >= 0 && chart[1] >= 0 && chart[0] < n &&
              chart[1] < n,
          ErrorCode::kInvalidArgument, "invalid chart");
  Eigen::Matrix2d minor;
  minor.row(0) = plane.basis().row(chart[0]);
  minor.row(1) = plane.basis().row(chart[1]);
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(minor);
  if (svd.singularValues()(1) < chart_tol) {
    throw Error(ErrorCode::kChartFailure, "coordinate chart (" + std::to_string(chart[0] + 1) +
                                              "," + std::to_string(chart[1] + 1) +
                                              ") is singular for this plane");
  }
  GammaParam out;
  out.chart = chart;
  out.gamma.resize(n - 2, 2);
  const auto deps = out.dependent_coordinates();
  const Eigen::Matrix2d inv = minor.inverse();
  for (std::size_t r = 0; r < deps.size(); ++r)
    out.gamma.row(static_cast<Index>(r)) = plane.basis().row(deps[r]) * inv;
  return out;
}

std::array<Index, 2> best_chart(const Subspace& plane) {
  require(plane.dim() == 2, ErrorCode::kInvalidArgument, "gamma charts describe 2-planes");
  std::array<Index, 2> best{0, 1};
  double best_sigma = -1.0;
  for (Index i = 0; i < plane.ambient_dim(); ++i) {
    for (Index j = i + 1; j < plane.ambient_dim(); ++j) {
      Eigen::Matrix2d minor;
      minor.row(0) = plane.basis().row(i);
      minor.row(1) = plane.basis().row(j);
      const double sigma = Eigen::JacobiSVD<Eigen::Matrix2d>(minor).singularValues()(1);
      if (sigma > best_sigma) {
        best_sigma = sigma;
        best = {i, j};
      }
    }
  }
  return best;
}

}  // namespace ortholab
