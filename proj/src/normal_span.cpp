#include "ortholab/normal_span.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "detail/parallel.hpp"
#include "ortholab/error.hpp"
#include "ortholab/random.hpp"

namespace ortholab {
namespace {

Index default_samples(Index k) { return 64 * k * k; }

// Coefficient vectors (columns) of sample points in the basis of L. For k = 2
// a midpoint angle grid on the half circle (f is odd, so the other half adds
// nothing to the span); otherwise Gaussian directions from a fixed stream, so
// the first n columns of the 2n draw are the n draw.
Matrix sample_params(Index k, Index n, Seed seed) {
  if (k == 1) return Matrix::Ones(1, 1);
  if (k == 2) {
    Matrix c(2, n);
    for (Index j = 0; j < n; ++j) {
      const double t = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      c(0, j) = std::cos(t);
      c(1, j) = std::sin(t);
    }
    return c;
  }
  Rng rng(seed);
  return gaussian_matrix(rng, k, n);
}

Matrix stacked_normals(const LpSpace& space, const Matrix& points) {
  Matrix rows(points.cols(), points.rows());
  for (Index j = 0; j < points.cols(); ++j) rows.row(j) = duality_map(space, points.col(j)).transpose();
  return rows;
}

Vector singular_values(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

struct SpanRank {
  Index rank;
  Vector sv;
  Matrix basis;  // N x rank, only when asked for
};

// Rank of the row space of sampled normals. Columns are scaled to unit norm
// first; that leaves the rank alone but stops a coordinate that is merely
// small on L (normals ~ |x_j|^(p-1)) from sinking below the relative
// tolerance. Columns at rounding level -- coordinates vanishing on L -- are
// zeroed instead of blown up.
SpanRank span_rank(Matrix rows, double p, double tol, bool want_basis) {
  Vector scale = rows.colwise().norm().transpose();
  const double top = scale.maxCoeff();
  const double floor = top * std::pow(1e-12, p - 1.0);
  for (Index j = 0; j < rows.cols(); ++j) {
    if (!(top > 0.0) || scale(j) <= floor) {
      rows.col(j).setZero();
      scale(j) = 0.0;
    } else {
      rows.col(j) /= scale(j);
    }
  }
  Eigen::BDCSVD<Matrix> svd(rows, want_basis ? Eigen::ComputeThinV : 0);
  SpanRank out{numerical_rank(svd.singularValues(), rows.rows(), rows.cols(), tol),
               svd.singularValues(), {}};
  if (want_basis) {
    // u spans the scaled rows  <=>  u D^-1 spans the original ones
    Matrix v = svd.matrixV().leftCols(out.rank);
    for (Index j = 0; j < v.rows(); ++j) {
      if (scale(j) > 0.0) v.row(j) /= scale(j);
      else v.row(j).setZero();
    }
    out.basis = std::move(v);
  }
  return out;
}

SpanRank sampled_rank(const LpSpace& space, const Subspace& section, Index n, Seed seed,
                      double tol, bool want_basis = false) {
  const Matrix points = section.basis() * sample_params(section.dim(), n, seed);
  return span_rank(stacked_normals(space, points), space.p(), tol, want_basis);
}

// Points x(t) of the chart parametrization: x_i = cos t, x_j = sin t and the
// dependent coordinates by gamma.
Vector chart_point(const GammaParam& g, double t) {
  const auto dep = g.dependent_coordinates();
  Vector x(g.ambient_dim());
  const double c = std::cos(t), s = std::sin(t);
  x(g.chart[0]) = c;
  x(g.chart[1]) = s;
  for (Index r = 0; r < g.gamma.rows(); ++r) x(dep[r]) = g.gamma(r, 0) * c + g.gamma(r, 1) * s;
  return x;
}

// Coefficients of (g1 c + g2 s)^e in the monomials c^(e-j) s^j.
Vector binomial_row(double g1, double g2, int e) {
  Vector row(e + 1);
  double binom = 1.0;
  for (int j = 0; j <= e; ++j) {
    row(j) = binom * std::pow(g1, e - j) * std::pow(g2, j);
    binom = binom * (e - j) / (j + 1);
  }
  return row;
}

AlgebraicBadness algebraic_badness(const GammaParam& g, int e, Index bad_max, double rel_tol) {
  const Index n = g.ambient_dim();
  require(g.gamma.cols() == 2 && g.gamma.allFinite(), ErrorCode::kInvalidArgument,
          "gamma must be a finite (N-2) x 2 matrix");
  AlgebraicBadness out;
  out.coefficients = Matrix::Zero(n, e + 1);
  out.coefficients(0, 0) = 1.0;
  out.coefficients(1, e) = 1.0;
  for (Index r = 0; r < g.gamma.rows(); ++r)
    out.coefficients.row(r + 2) = binomial_row(g.gamma(r, 0), g.gamma(r, 1), e).transpose();
  const Vector sv = singular_values(out.coefficients);
  out.rank = numerical_rank(sv, out.coefficients.rows(), out.coefficients.cols(), rel_tol);
  out.is_bad = out.rank <= bad_max;
  return out;
}

}  // namespace

BadnessVerdict normal_span_dim(const LpSpace& space, const Subspace& section,
                               const NormalSpanOptions& options) {
  require(!section.is_zero(), ErrorCode::kPrecondition, "section must be nontrivial");
  require(section.ambient_dim() == space.dim(), ErrorCode::kDimensionMismatch,
          "section and space dimensions differ");
  require(options.rank_tol > 0.0, ErrorCode::kInvalidArgument, "rank_tol must be positive");
  const Index n = options.samples > 0 ? options.samples : default_samples(section.dim());

  const SpanRank first = sampled_rank(space, section, n, options.seed, options.rank_tol);
  if (options.check_stability) {
    const SpanRank second = sampled_rank(space, section, 2 * n, options.seed, options.rank_tol);
    if (second.rank != first.rank) {
      throw Error(ErrorCode::kUnstable, "normal span rank changed from " + std::to_string(first.rank) +
                                            " to " + std::to_string(second.rank) +
                                            " when doubling the samples");
    }
  }
  BadnessVerdict v;
  v.sampled_rank = v.dim_normal_span = first.rank;
  v.singular_values = first.sv;
  return v;
}

Subspace normal_span_basis(const LpSpace& space, const Subspace& section,
                           const NormalSpanOptions& options) {
  const Index n = options.samples > 0 ? options.samples : default_samples(section.dim());
  return span_of(sampled_rank(space, section, n, options.seed, options.rank_tol, true).basis);
}

AlgebraicBadness algebraic_badness_p3(const GammaParam& gamma, double rel_tol) {
  return algebraic_badness(gamma, 2, 2, rel_tol);
}

AlgebraicBadness algebraic_badness_p5(const GammaParam& gamma, double rel_tol) {
  AlgebraicBadness out = algebraic_badness(gamma, 4, 3, rel_tol);
  // Mixed monomials: columns 1..3 of the dependent rows.
  const Matrix mixed = out.coefficients.bottomRows(gamma.gamma.rows()).middleCols(1, 3);
  const Vector sv = singular_values(mixed);
  out.colinearity_check = mixed.size() == 0 || numerical_rank(sv, mixed.rows(), 3, rel_tol) <= 1;
  return out;
}

std::pair<double, double> sign_constant_arc(const GammaParam& g) {
  constexpr double pi = std::numbers::pi;
  std::vector<double> cuts{0.0, pi / 2, pi};
  for (Index r = 0; r < g.gamma.rows(); ++r) {
    const double a = g.gamma(r, 0), b = g.gamma(r, 1);
    if (a == 0.0 && b == 0.0) continue;  // identically zero coordinate
    double t = std::atan2(-a, b);
    if (t < 0.0) t += pi;
    if (t >= pi) t -= pi;
    cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  std::pair<double, double> best{0.0, 0.0};
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] - cuts[i - 1] > best.second - best.first) best = {cuts[i - 1], cuts[i]};
  return best;
}

namespace {

Matrix arc_normals(const LpSpace& space, const GammaParam& gamma, Index n) {
  require(space.dim() == gamma.ambient_dim(), ErrorCode::kDimensionMismatch,
          "gamma and space dimensions differ");
  const auto [a, b] = sign_constant_arc(gamma);
  Matrix rows(n, space.dim());
  for (Index j = 0; j < n; ++j) {
    const double t = a + (b - a) * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    rows.row(j) = duality_map(space, chart_point(gamma, t)).transpose();
  }
  return rows;
}

}  // namespace

Index arc_sampled_rank(const LpSpace& space, const GammaParam& gamma,
                       const NormalSpanOptions& options) {
  const Index n = options.samples > 0 ? options.samples : default_samples(2);
  return span_rank(arc_normals(space, gamma, n), space.p(), options.rank_tol, false).rank;
}

Subspace arc_normal_span_basis(const LpSpace& space, const GammaParam& gamma,
                               const NormalSpanOptions& options) {
  const Index n = options.samples > 0 ? options.samples : default_samples(2);
  return span_of(span_rank(arc_normals(space, gamma, n), space.p(), options.rank_tol, true).basis);
}

Index default_threshold(double p, Index k) { return (p == 5.0 && k == 2) ? 4 : k + 1; }

BadnessVerdict classify(const LpSpace& space, const Subspace& section, Index threshold,
                        const NormalSpanOptions& options) {
  require(threshold >= 1, ErrorCode::kInvalidArgument, "threshold must be positive");
  const double p = space.p();
  require(p == 2.0 || (p >= 3.0 && p == std::floor(p) && std::fmod(p, 2.0) == 1.0),
          ErrorCode::kPrecondition, "classification needs p = 2 or an odd integer p >= 3");
  BadnessVerdict v = normal_span_dim(space, section, options);
  v.threshold = threshold;
  v.is_bad = v.dim_normal_span < threshold;

  if ((p == 3.0 || p == 5.0) && section.dim() == 2 && space.kind() == SpaceKind::kFiniteLp) {
    std::optional<GammaParam> g;
    try {
      g = subspace_to_gamma(section);
    } catch (const Error&) {
      try {
        g = subspace_to_gamma(section, best_chart(section));
      } catch (const Error&) {
      }
    }
    if (g) {
      v.algebraic_rank = (p == 3.0 ? algebraic_badness_p3(*g) : algebraic_badness_p5(*g)).rank;
      v.arc_rank = arc_sampled_rank(space, *g, options);
    }
  }
  return v;
}

namespace {

std::vector<BadnessVerdict> classify_all(const LpSpace& space, const SectionSampler& sampler,
                                         Index threshold, Index trials, Seed seed,
                                         const BadnessOptions& options) {
  require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be at least 1");
  std::vector<BadnessVerdict> out(trials);
  detail::parallel_for(trials, options.threads, [&](Index i) {
    const Seed s = derive_seed(seed, static_cast<std::uint64_t>(i));
    NormalSpanOptions span = options.span;
    span.seed = s;
    out[i] = classify(space, sampler(i, s), threshold, span);
  });
  return out;
}

double bad_share(const std::vector<BadnessVerdict>& verdicts) {
  const auto count = std::count_if(verdicts.begin(), verdicts.end(),
                                   [](const BadnessVerdict& v) { return v.is_bad; });
  return static_cast<double>(count) / static_cast<double>(verdicts.size());
}

}  // namespace

std::vector<BadnessVerdict> classify_random_sections(double p, Index ambient_dim, Index k,
                                                     Index threshold, Index trials, Seed seed,
                                                     const BadnessOptions& options) {
  require(k >= 1 && k <= ambient_dim, ErrorCode::kPrecondition, "need 1 <= k <= N");
  const auto space = LpSpace::finite(ambient_dim, p);
  return classify_all(
      space, [&](Index, Seed s) { return random_grassmann(ambient_dim, k, s); }, threshold, trials,
      seed, options);
}

double badness_fraction(const LpSpace& space, const SectionSampler& sampler, Index threshold,
                        Index trials, Seed seed, const BadnessOptions& options) {
  return bad_share(classify_all(space, sampler, threshold, trials, seed, options));
}

double badness_fraction(double p, Index ambient_dim, Index k, Index threshold, Index trials,
                        Seed seed, const BadnessOptions& options) {
  return bad_share(classify_random_sections(p, ambient_dim, k, threshold, trials, seed, options));
}

}  // namespace ortholab
