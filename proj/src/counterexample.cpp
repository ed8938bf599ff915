#include "ortholab/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/nelder_mead.hpp"
#include "detail/parallel.hpp"
#include "ortholab/error.hpp"
#include "ortholab/random.hpp"

namespace ortholab {

Subspace build_E_from_g(const Subspace& g) {
  require(!g.is_zero(), ErrorCode::kPrecondition, "g must be nontrivial");
  return kernel_of(g.basis());
}

namespace {

// Orthonormal basis of the column space of a full-rank N x k matrix.
Matrix orth(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

std::vector<std::vector<Index>> coordinate_sets(Index n, Index k) {
  std::vector<std::vector<Index>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<Index> axes;
    for (Index i = 0; i < n; ++i)
      if (pick[i]) axes.push_back(i);
    out.push_back(std::move(axes));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

struct StartResult {
  StartTrace trace;
  Subspace plane;
  Vector witness;
};

}  // namespace

DefectReport certify_no_orthogonal_subspace(const LpSpace& space, const Subspace& target, Index k,
                                            Seed seed, const CertifyOptions& options) {
  const Index n = space.dim();
  require(target.ambient_dim() == n, ErrorCode::kDimensionMismatch,
          "E does not match the space dimension");
  require(k >= 1 && k < n, ErrorCode::kPrecondition, "need 1 <= k < N");
  require(options.random_starts >= 0 && options.max_evaluations > 0, ErrorCode::kInvalidArgument,
          "invalid search budget");

  std::vector<std::vector<Index>> coords;
  if (options.coordinate_starts) coords = coordinate_sets(n, k);
  const Index total = static_cast<Index>(coords.size()) + options.random_starts;
  require(total >= 1, ErrorCode::kInvalidArgument, "no starts requested");

  DefectOptions search = options.final_defect;
  search.angle_grid = options.search_grid;
  search.random_directions = options.search_directions;
  search.refine_tol = options.search_refine_tol;

  std::vector<StartResult> results(total);
  detail::parallel_for(total, options.threads, [&](Index id) {
    StartResult& res = results[id];
    res.trace.start_id = id;
    res.trace.seed = derive_seed(seed, static_cast<std::uint64_t>(id));
    const bool coordinate = id < static_cast<Index>(coords.size());
    res.trace.kind = coordinate ? "coordinate" : "random";
    const Subspace start = coordinate ? Subspace::coordinate(n, coords[id])
                                      : random_grassmann(n, k, res.trace.seed);
    const Matrix q1 = start.basis();
    const Matrix q2 = start.complement().basis();
    auto plane_at = [&](const Vector& z) {
      return Subspace(orth(q1 + q2 * Eigen::Map<const Matrix>(z.data(), n - k, k)));
    };
    DefectOptions local = search;
    local.seed = res.trace.seed;
    auto objective = [&](const Vector& z) {
      const Subspace plane = plane_at(z);
      try {
        return -subspace_ortho_defect(space, plane, target, local).delta;
      } catch (const SolverFailure<DefectResult>& e) {
        return -e.best().delta;
      }
    };

    detail::SimplexSettings simplex;
    simplex.initial_step = options.initial_step;
    simplex.x_tol = options.x_tol;
    simplex.max_evaluations = options.max_evaluations;
    auto first = detail::nelder_mead(objective, Vector::Zero((n - k) * k), simplex);
    simplex.initial_step = options.restart_step;
    auto second = detail::nelder_mead(objective, first.x, simplex);
    const Vector& z = second.value <= first.value ? second.x : first.x;

    res.plane = plane_at(z);
    DefectOptions fin = options.final_defect;
    fin.seed = res.trace.seed;
    const DefectResult final_value = subspace_ortho_defect(space, res.plane, target, fin);
    res.trace.value = final_value.delta;
    res.witness = final_value.witness;
    res.trace.iterations = first.evaluations + second.evaluations;
    res.trace.finished = second.finished;
  });

  DefectReport report;
  report.seed = seed;
  report.starts = total;
  Index best = 0;
  for (Index i = 0; i < total; ++i) {
    if (results[i].trace.value > results[best].trace.value) best = i;
    report.trace.push_back(results[i].trace);
  }
  report.omega = results[best].trace.value;
  report.epsilon = 1.0 - report.omega;
  report.best_K = results[best].plane;
  report.witness = results[best].witness;
  const auto agreeing = std::count_if(results.begin(), results.end(), [&](const StartResult& r) {
    return r.trace.value >= report.omega - options.agreement_tol;
  });
  report.converged = agreeing >= options.agreement_count;
  if (!results[best].trace.finished) {
    throw SolverFailure<DefectReport>(ErrorCode::kBudgetExhausted,
                                      "the best start ran out of evaluations before converging",
                                      report);
  }
  return report;
}

int counterexample_exponent(Index m, Index k) {
  require(k >= 1 && k <= m, ErrorCode::kPrecondition, "need 1 <= k <= m");
  const Index t = m - k + 2;
  return static_cast<int>(t % 2 == 0 ? t + 1 : t + 2);
}

Counterexample build_counterexample(Index m, Index k, Seed seed,
                                               const ConstructionOptions& options) {
  require(k > 1 && k <= m, ErrorCode::kPrecondition, "need 1 < k <= m");
  Counterexample out;
  out.m = m;
  out.k = k;
  out.p = counterexample_exponent(m, k);
  out.ambient_dim = options.ambient_dim > 0 ? options.ambient_dim : 2 * m;
  require(out.ambient_dim > m, ErrorCode::kPrecondition, "need N > m");

  const auto coords = coordinate_sets(out.ambient_dim, m);
  bool found = false;
  for (int draw = 0; draw < options.max_draws && !found; ++draw) {
    out.g = random_grassmann(out.ambient_dim, m, derive_seed(seed, static_cast<std::uint64_t>(draw)));
    out.draws = draw + 1;
    found = std::all_of(coords.begin(), coords.end(), [&](const std::vector<Index>& axes) {
      return gap_distance(out.g, Subspace::coordinate(out.ambient_dim, axes)) > options.coordinate_gap;
    });
  }
  if (!found) {
    throw Error(ErrorCode::kRejectionBudgetExhausted,
                "every draw of g was within " + std::to_string(options.coordinate_gap) +
                    " of a coordinate plane");
  }
  out.E = build_E_from_g(out.g);
  if (options.certify) {
    const auto space = LpSpace::finite(out.ambient_dim, out.p);
    out.report = certify_no_orthogonal_subspace(space, out.E, k, seed, options.certify_options);
  }
  return out;
}

namespace {

double rank_bound(Index n) { return static_cast<double>(n) + n / 2.0 - 0.5; }

// Shifted Legendre polynomials P_j(2t - 1), j < n, at the nodes (M x n).
Matrix legendre_basis(const Vector& t, Index n) {
  Matrix b(t.size(), n);
  for (Index i = 0; i < t.size(); ++i) {
    const double x = 2.0 * t(i) - 1.0;
    double prev = 1.0, cur = x;
    b(i, 0) = 1.0;
    if (n > 1) b(i, 1) = x;
    for (Index j = 1; j + 1 < n; ++j) {
      const double next = ((2.0 * j + 1.0) * x * cur - j * prev) / (j + 1.0);
      prev = cur;
      cur = next;
      b(i, j + 1) = cur;
    }
  }
  return b;
}

struct DualSpan {
  std::vector<Vector> coefficients;  // accepted polynomial coefficients
  Index draws = 0;
  Matrix q;  // orthonormal M x r, r small: greedy compression of span{w f_i}
  Matrix c;  // r x s coordinates, w f_i ~ q c_i
};

// Samples unit polynomials of constant sign on the grid and compresses the
// weighted duality images greedily (two-pass Gram-Schmidt). The compression
// keeps directions down to 1e-12 relative, well below the rank tolerance.
DualSpan sample_dual_span(const LpSpace& space, const Matrix& basis, Index count, Seed seed,
                          Index max_draws) {
  DualSpan out;
  const Index m = space.dim();
  Rng rng(seed);
  Matrix q(m, std::min<Index>(count, 64));
  Index r = 0;
  std::vector<Vector> coords;
  coords.reserve(count);
  while (static_cast<Index>(out.coefficients.size()) < count) {
    require(out.draws < max_draws, ErrorCode::kRejectionBudgetExhausted,
            "too few constant-sign polynomials among the draws");
    ++out.draws;
    const Vector c = gaussian_vector(rng, basis.cols());
    const Vector poly = basis * c;
    if (!((poly.array() > 0.0).all() || (poly.array() < 0.0).all())) continue;
    out.coefficients.push_back(c);

    const Vector a = space.weights().cwiseProduct(duality_map(space, poly));
    Vector coord = Vector::Zero(r + 1);
    Vector res = a;
    for (int pass = 0; pass < 2; ++pass) {
      const Vector h = q.leftCols(r).transpose() * res;
      coord.head(r) += h;
      res -= q.leftCols(r) * h;
    }
    const double rn = res.norm();
    if (rn > 1e-12 * a.norm() && r < count) {
      if (r == q.cols()) q.conservativeResize(Eigen::NoChange, std::min<Index>(2 * r, count));
      q.col(r) = res / rn;
      coord(r) = rn;
      ++r;
    } else {
      coord.conservativeResize(r);
    }
    coords.push_back(std::move(coord));
  }
  out.q = q.leftCols(r);
  out.c.resize(r, count);
  out.c.setZero();
  for (Index i = 0; i < count; ++i) out.c.col(i).head(coords[i].size()) = coords[i];
  return out;
}

struct SpanRank {
  Index rank;
  Vector sv;
  Matrix u;
};

SpanRank rank_of(const Matrix& c, Index rows, double tol) {
  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU);
  return {numerical_rank(svd.singularValues(), rows, c.cols(), tol), svd.singularValues(),
          svd.matrixU()};
}

struct Q1Core {
  LpSpace space;
  Matrix basis;
  DualSpan span;
  SpanRank first;
  Index d_doubled;
};

Q1Core q1_core(Index n, Index grid, Index count, Seed seed, const Q1Options& options) {
  require(n >= 1 && n % 2 == 1, ErrorCode::kPrecondition, "n must be odd");
  require(grid >= 1024, ErrorCode::kPrecondition, "grid size must be at least 1024");
  require(count >= 1, ErrorCode::kInvalidArgument, "sample_count must be positive");
  require(options.rank_tol > 0.0, ErrorCode::kInvalidArgument, "rank_tol must be positive");
  auto space = LpSpace::discretized_l01(3.0, grid, options.nodes_per_panel);
  Matrix basis = legendre_basis(space.nodes(), n);
  const Index total = options.check_saturation ? 2 * count : count;
  DualSpan span = sample_dual_span(space, basis, total, derive_seed(seed, 0),
                                   options.max_draws_per_sample * total);
  SpanRank first = rank_of(span.c.leftCols(count), space.dim(), options.rank_tol);
  Index doubled = first.rank;
  if (options.check_saturation) doubled = rank_of(span.c, space.dim(), options.rank_tol).rank;
  return {std::move(space), std::move(basis), std::move(span), std::move(first), doubled};
}

}  // namespace

RankLemmaReport rank_lemma_check(Index n, Index grid_size, Index sample_count, Seed seed,
                                 const Q1Options& options) {
  const Q1Core core = q1_core(n, grid_size, sample_count, seed, options);
  RankLemmaReport out;
  out.n = n;
  out.d = core.first.rank;
  out.d_doubled = core.d_doubled;
  out.bound = rank_bound(n);
  if (out.d != out.d_doubled) {
    throw SolverFailure<RankLemmaReport>(
        ErrorCode::kRankNotSaturated,
        "rank of span{f_i} changed from " + std::to_string(out.d) + " to " +
            std::to_string(out.d_doubled) + " when doubling the samples",
        out);
  }
  out.pass = static_cast<double>(out.d) >= out.bound;
  return out;
}

Q1Report q1_demo(Index n, Index grid_size, Index sample_count, Seed seed,
                 const Q1Options& options) {
  const Q1Core core = q1_core(n, grid_size, sample_count, seed, options);
  const Index m = core.space.dim();
  Q1Report out;
  out.n = n;
  out.grid_size = m;
  out.sample_count = sample_count;
  out.seed = seed;
  out.polynomial_draws = core.span.draws;
  out.d = core.first.rank;
  out.d_doubled = core.d_doubled;
  out.bound = rank_bound(n);
  out.H_dim = m - out.d;
  out.singular_values = core.first.sv.head(std::min<Index>(out.d + 2, core.first.sv.size()));
  if (out.d != out.d_doubled) {
    throw SolverFailure<Q1Report>(ErrorCode::kRankNotSaturated,
                                  "rank of span{f_i} changed from " + std::to_string(out.d) +
                                      " to " + std::to_string(out.d_doubled) +
                                      " when doubling the samples",
                                  out);
  }

  // H = {h : <f_i, h> = 0} is the Euclidean complement of qa = span{w f_i}.
  const Matrix qa = core.span.q * core.first.u.leftCols(out.d);
  auto sin_min_to_h = [&](const Matrix& b) {
    Eigen::JacobiSVD<Matrix> svd(qa.transpose() * b);
    return svd.singularValues().minCoeff();
  };

  // sup over unit h in H of |<f_i, h>| is the norm of w f_i off qa.
  for (Index i = 0; i < sample_count; ++i) {
    const Vector a =
        core.space.weights().cwiseProduct(duality_map(core.space, core.basis * core.span.coefficients[i]));
    out.duality_residual = std::max(out.duality_residual, (a - qa * (qa.transpose() * a)).norm());
  }

  const Subspace e_n = span_of(core.basis);
  out.min_principal_angle_E_H = std::asin(std::min(1.0, sin_min_to_h(e_n.basis())));

  for (int draw = 0; draw < options.max_f_draws; ++draw) {
    Subspace f = random_grassmann(m, out.d, derive_seed(seed, 1 + static_cast<std::uint64_t>(draw)));
    out.f_draws = draw + 1;
    const double to_h = std::asin(std::min(1.0, sin_min_to_h(f.basis())));
    const double to_e = principal_angles(f, e_n)(0);
    if (to_h > 1e-10 && to_e > 1e-10) {
      out.F_basis = std::move(f);
      out.min_principal_angle_F_H = to_h;
      out.min_principal_angle_F_E = to_e;
      out.separated = to_h > options.angle_tol;
      return out;
    }
  }
  throw SolverFailure<Q1Report>(ErrorCode::kTransversalityFailure,
                                "no sampled F met H and E_n trivially", out);
}

}  // namespace ortholab
