#include "ortholab/ortholab.h"

#include <cmath>
#include <new>
#include <sstream>
#include <string>

#include "ortholab/borsuk.hpp"
#include "ortholab/counterexample.hpp"
#include "ortholab/error.hpp"
#include "ortholab/normal_span.hpp"
#include "ortholab/projection.hpp"
#include "ortholab/random.hpp"
#include "report_json.hpp"

using namespace ortholab;

struct ortho_space {
  LpSpace space;
};

struct ortho_subspace {
  Subspace sub;
};

struct ortho_report {
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string last_error;

ortho_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return ORTHO_INVALID_ARGUMENT;
    case ErrorCode::kPrecondition: return ORTHO_PRECONDITION;
    case ErrorCode::kZeroVector: return ORTHO_ZERO_VECTOR;
    case ErrorCode::kRankDeficient: return ORTHO_RANK_DEFICIENT;
    case ErrorCode::kDimensionMismatch: return ORTHO_DIMENSION_MISMATCH;
    case ErrorCode::kChartFailure: return ORTHO_CHART_FAILURE;
    case ErrorCode::kDegenerateFunctional: return ORTHO_DEGENERATE_FUNCTIONAL;
    case ErrorCode::kNoConvergence: return ORTHO_NO_CONVERGENCE;
    case ErrorCode::kBudgetExhausted: return ORTHO_BUDGET_EXHAUSTED;
    case ErrorCode::kExistenceSearchFailed: return ORTHO_EXISTENCE_SEARCH_FAILED;
    case ErrorCode::kUnstable: return ORTHO_UNSTABLE;
    case ErrorCode::kRankNotSaturated: return ORTHO_RANK_NOT_SATURATED;
    case ErrorCode::kTransversalityFailure: return ORTHO_TRANSVERSALITY_FAILURE;
    case ErrorCode::kRejectionBudgetExhausted: return ORTHO_REJECTION_BUDGET;
  }
  return ORTHO_INTERNAL;
}

ortho_status fail(ortho_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs f, translating exceptions into status codes. Solver failures that
// carry no best result still yield a report with "best": null when `out`
// is given.
template <class F>
ortho_status guarded(F&& f, ortho_report_t** out = nullptr) {
  try {
    last_error.clear();
    f();
    return ORTHO_OK;
  } catch (const Error& e) {
    if (out && is_solver_failure(e.code()) && !*out) {
      *out = new ortho_report{Json{{"best", nullptr}}.dump(), {}};
    }
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ORTHO_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ORTHO_INTERNAL, e.what());
  } catch (...) {
    return fail(ORTHO_INTERNAL, "unknown error");
  }
}

// Produces a report from run(); on SolverFailure<Result> the body is
// {"best": ...} and the failure status is returned.
template <class Result, class Run, class Body>
void with_best(ortho_report_t** out, Run&& run, Body&& body) {
  try {
    Result r = run();
    auto [json, csv] = body(r);
    *out = new ortho_report{json.dump(), std::move(csv)};
  } catch (const SolverFailure<Result>& e) {
    auto [json, csv] = body(e.best());
    *out = new ortho_report{Json{{"best", std::move(json)}}.dump(), std::move(csv)};
    throw;
  }
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

ortho_options_t resolved(const ortho_options_t* options) {
  ortho_options_t o;
  ortho_options_init(&o);
  if (options) o = *options;
  return o;
}

Vector vector_of(const double* v, Index n) {
  need(v, "vector");
  return Eigen::Map<const Vector>(v, n);
}

Matrix matrix_of(const double* data, int64_t rows, int64_t cols) {
  need(data, "matrix");
  require(rows >= 1 && cols >= 1, ErrorCode::kInvalidArgument, "matrix must be nonempty");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      data, rows, cols);
}

DefectOptions defect_options(const ortho_options_t& o) {
  DefectOptions d;
  d.seed = o.seed;
  d.angle_grid = o.angle_grid;
  d.solver.opt_tol = o.opt_tol;
  return d;
}

CertifyOptions certify_options(const ortho_options_t& o) {
  CertifyOptions c;
  if (o.starts > 0) c.random_starts = static_cast<int>(o.starts);
  if (o.budget > 0) c.max_evaluations = static_cast<int>(o.budget);
  c.threads = o.threads;
  c.final_defect = defect_options(o);
  return c;
}

NormalSpanOptions span_options(const ortho_options_t& o) {
  NormalSpanOptions s;
  s.samples = o.samples;
  s.rank_tol = o.rank_tol;
  s.seed = o.seed;
  return s;
}

Q1Options q1_options(const ortho_options_t& o) {
  Q1Options q;
  q.rank_tol = o.rank_tol;
  return q;
}

Index q1_samples(const ortho_options_t& o) { return o.samples > 0 ? o.samples : 2000; }

template <class T>
std::string number(T x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

extern "C" {

const char* ortho_status_name(ortho_status status) {
  switch (status) {
    case ORTHO_OK: return "ok";
    case ORTHO_INVALID_ARGUMENT: return "invalid_argument";
    case ORTHO_PRECONDITION: return "precondition";
    case ORTHO_ZERO_VECTOR: return "zero_vector";
    case ORTHO_RANK_DEFICIENT: return "rank_deficient";
    case ORTHO_DIMENSION_MISMATCH: return "dimension_mismatch";
    case ORTHO_CHART_FAILURE: return "coordinate_chart_failure";
    case ORTHO_DEGENERATE_FUNCTIONAL: return "degenerate_functional";
    case ORTHO_NO_CONVERGENCE: return "no_convergence";
    case ORTHO_BUDGET_EXHAUSTED: return "budget_exhausted";
    case ORTHO_EXISTENCE_SEARCH_FAILED: return "existence_search_failed";
    case ORTHO_UNSTABLE: return "unstable";
    case ORTHO_RANK_NOT_SATURATED: return "rank_not_saturated";
    case ORTHO_TRANSVERSALITY_FAILURE: return "transversality_failure";
    case ORTHO_REJECTION_BUDGET: return "rejection_budget_exhausted";
    case ORTHO_INTERNAL: return "internal";
  }
  return "unknown";
}

int ortho_status_is_solver_failure(ortho_status status) {
  return status >= ORTHO_NO_CONVERGENCE && status <= ORTHO_REJECTION_BUDGET;
}

const char* ortho_last_error(void) { return last_error.c_str(); }

const char* ortho_version(void) { return "0.1.0"; }

ortho_status ortho_space_finite(int64_t n, double p, ortho_space_t** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ortho_space{LpSpace::finite(n, p)};
  });
}

ortho_status ortho_space_l01(double p, int64_t grid, ortho_space_t** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ortho_space{LpSpace::discretized_l01(p, grid > 0 ? grid : 2048)};
  });
}

int64_t ortho_space_dim(const ortho_space_t* space) { return space ? space->space.dim() : 0; }
double ortho_space_p(const ortho_space_t* space) { return space ? space->space.p() : 0.0; }
void ortho_space_free(ortho_space_t* space) { delete space; }

ortho_status ortho_subspace_span(const double* data, int64_t n, int64_t k, ortho_subspace_t** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ortho_subspace{span_of(matrix_of(data, n, k))};
  });
}

ortho_status ortho_subspace_kernel(const double* data, int64_t n, int64_t m,
                                   ortho_subspace_t** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ortho_subspace{kernel_of(matrix_of(data, n, m))};
  });
}

ortho_status ortho_subspace_coordinate(int64_t n, const int64_t* axes, int64_t k,
                                       ortho_subspace_t** out) {
  return guarded([&] {
    need(out, "out");
    need(axes, "axes");
    std::vector<Index> list(axes, axes + k);
    *out = new ortho_subspace{Subspace::coordinate(n, list)};
  });
}

ortho_status ortho_subspace_random(int64_t n, int64_t k, uint64_t seed, ortho_subspace_t** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ortho_subspace{random_grassmann(n, k, seed)};
  });
}

ortho_status ortho_subspace_gamma(const double* gamma, int64_t n, ortho_subspace_t** out) {
  return guarded([&] {
    need(out, "out");
    require(n >= 3, ErrorCode::kInvalidArgument, "gamma needs N >= 3");
    GammaParam g;
    g.gamma = matrix_of(gamma, n - 2, 2);
    *out = new ortho_subspace{gamma_to_subspace(g)};
  });
}

int64_t ortho_subspace_ambient_dim(const ortho_subspace_t* s) { return s ? s->sub.ambient_dim() : 0; }
int64_t ortho_subspace_dim(const ortho_subspace_t* s) { return s ? s->sub.dim() : 0; }

ortho_status ortho_subspace_basis(const ortho_subspace_t* s, double* out, size_t len) {
  return guarded([&] {
    need(s, "subspace");
    need(out, "out");
    const Matrix& b = s->sub.basis();
    require(len >= static_cast<size_t>(b.size()), ErrorCode::kInvalidArgument, "buffer too small");
    for (Index i = 0; i < b.rows(); ++i)
      for (Index j = 0; j < b.cols(); ++j) out[i * b.cols() + j] = b(i, j);
  });
}

void ortho_subspace_free(ortho_subspace_t* s) { delete s; }

void ortho_options_init(ortho_options_t* o) {
  if (!o) return;
  o->seed = 0;
  o->threads = 0;
  o->opt_tol = 1e-8;
  o->tol = 1e-9;
  o->rank_tol = 1e-8;
  o->eps = 0.0;
  o->samples = 0;
  o->starts = 0;
  o->trials = 100;
  o->budget = 0;
  o->threshold = 0;
  o->angle_grid = 720;
  o->certify = 0;
}

ortho_status ortho_project(const ortho_space_t* space, const double* v, const ortho_subspace_t* L,
                           const ortho_options_t* options, ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(space, "space"), need(L, "subspace"), need(out, "out");
        const auto o = resolved(options);
        SolverOptions so;
        so.opt_tol = o.opt_tol;
        const Vector x = vector_of(v, space->space.dim());
        with_best<ProjectionResult>(
            out, [&] { return metric_project(space->space, x, L->sub, so); },
            [](const ProjectionResult& r) { return std::pair{to_json(r), std::string{}}; });
      },
      out);
}

ortho_status ortho_distance(const ortho_space_t* space, const double* v, const ortho_subspace_t* L,
                            const ortho_options_t* options, ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(space, "space"), need(L, "subspace"), need(out, "out");
        const auto o = resolved(options);
        SolverOptions so;
        so.opt_tol = o.opt_tol;
        const Vector x = vector_of(v, space->space.dim());
        auto body = [](const ProjectionResult& r) {
          return std::pair{Json{{"distance", r.distance}, {"optimality_residual", r.optimality_residual}},
                           std::string{}};
        };
        with_best<ProjectionResult>(
            out, [&] { return metric_project(space->space, x, L->sub, so); }, body);
      },
      out);
}

ortho_status ortho_test_vector(const ortho_space_t* space, const double* v,
                               const ortho_subspace_t* E, const ortho_options_t* options,
                               ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(space, "space"), need(E, "subspace"), need(out, "out");
        const auto o = resolved(options);
        Vector x = vector_of(v, space->space.dim());
        const double scale = norm(space->space, x);
        require(scale > 0.0, ErrorCode::kZeroVector, "v must be nonzero");
        x /= scale;
        const double residual = orthogonality_residual(space->space, x, E->sub);
        SolverOptions so;
        so.opt_tol = o.opt_tol;
        const double dist = distance(space->space, x, E->sub, so);
        *out = new ortho_report{Json{{"orthogonal", residual <= o.tol},
                                     {"residual", residual},
                                     {"tol", o.tol},
                                     {"distance", dist},
                                     {"unit_v", to_json(x)}}
                                    .dump(),
                                {}};
      },
      out);
}

ortho_status ortho_test_subspace(const ortho_space_t* space, const ortho_subspace_t* K,
                                 const ortho_subspace_t* E, const ortho_options_t* options,
                                 ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(space, "space"), need(K, "K"), need(E, "E"), need(out, "out");
        const auto o = resolved(options);
        require(o.eps >= 0.0 && o.eps < 1.0, ErrorCode::kPrecondition, "eps must lie in [0, 1)");
        const DefectOptions d = defect_options(o);
        auto body = [&](const DefectResult& r) {
          return std::pair{Json{{"eps_orthogonal", r.delta >= 1.0 - o.eps - d.slack},
                                {"eps", o.eps},
                                {"delta", r.delta},
                                {"witness", to_json(r.witness)},
                                {"evaluations", r.evaluations}},
                           std::string{}};
        };
        with_best<DefectResult>(
            out, [&] { return subspace_ortho_defect(space->space, K->sub, E->sub, d); }, body);
      },
      out);
}

ortho_status ortho_badness(const ortho_space_t* space, const ortho_subspace_t* L,
                           const ortho_options_t* options, ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(space, "space"), need(L, "subspace"), need(out, "out");
        const auto o = resolved(options);
        const Index threshold = o.threshold > 0 ? o.threshold : default_threshold(space->space.p(), L->sub.dim());
        const auto v = classify(space->space, L->sub, threshold, span_options(o));
        *out = new ortho_report{to_json(v).dump(), {}};
      },
      out);
}

ortho_status ortho_badness_sweep(double p, int64_t n, int64_t k, const ortho_options_t* options,
                                 ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(out, "out");
        const auto o = resolved(options);
        const Index threshold = o.threshold > 0 ? o.threshold : default_threshold(p, k);
        BadnessOptions bo;
        bo.span = span_options(o);
        bo.threads = o.threads;
        const auto verdicts = classify_random_sections(p, n, k, threshold, o.trials, o.seed, bo);
        std::string csv = "trial,seed,rank,is_bad\n";
        Index bad = 0;
        for (Index i = 0; i < static_cast<Index>(verdicts.size()); ++i) {
          bad += verdicts[i].is_bad;
          csv += std::to_string(i) + ',' + std::to_string(derive_seed(o.seed, static_cast<std::uint64_t>(i))) + ',' +
                 std::to_string(verdicts[i].dim_normal_span) + ',' + (verdicts[i].is_bad ? "1" : "0") + '\n';
        }
        const double fraction = static_cast<double>(bad) / static_cast<double>(verdicts.size());
        *out = new ortho_report{Json{{"p", p},
                                     {"N", n},
                                     {"k", k},
                                     {"threshold", threshold},
                                     {"trials", o.trials},
                                     {"bad", bad},
                                     {"badness_fraction", fraction}}
                                    .dump(),
                                std::move(csv)};
      },
      out);
}

ortho_status ortho_certify(const ortho_space_t* space, const ortho_subspace_t* E, int64_t k,
                           const ortho_options_t* options, ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(space, "space"), need(E, "E"), need(out, "out");
        const auto o = resolved(options);
        with_best<DefectReport>(
            out,
            [&] { return certify_no_orthogonal_subspace(space->space, E->sub, k, o.seed, certify_options(o)); },
            [](const DefectReport& r) { return std::pair{to_json(r), trace_csv(r)}; });
      },
      out);
}

ortho_status ortho_borsuk(const ortho_space_t* space, const ortho_subspace_t* E,
                          const ortho_subspace_t* F, const ortho_options_t* options,
                          ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(space, "space"), need(E, "E"), need(F, "F"), need(out, "out");
        const auto o = resolved(options);
        BorsukOptions bo;
        if (o.starts > 0) bo.restarts = static_cast<int>(o.starts);
        auto body = [&](const OrthoSolution& s) {
          Json j = to_json(s);
          if (o.trials > 1) j["kkm"] = to_json(verify_kkm(space->space, E->sub, F->sub, o.trials, o.seed, bo, o.threads));
          return std::pair{std::move(j), std::string{}};
        };
        with_best<OrthoSolution>(
            out, [&] { return find_orthogonal_unit(space->space, E->sub, F->sub, o.seed, bo); }, body);
      },
      out);
}

ortho_status ortho_q1(int64_t n, int64_t grid, const ortho_options_t* options, ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(out, "out");
        const auto o = resolved(options);
        with_best<Q1Report>(
            out, [&] { return q1_demo(n, grid > 0 ? grid : 2048, q1_samples(o), o.seed, q1_options(o)); },
            [](const Q1Report& r) { return std::pair{to_json(r, true), std::string{}}; });
      },
      out);
}

ortho_status ortho_rank_lemma(int64_t n, int64_t grid, const ortho_options_t* options,
                              ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(out, "out");
        const auto o = resolved(options);
        with_best<RankLemmaReport>(
            out,
            [&] { return rank_lemma_check(n, grid > 0 ? grid : 2048, q1_samples(o), o.seed, q1_options(o)); },
            [](const RankLemmaReport& r) { return std::pair{to_json(r), std::string{}}; });
      },
      out);
}

ortho_status ortho_bookkeeping(int64_t m, int64_t k, int64_t n, const ortho_options_t* options,
                               ortho_report_t** out) {
  if (out) *out = nullptr;
  return guarded(
      [&] {
        need(out, "out");
        const auto o = resolved(options);
        ConstructionOptions po;
        po.ambient_dim = n;
        po.certify = o.certify != 0;
        po.certify_options = certify_options(o);
        try {
          const auto c = build_counterexample(m, k, o.seed, po);
          std::string csv = c.report ? trace_csv(*c.report) : std::string{};
          *out = new ortho_report{to_json(c).dump(), std::move(csv)};
        } catch (const SolverFailure<DefectReport>& e) {
          *out = new ortho_report{Json{{"best", Json{{"p", counterexample_exponent(m, k)}, {"certification", to_json(e.best())}}}}.dump(),
                                  trace_csv(e.best())};
          throw;
        }
      },
      out);
}

const char* ortho_report_json(const ortho_report_t* report) { return report ? report->json.c_str() : ""; }
const char* ortho_report_csv(const ortho_report_t* report) { return report ? report->csv.c_str() : ""; }
void ortho_report_free(ortho_report_t* report) { delete report; }

}  // extern "C"
