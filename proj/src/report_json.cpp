#include "report_json.hpp"

#include <cstdio>
#include <sstream>

namespace ortholab {

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
  return rows;
}

Json to_json(const Subspace& s) {
  return Json{{"N", s.ambient_dim()}, {"k", s.dim()}, {"basis", to_json(s.basis())}};
}

Json to_json(const ProjectionResult& r) {
  return Json{{"coefficients", to_json(r.coefficients)},
              {"point", to_json(r.point)},
              {"distance", r.distance},
              {"optimality_residual", r.optimality_residual},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

Json to_json(const DefectResult& r) {
  return Json{{"delta", r.delta}, {"witness", to_json(r.witness)}, {"evaluations", r.evaluations}};
}

Json to_json(const BadnessVerdict& v) {
  Json j{{"dim_normal_span", v.dim_normal_span},
         {"threshold", v.threshold},
         {"is_bad", v.is_bad},
         {"sampled_rank", v.sampled_rank},
         {"algebraic_rank", nullptr},
         {"arc_rank", nullptr},
         {"singular_values", to_json(v.singular_values)}};
  if (v.algebraic_rank) j["algebraic_rank"] = *v.algebraic_rank;
  if (v.arc_rank) j["arc_rank"] = *v.arc_rank;
  return j;
}

Json to_json(const DefectReport& r) {
  Json trace = Json::array();
  for (const auto& t : r.trace) {
    trace.push_back(Json{{"start_id", t.start_id},
                         {"seed", t.seed},
                         {"kind", t.kind},
                         {"value", t.value},
                         {"iterations", t.iterations},
                         {"finished", t.finished}});
  }
  return Json{{"omega", r.omega},
              {"epsilon", r.epsilon},
              {"converged", r.converged},
              {"starts", r.starts},
              {"seed", r.seed},
              {"best_K", to_json(r.best_K)},
              {"witness", to_json(r.witness)},
              {"trace", std::move(trace)}};
}

Json to_json(const Counterexample& c) {
  Json j{{"m", c.m},  {"k", c.k},         {"p", c.p}, {"N", c.ambient_dim},
         {"draws", c.draws}, {"g", to_json(c.g)}, {"E", to_json(c.E)}, {"certification", nullptr}};
  if (c.report) j["certification"] = to_json(*c.report);
  return j;
}

Json to_json(const Q1Report& r, bool with_basis) {
  Json f{{"N", r.F_basis.ambient_dim()}, {"k", r.F_basis.dim()}};
  if (with_basis) f["basis"] = to_json(r.F_basis.basis());
  return Json{{"n", r.n},
              {"p", r.p},
              {"grid_size", r.grid_size},
              {"sample_count", r.sample_count},
              {"seed", r.seed},
              {"polynomial_draws", r.polynomial_draws},
              {"d", r.d},
              {"d_doubled_samples", r.d_doubled},
              {"bound", r.bound},
              {"H_dim", r.H_dim},
              {"F_basis", std::move(f)},
              {"F_draws", r.f_draws},
              {"min_principal_angle_F_H", r.min_principal_angle_F_H},
              {"min_principal_angle_F_E", r.min_principal_angle_F_E},
              {"min_principal_angle_E_H", r.min_principal_angle_E_H},
              {"duality_residual", r.duality_residual},
              {"separated", r.separated},
              {"singular_values", to_json(r.singular_values)}};
}

Json to_json(const RankLemmaReport& r) {
  return Json{{"n", r.n}, {"d", r.d}, {"d_doubled_samples", r.d_doubled}, {"bound", r.bound}, {"pass", r.pass}};
}

Json to_json(const OrthoSolution& s) {
  return Json{{"v", to_json(s.v)},
              {"coefficients", to_json(s.coefficients)},
              {"residual", s.residual},
              {"dist_check", s.dist_check},
              {"restarts_used", s.restarts_used},
              {"iterations", s.iterations}};
}

Json to_json(const KkmCheck& k) {
  return Json{{"trials", k.trials},
              {"successes", k.successes},
              {"success_rate", k.success_rate},
              {"worst_residual", k.worst_residual},
              {"worst_dist_error", k.worst_dist_error}};
}

std::string trace_csv(const DefectReport& r) {
  std::ostringstream out;
  out << "start_id,seed,kind,value,iterations,finished\n";
  char buf[64];
  for (const auto& t : r.trace) {
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    out << t.start_id << ',' << t.seed << ',' << t.kind << ',' << buf << ',' << t.iterations << ','
        << (t.finished ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace ortholab
