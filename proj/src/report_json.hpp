#pragma once

#include <json.hpp>

#include "ortholab/borsuk.hpp"
#include "ortholab/counterexample.hpp"
#include "ortholab/normal_span.hpp"
#include "ortholab/projection.hpp"

namespace ortholab {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);  // array of rows
Json to_json(const Subspace& s);  // {"N", "k", "basis"}
Json to_json(const ProjectionResult& r);
Json to_json(const DefectResult& r);
Json to_json(const BadnessVerdict& v);
Json to_json(const DefectReport& r);
Json to_json(const Counterexample& c);
Json to_json(const Q1Report& r, bool with_basis);
Json to_json(const RankLemmaReport& r);
Json to_json(const OrthoSolution& s);
Json to_json(const KkmCheck& k);

/// One row per start: start_id,seed,kind,value,iterations,finished.
std::string trace_csv(const DefectReport& r);

}  // namespace ortholab
