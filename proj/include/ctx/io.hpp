#pragma once
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ctx/csw.hpp"
#include "ctx/kscolor.hpp"
#include "ctx/onto.hpp"
#include "ctx/polytope.hpp"
#include "ctx/quantum.hpp"
#include "ctx/scenario.hpp"

namespace ctx {

using Json = nlohmann::ordered_json;

Json load_json(const std::filesystem::path& path);

// A number in a data file: "p/q" strings and JSON integers are exact, JSON
// floats are not.
struct ParsedNumber {
  Rational exact;
  double value = 0;
  bool is_float = false;
};
ParsedNumber parse_number(const Json& j, const std::string& where);

MarginalScenario scenario_from_json(const Json& j);
Json to_json(const MarginalScenario& s);

// "scenario" may be inline or a path relative to base_dir. Any JSON float
// makes the whole model floating point.
AnyModel model_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json to_json(const ExactModel& m);
Json to_json(const FloatModel& m);

ExactExpectations expectations_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json to_json(const ExactExpectations& e);

// Without a "scenario" field the scenario is the closure of the coefficient keys.
BooleInequality inequality_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json to_json(const BooleInequality& ineq);
Json halfspace_json(const MarginalScenario& s, const Halfspace& h);

CMatrix matrix_from_json(const Json& j);
Json to_json(const CMatrix& m);

// "state", "observables": name -> matrix, optional "assignment": scenario name -> observable name.
Realization realization_from_json(const Json& j);
Json to_json(const Realization& r);

ExclusivityGraph graph_from_json(const Json& j);
Json to_json(const ExclusivityGraph& g);

OrthogonalityStructure structure_from_json(const Json& j);

// Witness assignments print as "+-+" over the scenario observables.
Json to_json(const ContextualityVerdict& v, const MarginalScenario& s);
Json to_json(const SimulationReport& r);

}  // namespace ctx
