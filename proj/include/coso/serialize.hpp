#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coso/ccde_sim.hpp"
#include "coso/entropy_oracle.hpp"
#include "coso/par_engine.hpp"
#include "coso/plan_validate.hpp"
#include "coso/so_planner.hpp"
#include "coso/so_tree.hpp"

namespace coso {

using Json = nlohmann::ordered_json;

// Instance documents:
//   {"users": [1,2,3], "model": "bits",   "bits":   {"1": ["a","b"], ...}}
//   {"users": [1,2],   "model": "table",  "table":  {"[]": "0", "[1]": "1", "[1,2]": "3/2", ...}}
//   {"users": [1,2],   "model": "linear", "linear": {"1": [[1,0],[0,1]], "2": [[1,1]], "field": 2}}
EntropyOracle load_instance(const Json& doc);
EntropyOracle load_instance_text(const std::string& text);
EntropyOracle load_instance_file(const std::string& path);
Json instance_to_json(const EntropyOracle& oracle);

Json rational_json(const Rational& v);
Rational rational_from(const Json& v);

// Sorted id list.
Json set_json(const EntropyOracle& oracle, UserSet s);
UserSet set_from(const EntropyOracle& oracle, const Json& v);
// Blocks as sorted id lists, ordered by least id.
Json partition_json(const EntropyOracle& oracle, const Partition& p);
// {"id": "p/q"} in ascending id order; only the listed carrier when given.
Json rates_json(const EntropyOracle& oracle, const RateVector& r);
Json rates_json(const EntropyOracle& oracle, const RateVector& r, UserSet carrier);
RateVector rates_from(const EntropyOracle& oracle, const Json& v);
Json ids_json(const EntropyOracle& oracle, const std::vector<int>& positions);

Json pwl_json(const PwlFn& f);
Json segmented_json(const EntropyOracle& oracle, const Segmented<Partition>& q);
Json psp_json(const EntropyOracle& oracle, const Psp& psp);
Json par_json(const EntropyOracle& oracle, const ParOutput& out);
Json oracle_report_json(const EntropyOracle& oracle, const OracleReport& report);
Json two_stage_json(const EntropyOracle& oracle, const TwoStageResult& res, Model model);

Json plan_json(const EntropyOracle& oracle, const SoPlan& plan);
SoPlan plan_from(const EntropyOracle& oracle, const Json& doc);
Json report_json(const PlanReport& report);
Json tree_json(const SoTree& tree);
Json sim_json(const SimReport& report);
Json trace_json(const RecursiveTrace& trace);

std::string read_file(const std::string& path);

}  // namespace coso
