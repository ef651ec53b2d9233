#pragma once

#include <string>

#include "coevrp/instance.hpp"
#include "coevrp/solution.hpp"

namespace coevrp {

struct EvalReport;  // evaluator.hpp

/// JSON (de)serialization. The instance schema is documented in the README:
/// sections `nodes`, `distance_km`, `vehicles`, `costs`, `modes`; forbidden
/// arcs are encoded as null. Parse and schema errors throw
/// std::invalid_argument with the offending field path.
Instance load_instance(const std::string& path);
Instance instance_from_json_text(const std::string& text, const std::string& origin);
void save_instance(const Instance& instance, const std::string& path);
std::string instance_to_json_text(const Instance& instance);

Solution load_solution(const std::string& path);
void save_solution(const Instance& instance, const Solution& solution,
                   const std::string& path);
std::string solution_to_json_text(const Instance& instance, const Solution& solution);
std::string report_to_json_text(const EvalReport& report);

/// Field-by-field equality on all numeric and structural content.
bool instances_equal(const Instance& a, const Instance& b);

}  // namespace coevrp
