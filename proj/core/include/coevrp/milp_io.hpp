#pragma once

#include <string>

#include "coevrp/instance.hpp"
#include "coevrp/solution.hpp"

namespace coevrp {

/// Writes the fixed-meet-point MILP in CPLEX LP format. Variables are named
/// canonically (x_k_i_j, y_k_j, z_k_i, s_k_i, b_k_i, d_k_i, st_k_i, t_k,
/// phi_k) with k 1-based and node indices from the instance table. Battery
/// rows are omitted for conventional vehicles, window bounds when windows are
/// ignored, threshold rows when thresholds are disabled.
void export_milp(const Instance& instance, NodeId meet_point, const std::string& path);

/// Reads a `variable value` assignment (one per line, '#' or '\' comments) as
/// produced by external solvers and rebuilds the corresponding Solution.
Solution import_milp_solution(const Instance& instance, const std::string& path);

}  // namespace coevrp
