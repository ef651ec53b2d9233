#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coevrp/instance.hpp"
#include "coevrp/solution.hpp"

namespace coevrp {

struct ExactConfig {
  int max_customers = 14;
  double time_limit_s = std::numeric_limits<double>::infinity();  // per subproblem
  bool parallel_branches = false;
};

struct BranchResult {
  NodeId meet_point = -1;
  std::optional<Solution> best_solution;
  bool proven_optimal = false;
  double lower_bound = 0.0;
  std::uint64_t nodes_explored = 0;
};

struct ExactResult {
  std::optional<Solution> solution;
  bool proven_optimal = false;
  std::vector<BranchResult> branches;
};

/// Optimal two-route plan with the meet point fixed: depth-first
/// branch-and-bound over shared-customer assignments and visit orders,
/// leaves completed by the charging LP with the synchronization band and
/// profit-threshold caps enforced by a joint two-route solve.
BranchResult solve_subproblem(const Instance& instance, NodeId meet_point,
                              const ExactConfig& config = {});

/// Globally optimal collaborative plan: independent meet-point branches,
/// ties broken toward the lower meet-point index.
ExactResult solve_exact(const Instance& instance, const ExactConfig& config = {});

/// Optimal single-company route over the company's own customers, no meet
/// point. Returns a no-solution result when the windows are unreachable.
struct NonCollabResult {
  std::optional<Solution> solution;
  bool proven_optimal = false;
  std::uint64_t nodes_explored = 0;
};
NonCollabResult solve_noncollab_exact(const Instance& instance, int company,
                                      const ExactConfig& config = {});

}  // namespace coevrp
