#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "coevrp/instance.hpp"
#include "coevrp/rng.hpp"
#include "coevrp/solution.hpp"

namespace coevrp {

struct AlnsConfig {
  double removal_fraction = 0.3;  // rho
  int iterations_per_segment = 100;
  int segments_per_run = 10;
  int runs = 5;
  double reward_best = 10.0;     // sigma1: new global best
  double reward_improve = 5.0;   // sigma2: better than current
  double reward_accept = 2.0;    // sigma3: accepted although worse
  double weight_decay = 0.8;     // lambda_w
  double start_temp_ratio = 0.05;  // a 5% worse move is accepted with p=0.5 at start
  double cooling = 0.9995;
  double sync_penalty_per_min = 0.0;  // 0 = default 10 * c_t
  int neighbor_k = 5;
  std::uint64_t seed = 1;
  double time_limit_s = 0.0;  // 0 = no wall-clock cap
};

AlnsConfig load_alns_config(const std::string& path);
std::string alns_config_to_json_text(const AlnsConfig& config);

enum class DestroyOp { Random = 0, Worst = 1, Related = 2 };
enum class RepairOp { Greedy = 0, Regret2 = 1 };

struct OperatorBank {
  std::array<double, 3> destroy_weight{1.0, 1.0, 1.0};
  std::array<double, 2> repair_weight{1.0, 1.0};
  std::array<double, 3> destroy_score{};
  std::array<double, 2> repair_score{};
  std::array<int, 3> destroy_uses{};
  std::array<int, 2> repair_uses{};
};

/// Segment-end weight update: w <- lambda*w + (1-lambda)*score/uses; operators
/// unused in the segment keep their weight. Scores and uses reset afterwards.
void update_weights(OperatorBank& bank, double weight_decay);

struct PartialSolution {
  std::array<std::vector<NodeId>, 2> sequences;  // depots and meet point retained
  std::optional<NodeId> meet_point;
  std::optional<int> restricted_company;
  std::vector<NodeId> removed;
};

/// Nearest-neighbor start per company with the meet point spliced in at the
/// cheapest feasible detour; charging completed by the LP. Throws when no
/// window-feasible construction is found.
Solution initial_solution(const Instance& instance, std::uint64_t seed);

/// Removes ceil(rho * |customers|) customers; depots and the meet point stay.
PartialSolution destroy(const Instance& instance, const Solution& solution,
                        DestroyOp op, double rho, Rng& rng);

/// Reinserts all removed customers at feasible positions under the placement
/// rules (reserved only in the owner's route, shared in the other route only
/// after the meet point). Returns nullopt when some customer has no position.
std::optional<Solution> repair(const Instance& instance, const PartialSolution& partial,
                               RepairOp op, Rng& rng);

/// 2-opt, relocate and neighbor move to first improvement, charging re-run on
/// every changed route.
Solution local_search(const Instance& instance, const Solution& solution);

using ProgressFn =
    std::function<void(int iteration, int segment, int run, double best_cost)>;

/// Three-layer ALNS: iterations inside segments inside runs. Returns the best
/// synchronization-feasible (and threshold-feasible, when enabled) solution;
/// status NoFeasibleSolution flags a best-effort answer.
Solution solve_alns(const Instance& instance, const AlnsConfig& config,
                    const ProgressFn& progress = {});

/// Same machinery restricted to one company, no meet point or exchange.
Solution solve_noncollab(const Instance& instance, int company,
                         const AlnsConfig& config, const ProgressFn& progress = {});

}  // namespace coevrp
