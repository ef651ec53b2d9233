#pragma once

#include <optional>
#include <string>

#include "coevrp/alns.hpp"
#include "coevrp/instance.hpp"
#include "coevrp/solution.hpp"

namespace coevrp {

struct ScenarioResult {
  std::string model;
  bool feasible = false;
  double total_cost = 0.0;
  std::array<double, 2> profits{};
};

/// The three-block comparison behind the reporting tables: per-company
/// baselines, collaboration without thresholds, collaboration with the
/// baselines as thresholds.
struct CompareReport {
  std::string instance_name;
  std::uint64_t seed = 0;
  std::string config_digest;
  ScenarioResult noncollab;
  std::array<bool, 2> noncollab_company_ok{};
  std::array<double, 2> noncollab_profit{};
  ScenarioResult collab_free;
  ScenarioResult collab_thresholds;
};

struct CompareOptions {
  bool use_exact = false;  // exact solvers instead of ALNS (small instances)
  int alns_repeats = 1;    // best-of-N seeds per scenario
};

CompareReport run_compare(const Instance& instance, const AlnsConfig& config,
                          const CompareOptions& options = {});

std::string compare_to_csv(const CompareReport& report);
std::string compare_to_json_text(const CompareReport& report);

/// Scenario name for the mode flags, e.g. EVRPTW or CoVRPMP-TW.
std::string model_name(const Instance& instance, bool collaborative);

/// Marks exactly the listed customer labels as shared, everything else
/// reserved; unknown labels raise.
Instance with_shared_set(const Instance& instance,
                         const std::vector<std::string>& labels);

/// Random same-length windows: every customer gets latest-earliest =
/// window_len inside [0, horizon]; r*-style reshuffle controlled by the seed.
Instance with_tw_profile(const Instance& instance, double window_len_min,
                         double horizon_min, std::uint64_t seed);

}  // namespace coevrp
