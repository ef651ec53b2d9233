#pragma once

#include <optional>
#include <vector>

#include "coevrp/instance.hpp"

namespace coevrp {

/// Per-position data of a fixed route, ready for the charging LP.
struct RouteLp {
  std::vector<NodeId> sequence;
  std::vector<double> precharge_battery;  // b-hat: arrival battery with zero charging
  std::vector<double> travel_min;         // leg i -> i+1, size zeta-1
  std::vector<double> service_min;
  std::vector<double> earliest;
  std::vector<double> latest;
  std::vector<double> charger_kw;  // 0 = no charger, delta pinned to zero
  double battery_kwh = 0.0;        // B
  double battery_min_kwh = 0.0;    // L
  double cost_per_min = 0.0;       // c_t
  bool electric = true;
  int company = 0;

  size_t size() const { return sequence.size(); }
};

struct ChargingPlan {
  std::vector<double> charge_kwh;     // delta per position
  std::vector<double> service_start;  // s per position
  double completion_min = 0.0;        // T
  double labor_cost = 0.0;            // c_t * T
};

enum class ChargingStatus { Optimal, BatteryInfeasible, TimeInfeasible };

struct ChargingResult {
  ChargingStatus status = ChargingStatus::Optimal;
  std::optional<ChargingPlan> plan;

  bool ok() const { return status == ChargingStatus::Optimal; }
};

/// Computes the zero-charge forward data for a route; throws on a forbidden arc.
RouteLp build_route_lp(const Instance& instance, int company,
                       const std::vector<NodeId>& route);

/// Minimal-completion charging schedule for one route. Zero charging is
/// returned outright whenever it is battery- and window-feasible; otherwise an
/// exact simplex solve decides. Infeasibility is split into battery
/// (cumulative charge bounds contradictory) and time (windows unreachable).
ChargingResult solve_charging(const RouteLp& route);

/// Joint schedule for the two routes of a collaborative solution: both
/// single-route models plus the meet-point synchronization band and optional
/// per-vehicle completion caps (used to enforce profit thresholds).
/// meet_pos_* index the meet point inside each sequence.
struct PairResult {
  ChargingStatus status = ChargingStatus::Optimal;
  std::optional<ChargingPlan> plan_first;
  std::optional<ChargingPlan> plan_second;
  bool ok() const { return status == ChargingStatus::Optimal; }
};
PairResult solve_charging_pair(const RouteLp& first, int meet_pos_first,
                               const RouteLp& second, int meet_pos_second,
                               double max_wait_min,
                               const std::optional<std::array<double, 2>>& completion_caps);

/// Exhaustive grid search over charge amounts, test oracle for the LP.
/// Requires size <= 6; resolution in kWh.
std::optional<ChargingPlan> grid_oracle(const RouteLp& route, double resolution_kwh);

}  // namespace coevrp
