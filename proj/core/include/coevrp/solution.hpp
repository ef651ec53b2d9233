#pragma once

#include <array>
#include <optional>
#include <vector>

#include "coevrp/instance.hpp"

namespace coevrp {

/// One stop of a route with its schedule and battery bookkeeping.
struct Visit {
  NodeId node = 0;
  double service_start = 0.0;        // s_i, minutes
  double charge_kwh = 0.0;           // delta_i
  double arrival_battery_kwh = 0.0;  // b_i
};

struct Route {
  int company = 0;
  std::vector<Visit> visits;  // depot ... depot

  bool empty() const { return visits.size() <= 2; }
  /// Arrival time at the end depot (T^k); zero for a bare depot-depot route.
  double completion_min() const {
    return visits.empty() ? 0.0 : visits.back().service_start;
  }
  /// Position of `id` in the visit sequence, -1 when absent.
  int position_of(NodeId id) const {
    for (size_t p = 0; p < visits.size(); ++p)
      if (visits[p].node == id) return static_cast<int>(p);
    return -1;
  }
};

enum class SolveStatus { Feasible, BestEffort, NoFeasibleSolution };

struct Solution {
  std::array<Route, 2> routes;
  std::optional<NodeId> meet_point;       // absent in non-collaborative solutions
  std::optional<int> restricted_company;  // set when only one company was planned
  SolveStatus status = SolveStatus::Feasible;
  double total_cost = 0.0;
  double energy_cost = 0.0;
  double labor_cost = 0.0;
  std::array<double, 2> profits{};

  bool collaborative() const { return meet_point.has_value(); }
};

/// Appendix-A style solution: any number of vehicles per company, explicit
/// vehicle pairings and per-customer transfers.
struct MultiRoute {
  int company = 0;
  int vehicle = 0;  // index within the company's fleet
  std::vector<Visit> visits;
};

struct MeetPairing {
  int vehicle1 = 0;  // index within company 1's fleet
  int vehicle2 = 0;  // index within company 2's fleet
  NodeId meet_point = 0;
};

struct Transfer {
  NodeId customer = 0;
  NodeId meet_point = 0;
};

struct MultiVehicleSolution {
  std::vector<MultiRoute> routes;
  std::vector<MeetPairing> pairings;
  std::vector<Transfer> transfers;
};

/// Embeds a two-vehicle solution into the multi-vehicle form: one vehicle per
/// company, a single pairing at the chosen meet point, transfers for every
/// customer served by the non-owning company.
MultiVehicleSolution to_multi(const Instance& instance, const Solution& solution);

}  // namespace coevrp
