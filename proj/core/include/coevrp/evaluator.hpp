#pragma once

#include <array>
#include <string>
#include <vector>

#include "coevrp/instance.hpp"
#include "coevrp/solution.hpp"

namespace coevrp {

namespace tol {
inline constexpr double kTimeMin = 1e-6;
inline constexpr double kEnergyKwh = 1e-6;
inline constexpr double kCostSek = 1e-6;
}  // namespace tol

/// Stable constraint ids used in violation reports.
namespace constraint {
inline constexpr const char* kProfitThreshold = "eq2_profit_threshold";
inline constexpr const char* kBatteryBounds = "eq5_battery_bounds";
inline constexpr const char* kBatteryPropagation = "eq6_battery_propagation";
inline constexpr const char* kChargeLimit = "eq7_charge_limit";
inline constexpr const char* kCapacity = "eq8_capacity";
inline constexpr const char* kMeetSync = "eq9_meet_sync";
inline constexpr const char* kExchangeAfterMeet = "eq10_exchange_after_meet";
inline constexpr const char* kTimePropagation = "eq11_time_propagation";
inline constexpr const char* kTimeWindow = "eq14_time_window";
inline constexpr const char* kVisitOnce = "eq15_visit_once";
inline constexpr const char* kOneMeetPoint = "eq16_one_meet_point";
inline constexpr const char* kSameMeetPoint = "eq17_same_meet_point";
inline constexpr const char* kDepotStart = "eq18_depot_start";
inline constexpr const char* kDepotEnd = "eq19_depot_end";
inline constexpr const char* kReservedOwner = "eq20_reserved_owner";
inline constexpr const char* kForbiddenArc = "forbidden_arc";
// Appendix A (multi-vehicle) specific ids
inline constexpr const char* kTransferOnce = "appA_transfer_once";
inline constexpr const char* kOneMeetPerVehicle = "appA_one_meet_per_vehicle";
inline constexpr const char* kPairingConsistency = "appA_pairing_consistency";
inline constexpr const char* kPairSameMeet = "appA_same_meet";
inline constexpr const char* kTransferService = "appA_transfer_service";
inline constexpr const char* kMeetRequiresTransfer = "appA_meet_requires_transfer";
inline constexpr const char* kTransferAtAttendedMeet = "appA_transfer_at_attended_meet";
inline constexpr const char* kMultiMeetSync = "appA_meet_sync";
inline constexpr const char* kMultiExchangeAfterMeet = "appA_exchange_after_meet";
}  // namespace constraint

struct Violation {
  std::string constraint_id;
  int company = -1;  // vehicle/company context, -1 when not applicable
  NodeId node = -1;
  double magnitude = 0.0;
  std::string detail;
};

struct EvalReport {
  bool feasible = false;
  std::vector<Violation> violations;
  double total_cost = 0.0;
  double energy_cost = 0.0;
  double labor_cost = 0.0;
  std::array<double, 2> profits{};
  std::array<bool, 2> threshold_ok{true, true};
};

struct BatteryStep {
  double arrival_kwh = 0.0;
  double charge_kwh = 0.0;
  double departure_kwh = 0.0;
};

struct BatteryTrace {
  std::vector<BatteryStep> steps;
  std::vector<Violation> violations;
};

/// Distance-based profit split for a shared customer: the owning company keeps
/// D(o_k, m) / (D(o_k, m) + D(m, j)) of the fee. `company` is the owner.
/// Throws when both legs have zero length.
double profit_ratio(const Instance& instance, int company, NodeId meet_point,
                    NodeId customer);

struct CostBreakdown {
  double total = 0.0;
  double energy = 0.0;
  double labor = 0.0;
};

/// Distance plus labor cost of a solution; throws on a forbidden arc.
CostBreakdown objective(const Instance& instance, const Solution& solution);

/// Net profit of one company under the distance-based split.
double company_profit(const Instance& instance, const Solution& solution, int company);

/// Forward battery propagation along a node sequence with given charges.
/// Starts full; violations are reported, never thrown.
BatteryTrace simulate_battery(const Instance& instance, int company,
                              const std::vector<NodeId>& route,
                              const std::vector<double>& charges);

/// Checks every model constraint directly on the visit sequences and returns
/// the full report; pure function of its inputs.
EvalReport validate(const Instance& instance, const Solution& solution);

/// Appendix-A validation for fleets with several vehicles per company.
EvalReport validate_multi(const Instance& instance, const MultiVehicleSolution& solution);

/// Appendix-A profit of one company (transfer-based revenue split).
double profit_multi(const Instance& instance, const MultiVehicleSolution& solution,
                    int company);

}  // namespace coevrp
