#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace coevrp {

using NodeId = std::int32_t;

/// Sentinel for forbidden arcs in the distance matrix.
inline constexpr double kForbiddenArc = std::numeric_limits<double>::infinity();
/// Open upper end of a time window.
inline constexpr double kNoDeadline = std::numeric_limits<double>::infinity();

enum class NodeKind { Depot, Customer, MeetPoint };
enum class CustomerKind { Reserved, Shared };
enum class EvMode { Electric, Conventional };
enum class TwMode { Enforced, Ignored };

/// One row of the node table. Fields that do not apply to a kind are left at
/// their defaults (e.g. price on a meet point).
struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Customer;
  int company = -1;  // 0 or 1 for depots and customers, -1 for meet points
  CustomerKind customer_kind = CustomerKind::Shared;
  double demand = 0.0;        // units
  double price = 0.0;         // SEK
  double earliest = 0.0;      // minutes
  double latest = kNoDeadline;
  double service_min = 0.0;   // minutes of unloading/loading
  double charger_kw = 0.0;    // 0 = no charger at this node
  std::string label;
  std::optional<std::array<double, 2>> xy;  // km, only set for generated instances

  bool has_charger() const { return charger_kw > 0.0; }
};

struct VehicleParams {
  int company = 0;
  double capacity = 0.0;                // units
  double battery_kwh = 0.0;             // B
  double battery_min_kwh = 0.0;         // L
  double consumption_kwh_per_km = 1.0;  // epsilon
  double speed_kmh = 40.0;              // v
  int count = 1;                        // vehicles owned (Appendix-A evaluation only)
};

struct CostParams {
  double cost_per_km_ev = 3.0;
  double cost_per_km_conventional = 6.0;
  double cost_per_min = 2.05;  // c_t
  double max_wait_min = 5.0;   // WT_max
  std::optional<double> big_m_min;  // computed from the horizon when absent
  std::array<std::optional<double>, 2> profit_threshold{};  // P_k^min, absent = disabled
};

/// Immutable problem data. The node table is kept in canonical order:
/// depot of company 1, depot of company 2, customers, meet points. Depot rows
/// double as route start and route end.
class Instance {
 public:
  std::string name;
  std::vector<Node> nodes;
  std::vector<double> distance_km;  // dense n*n, kForbiddenArc for blocked arcs
  std::optional<std::vector<double>> travel_time_min;  // optional per-arc override
  std::array<VehicleParams, 2> vehicles;
  CostParams costs;
  EvMode ev_mode = EvMode::Electric;
  TwMode tw_mode = TwMode::Enforced;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int customer_count() const { return customer_count_; }
  int meet_point_count() const { return meet_point_count_; }

  NodeId depot(int company) const { return static_cast<NodeId>(company); }
  NodeId first_customer() const { return 2; }
  NodeId first_meet_point() const { return 2 + customer_count_; }

  bool is_depot(NodeId i) const { return i < 2; }
  bool is_customer(NodeId i) const { return i >= 2 && i < first_meet_point(); }
  bool is_meet_point(NodeId i) const {
    return i >= first_meet_point() && i < node_count();
  }

  const Node& node(NodeId i) const { return nodes[static_cast<size_t>(i)]; }

  double dist(NodeId i, NodeId j) const {
    return distance_km[static_cast<size_t>(i) * nodes.size() + static_cast<size_t>(j)];
  }
  bool arc_allowed(NodeId i, NodeId j) const { return std::isfinite(dist(i, j)); }

  /// Travel time in minutes for a vehicle of `company`; derived from distance
  /// and speed unless the instance carries an explicit matrix.
  double travel_time(NodeId i, NodeId j, int company) const {
    if (travel_time_min) {
      return (*travel_time_min)[static_cast<size_t>(i) * nodes.size() +
                                static_cast<size_t>(j)];
    }
    return dist(i, j) / vehicles[static_cast<size_t>(company)].speed_kmh * 60.0;
  }

  bool electric() const { return ev_mode == EvMode::Electric; }
  bool tw_enforced() const { return tw_mode == TwMode::Enforced; }
  double cost_per_km() const {
    return electric() ? costs.cost_per_km_ev : costs.cost_per_km_conventional;
  }
  bool thresholds_enabled() const {
    return costs.profit_threshold[0].has_value() || costs.profit_threshold[1].has_value();
  }
  double threshold(int company) const {
    return costs.profit_threshold[static_cast<size_t>(company)].value_or(
        -std::numeric_limits<double>::infinity());
  }

  /// Latest customer deadline, used as the planning horizon.
  double horizon_min() const;
  /// Big-M for the exported MILP: horizon + worst-case charge + worst travel.
  double big_m() const;
  /// Sum of all customer service fees.
  double total_revenue() const;

  std::vector<NodeId> customer_ids() const;
  std::vector<NodeId> meet_point_ids() const;
  std::vector<NodeId> customers_of(int company) const;

  /// Recomputes cached counts and checks structural invariants; throws
  /// std::invalid_argument with a field path on violation.
  void finalize();

 private:
  int customer_count_ = 0;
  int meet_point_count_ = 0;
};

}  // namespace coevrp
