#include "coevrp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coevrp {

namespace {
[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("instance." + path + ": " + what);
}
}  // namespace

void Instance::finalize() {
  const size_t n = nodes.size();
  if (n < 3) fail("nodes", "need two depots and at least one meet point");
  if (nodes[0].kind != NodeKind::Depot || nodes[1].kind != NodeKind::Depot)
    fail("nodes", "table must start with the two depots");
  if (nodes[0].company != 0 || nodes[1].company != 1)
    fail("nodes", "depots must be ordered by company");

  customer_count_ = 0;
  meet_point_count_ = 0;
  for (size_t i = 2; i < n; ++i) {
    const Node& nd = nodes[i];
    if (nd.kind == NodeKind::Depot) fail("nodes", "extra depot row");
    if (nd.kind == NodeKind::Customer) {
      if (meet_point_count_ > 0)
        fail("nodes", "customers must precede meet points");
      if (nd.company != 0 && nd.company != 1)
        fail("nodes[" + std::to_string(i) + "].company", "must be 1 or 2");
      if (nd.earliest > nd.latest)
        fail("nodes[" + std::to_string(i) + "].window",
             "earliest " + std::to_string(nd.earliest) + " exceeds latest " +
                 std::to_string(nd.latest));
      if (nd.demand < 0) fail("nodes[" + std::to_string(i) + "].demand", "negative");
      if (nd.price < 0) fail("nodes[" + std::to_string(i) + "].price", "negative");
      ++customer_count_;
    } else {
      if (nd.service_min < 0)
        fail("nodes[" + std::to_string(i) + "].service_min", "negative");
      ++meet_point_count_;
    }
  }
  if (meet_point_count_ < 1) fail("nodes", "at least one meet point required");
  for (size_t i = 0; i < n; ++i) nodes[i].id = static_cast<NodeId>(i);

  if (distance_km.size() != n * n)
    fail("distance", "matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  for (size_t i = 0; i < n; ++i) {
    if (distance_km[i * n + i] != 0.0)
      fail("distance[" + std::to_string(i) + "][" + std::to_string(i) + "]",
           "diagonal must be zero");
    for (size_t j = 0; j < n; ++j) {
      const double d = distance_km[i * n + j];
      if (!(d >= 0.0) && !std::isinf(d))
        fail("distance[" + std::to_string(i) + "][" + std::to_string(j) + "]",
             "negative or NaN");
    }
  }
  if (travel_time_min && travel_time_min->size() != n * n)
    fail("travel_time", "matrix shape mismatch");

  for (int k = 0; k < 2; ++k) {
    const VehicleParams& v = vehicles[static_cast<size_t>(k)];
    if (v.company != k) fail("vehicles", "must be ordered by company");
    if (v.speed_kmh <= 0) fail("vehicles.speed_kmh", "must be positive");
    if (v.consumption_kwh_per_km <= 0) fail("vehicles.consumption", "must be positive");
    if (v.capacity <= 0) fail("vehicles.capacity", "must be positive");
    if (v.count < 1) fail("vehicles.count", "must be at least 1");
    if (electric() && !(v.battery_min_kwh >= 0 && v.battery_min_kwh < v.battery_kwh))
      fail("vehicles.battery", "need 0 <= L < B");
  }
  if (costs.cost_per_min < 0 || costs.cost_per_km_ev < 0 ||
      costs.cost_per_km_conventional < 0)
    fail("costs", "negative rate");
  if (costs.max_wait_min < 0) fail("costs.max_wait_min", "negative");
}

double Instance::horizon_min() const {
  double h = 0.0;
  for (const Node& nd : nodes)
    if (nd.kind == NodeKind::Customer && std::isfinite(nd.latest))
      h = std::max(h, nd.latest);
  return h;
}

double Instance::big_m() const {
  if (costs.big_m_min) return *costs.big_m_min;
  double max_tt = 0.0;
  const int n = node_count();
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && arc_allowed(i, j))
        max_tt = std::max({max_tt, travel_time(i, j, 0), travel_time(i, j, 1)});
  double max_charge_min = 0.0;
  if (electric()) {
    double min_rate = std::numeric_limits<double>::infinity();
    for (const Node& nd : nodes)
      if (nd.has_charger()) min_rate = std::min(min_rate, nd.charger_kw);
    const double b = std::max(vehicles[0].battery_kwh, vehicles[1].battery_kwh);
    if (std::isfinite(min_rate)) max_charge_min = 60.0 * b / min_rate;
  }
  return horizon_min() + max_charge_min + max_tt;
}

double Instance::total_revenue() const {
  double r = 0.0;
  for (const Node& nd : nodes)
    if (nd.kind == NodeKind::Customer) r += nd.price;
  return r;
}

std::vector<NodeId> Instance::customer_ids() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<size_t>(customer_count_));
  for (NodeId i = first_customer(); i < first_meet_point(); ++i) out.push_back(i);
  return out;
}

std::vector<NodeId> Instance::meet_point_ids() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<size_t>(meet_point_count_));
  for (NodeId i = first_meet_point(); i < node_count(); ++i) out.push_back(i);
  return out;
}

std::vector<NodeId> Instance::customers_of(int company) const {
  std::vector<NodeId> out;
  for (NodeId i = first_customer(); i < first_meet_point(); ++i)
    if (node(i).company == company) out.push_back(i);
  return out;
}

}  // namespace coevrp
