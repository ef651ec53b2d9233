#include "coevrp/gothenburg.hpp"

namespace coevrp {

namespace {

// Measured road distances (km), in the survey's own node order:
// customers 1..17, m1, m2, D1, D2. -1 marks arcs that are not drivable
// (between the two meet points and between the two depots).
constexpr double F = -1.0;
constexpr double kRaw[21][21] = {
    {0, 10.2, 15.8, 11.4, 14.6, 3.8, 10.9, 4.5, 7.9, 7.7, 7.7, 16.3, 10.3, 2.3, 4.8, 6.4, 7.0, 8.4, 3.9, 12.0, 3.9},
    {9.1, 0, 20.8, 17.7, 23.2, 13.0, 15.1, 7.8, 12.0, 13.6, 11.9, 20.6, 1.1, 11.3, 11.4, 15.4, 8.7, 12.6, 12.1, 20.6, 11.1},
    {15.7, 21.0, 0, 3.9, 17.6, 12.5, 5.1, 13.3, 8.1, 9.2, 8.8, 1.6, 21.1, 13.3, 7.9, 10.3, 16.2, 6.9, 13.4, 14.0, 18.2},
    {11.3, 17.2, 3.9, 0, 13.2, 8.1, 8.3, 10.6, 8.3, 6.5, 8.1, 4.8, 17.3, 8.9, 6.1, 5.9, 12.9, 4.6, 9.0, 9.6, 13.8},
    {14.8, 23.0, 17.6, 13.2, 0, 11.4, 23.0, 19.4, 22.8, 17.9, 22.6, 18.2, 23.2, 12.2, 15.8, 9.2, 19.8, 16.8, 12.3, 6.3, 18.1},
    {4.5, 12.7, 12.6, 8.3, 11.5, 0, 14.8, 8.5, 11.8, 8.3, 11.7, 13.3, 12.9, 2.6, 5.8, 3.0, 8.9, 8.1, 0.8, 8.0, 7.9},
    {10.0, 15.2, 5.2, 8.3, 23.1, 13.9, 0, 8.7, 3.5, 5.2, 4.1, 5.5, 15.5, 12.3, 7.9, 15.2, 11.5, 5.8, 12.8, 18.9, 12.5},
    {5.1, 7.9, 10.7, 10.4, 19.2, 9.0, 8.2, 0, 5.2, 4.1, 4.8, 13.7, 8.0, 7.4, 3.5, 10.5, 4.1, 4.8, 6.4, 16.6, 7.6},
    {6.7, 12.0, 8.3, 8.6, 20.8, 10.6, 3.5, 4.8, 0, 2.6, 0.9, 8.6, 11.9, 8.9, 4.9, 13.0, 8.2, 3.6, 9.8, 18.2, 9.2},
    {6.1, 11.3, 9.2, 7.2, 19.1, 10.0, 5.2, 4.4, 2.3, 0, 2.1, 9.5, 11.4, 7.8, 2.9, 11.5, 7.6, 1.5, 7.7, 15.4, 8.6},
    {6.8, 11.8, 8.3, 8.6, 20.9, 10.7, 3.5, 5.4, 0.3, 2.7, 0, 8.6, 12.0, 9.1, 4.9, 13.2, 8.3, 3.6, 9.6, 18.3, 9.4},
    {15.0, 20.3, 1.7, 4.8, 18.5, 13.4, 5.5, 13.6, 8.6, 9.6, 9.2, 0, 20.4, 14.5, 8.8, 11.2, 16.5, 7.8, 14.3, 14.8, 17.5},
    {9.7, 1.5, 21.6, 18.5, 23.9, 13.8, 15.8, 8.6, 12.8, 13.2, 12.6, 21.3, 0, 12.1, 12.2, 15.1, 9.5, 13.4, 12.3, 21.4, 11.7},
    {3.4, 11.6, 13.2, 8.8, 12.0, 2.6, 12.3, 5.9, 9.3, 7.1, 9.1, 13.8, 11.8, 0, 4.6, 3.1, 8.4, 6.9, 2.5, 9.2, 6.8},
    {5.0, 11.3, 8.4, 5.6, 15.9, 6.5, 9.0, 4.6, 4.3, 2.9, 4.0, 9.0, 11.4, 4.7, 0, 7.6, 7.5, 2.7, 5.2, 12.3, 8.0},
    {7.2, 15.4, 10.3, 5.9, 9.1, 2.9, 14.7, 8.4, 11.7, 11.5, 11.5, 10.9, 14.2, 3.3, 7.1, 0, 10.8, 9.4, 3.8, 6.3, 10.5},
    {4.4, 8.7, 16.2, 13.4, 18.5, 8.3, 11.0, 3.5, 8.2, 7.9, 7.8, 16.5, 8.1, 6.6, 6.8, 10.3, 0, 8.5, 8.6, 15.9, 6.4},
    {6.6, 11.9, 7.6, 4.9, 17.0, 10.5, 5.9, 4.6, 3.3, 1.6, 3.3, 8.9, 12.0, 5.8, 2.0, 9.7, 8.1, 0, F, 13.3, 9.1},
    {3.9, 12.4, 14.4, 8.9, 12.2, 0.9, 13.4, 8.5, 10.1, 9.4, 10.2, 14.5, 13.2, 3.0, 6.0, 3.7, 7.7, F, 0, 8.7, 7.5},
    {11.7, 19.9, 13.8, 9.4, 6.7, 7.9, 19.3, 14.2, 17.6, 14.1, 17.4, 14.4, 20.1, 9.1, 12.0, 6.2, 16.7, 13.0, 8.7, 0, F},
    {3.6, 10.9, 17.8, 13.8, 18.0, 7.7, 12.0, 5.7, 9.0, 10.6, 8.9, 17.5, 11.1, 6.1, 7.2, 9.8, 7.1, 9.6, 7.2, F, 0},
};

constexpr double kWindows[17][2] = {
    {0, 90},  {30, 60}, {0, 90},   {30, 120}, {30, 120}, {60, 150},
    {60, 150}, {90, 180}, {90, 180},  // company R, customers 1-9
    {0, 90},  {0, 90},  {30, 120}, {60, 90},  {30, 120}, {60, 150},
    {60, 150}, {90, 180},  // company B, customers 10-17
};

}  // namespace

Instance builtin_gothenburg() {
  Instance ins;
  ins.name = "gothenburg";

  const int kCustomers = 17;
  // canonical table: D1, D2, customers 1..17, m1, m2
  Node d1;
  d1.kind = NodeKind::Depot;
  d1.company = 0;
  d1.label = "D1";
  Node d2 = d1;
  d2.company = 1;
  d2.label = "D2";
  ins.nodes.push_back(d1);
  ins.nodes.push_back(d2);

  for (int c = 0; c < kCustomers; ++c) {
    Node nd;
    nd.kind = NodeKind::Customer;
    nd.company = c < 9 ? 0 : 1;
    nd.customer_kind = CustomerKind::Shared;
    nd.demand = 1.0;
    nd.price = 150.0;
    nd.earliest = kWindows[c][0];
    nd.latest = kWindows[c][1];
    nd.service_min = 2.0;
    nd.charger_kw = 60.0;
    nd.label = std::to_string(c + 1);
    ins.nodes.push_back(nd);
  }
  for (int m = 0; m < 2; ++m) {
    Node nd;
    nd.kind = NodeKind::MeetPoint;
    nd.service_min = 10.0;
    nd.charger_kw = 60.0;
    nd.label = m == 0 ? "m1" : "m2";
    ins.nodes.push_back(nd);
  }

  // survey order -> canonical order
  auto canonical = [&](int raw) -> int {
    if (raw < 17) return 2 + raw;       // customers
    if (raw < 19) return 19 + (raw - 17);  // m1, m2
    return raw - 19;                    // D1, D2
  };
  const size_t n = ins.nodes.size();
  ins.distance_km.assign(n * n, 0.0);
  for (int i = 0; i < 21; ++i) {
    for (int j = 0; j < 21; ++j) {
      const double d = kRaw[i][j];
      ins.distance_km[static_cast<size_t>(canonical(i)) * n +
                      static_cast<size_t>(canonical(j))] = d < 0 ? kForbiddenArc : d;
    }
  }

  for (int k = 0; k < 2; ++k) {
    VehicleParams& v = ins.vehicles[static_cast<size_t>(k)];
    v.company = k;
    v.capacity = kCustomers;  // demands default to 1 unit, capacity non-binding
    v.battery_kwh = 60.0;
    v.battery_min_kwh = 12.0;
    v.consumption_kwh_per_km = 1.0;
    v.speed_kmh = 40.0;
  }
  ins.costs.cost_per_km_ev = 3.0;
  ins.costs.cost_per_km_conventional = 6.0;
  ins.costs.cost_per_min = 2.05;
  ins.costs.max_wait_min = 5.0;
  ins.ev_mode = EvMode::Electric;
  ins.tw_mode = TwMode::Enforced;
  ins.finalize();
  return ins;
}

}  // namespace coevrp
