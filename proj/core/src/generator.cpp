#include "coevrp/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "coevrp/rng.hpp"

namespace coevrp {

double two_slot_length_min(int n_customers) {
  if (n_customers <= 100) return 4 * 60.0;
  if (n_customers <= 200) return 7 * 60.0;
  return 14 * 60.0;
}

Instance generate_instance(int n_customers, double region_km, std::uint64_t seed,
                           TwSlots tw_slots, const GeneratorOptions& opt) {
  if (n_customers < 2) throw std::invalid_argument("generate_instance: need >= 2 customers");
  if (n_customers % 2 != 0)
    throw std::invalid_argument("generate_instance: n_customers must be even");
  if (region_km <= 0) throw std::invalid_argument("generate_instance: region must be positive");

  Rng rng(seed);
  Instance ins;
  ins.name = "random-" + std::to_string(n_customers) + "-" + std::to_string(seed);

  const double s = region_km;
  const double slot = two_slot_length_min(n_customers);
  const double horizon = 2.0 * slot;

  Node d1;
  d1.kind = NodeKind::Depot;
  d1.company = 0;
  d1.label = "D1";
  d1.xy = {{0.05 * s, 0.05 * s}};
  Node d2 = d1;
  d2.company = 1;
  d2.label = "D2";
  d2.xy = {{0.95 * s, 0.95 * s}};
  ins.nodes.push_back(d1);
  ins.nodes.push_back(d2);

  for (int c = 0; c < n_customers; ++c) {
    Node nd;
    nd.kind = NodeKind::Customer;
    nd.company = c < n_customers / 2 ? 0 : 1;
    nd.customer_kind = CustomerKind::Shared;
    nd.demand = 1.0;
    nd.price = opt.price;
    nd.service_min = opt.service_min;
    nd.charger_kw = opt.charger_kw;
    nd.label = std::to_string(c + 1);
    nd.xy = {{rng.next_double(0.0, s), rng.next_double(0.0, s)}};
    if (tw_slots == TwSlots::TwoSlot) {
      const bool first = rng.next_double() < 0.5;
      nd.earliest = first ? 0.0 : slot;
      nd.latest = first ? slot : horizon;
    } else {
      nd.earliest = 0.0;
      nd.latest = horizon;
    }
    ins.nodes.push_back(nd);
  }

  for (int m = 0; m < opt.meet_points; ++m) {
    Node nd;
    nd.kind = NodeKind::MeetPoint;
    nd.service_min = opt.meet_service_min;
    nd.charger_kw = opt.charger_kw;
    nd.label = "m" + std::to_string(m + 1);
    nd.xy = {{rng.next_double(0.4 * s, 0.6 * s), rng.next_double(0.4 * s, 0.6 * s)}};
    ins.nodes.push_back(nd);
  }

  const size_t n = ins.nodes.size();
  ins.distance_km.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = *ins.nodes[i].xy;
      const auto& b = *ins.nodes[j].xy;
      ins.distance_km[i * n + j] = std::hypot(a[0] - b[0], a[1] - b[1]);
    }
  }

  for (int k = 0; k < 2; ++k) {
    VehicleParams& v = ins.vehicles[static_cast<size_t>(k)];
    v.company = k;
    v.capacity = n_customers;
    v.battery_kwh = opt.battery_kwh;
    v.battery_min_kwh = opt.battery_min_kwh;
    v.consumption_kwh_per_km = 1.0;
    v.speed_kmh = opt.speed_kmh;
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
