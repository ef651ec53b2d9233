#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "coevrp/charging_lp.hpp"
#include "coevrp/evaluator.hpp"
#include "coevrp/rng.hpp"

namespace coevrp::oracle {

namespace {

struct LeafRoute {
  std::vector<NodeId> seq;
  int meet_pos = -1;
  double dist = 0.0;
  double t_min = 0.0;  // standalone minimal completion
  double cost = 0.0;
};

/// All visit orders of `nodes` (plus the meet point when given) as full
/// depot-to-depot sequences, each completed by the standalone charging LP.
/// Customers of the other company must follow the meet point.
void all_routes(const Instance& ins, int company, std::vector<NodeId> nodes,
                NodeId meet, std::vector<LeafRoute>& out) {
  if (meet >= 0) nodes.push_back(meet);
  std::sort(nodes.begin(), nodes.end());
  std::vector<bool> used(nodes.size(), false);
  std::vector<NodeId> seq{ins.depot(company)};

  const std::function<void()> rec = [&]() {
    if (seq.size() == nodes.size() + 1) {
      if (!ins.arc_allowed(seq.back(), ins.depot(company))) return;
      LeafRoute leaf;
      leaf.seq = seq;
      leaf.seq.push_back(ins.depot(company));
      double d = 0.0;
      for (size_t p = 0; p + 1 < leaf.seq.size(); ++p)
        d += ins.dist(leaf.seq[p], leaf.seq[p + 1]);
      RouteLp lp = build_route_lp(ins, company, leaf.seq);
      ChargingResult res = solve_charging(lp);
      if (!res.ok()) return;
      leaf.meet_pos = meet >= 0
                          ? static_cast<int>(std::find(leaf.seq.begin(), leaf.seq.end(),
                                                       meet) -
                                             leaf.seq.begin())
                          : -1;
      leaf.dist = d;
      leaf.t_min = res.plan->completion_min;
      leaf.cost = ins.cost_per_km() * d + ins.costs.cost_per_min * leaf.t_min;
      out.push_back(std::move(leaf));
      return;
    }
    bool meet_placed = meet < 0;
    for (const NodeId id : seq)
      if (id == meet) meet_placed = true;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (used[i]) continue;
      const NodeId v = nodes[i];
      if (!ins.arc_allowed(seq.back(), v)) continue;
      if (v != meet && ins.is_customer(v) && ins.node(v).company != company &&
          !meet_placed)
        continue;  // exchanged goods only after the meet point
      used[i] = true;
      seq.push_back(v);
      rec();
      seq.pop_back();
      used[i] = false;
    }
  };
  rec();
}

}  // namespace

std::optional<double> enumerate_optimum(const Instance& ins) {
  std::vector<NodeId> shared;
  std::array<std::vector<NodeId>, 2> reserved;
  for (NodeId j : ins.customer_ids()) {
    if (ins.node(j).customer_kind == CustomerKind::Shared) shared.push_back(j);
    else reserved[static_cast<size_t>(ins.node(j).company)].push_back(j);
  }

  double best = std::numeric_limits<double>::infinity();
  for (NodeId meet : ins.meet_point_ids()) {
    for (std::uint64_t mask = 0; mask < (1ULL << shared.size()); ++mask) {
      std::array<std::vector<NodeId>, 2> served = reserved;
      for (size_t s = 0; s < shared.size(); ++s)
        served[(mask >> s) & 1ULL].push_back(shared[s]);

      std::array<std::vector<LeafRoute>, 2> routes;
      for (int k = 0; k < 2; ++k)
        all_routes(ins, k, served[static_cast<size_t>(k)], meet,
                   routes[static_cast<size_t>(k)]);
      if (routes[0].empty() || routes[1].empty()) continue;
      for (int k = 0; k < 2; ++k)
        std::sort(routes[static_cast<size_t>(k)].begin(),
                  routes[static_cast<size_t>(k)].end(),
                  [](const LeafRoute& a, const LeafRoute& b) { return a.cost < b.cost; });

      // revenue is fixed per assignment; thresholds cap each completion time
      std::optional<std::array<double, 2>> caps;
      if (ins.thresholds_enabled()) {
        caps = std::array<double, 2>{};
        std::array<double, 2> revenue{};
        for (int k = 0; k < 2; ++k) {
          for (NodeId j : served[static_cast<size_t>(k)]) {
            const Node& nd = ins.node(j);
            if (nd.company == k) revenue[static_cast<size_t>(k)] += nd.price;
            else
              revenue[static_cast<size_t>(k)] +=
                  nd.price * (1.0 - profit_ratio(ins, nd.company, meet, j));
          }
        }
        (*caps)[0] = revenue[0];
        (*caps)[1] = revenue[1];  // converted per pair below
      }

      for (const LeafRoute& r1 : routes[0]) {
        if (r1.cost + routes[1].front().cost >= best) break;
        RouteLp lp1 = build_route_lp(ins, 0, r1.seq);
        for (const LeafRoute& r2 : routes[1]) {
          if (r1.cost + r2.cost >= best) break;
          std::optional<std::array<double, 2>> pair_caps;
          if (caps) {
            pair_caps = std::array<double, 2>{
                ((*caps)[0] - ins.cost_per_km() * r1.dist - ins.threshold(0)) /
                    ins.costs.cost_per_min,
                ((*caps)[1] - ins.cost_per_km() * r2.dist - ins.threshold(1)) /
                    ins.costs.cost_per_min};
            if ((*pair_caps)[0] < 0 || (*pair_caps)[1] < 0) continue;
          }
          RouteLp lp2 = build_route_lp(ins, 1, r2.seq);
          PairResult pair = solve_charging_pair(lp1, r1.meet_pos, lp2, r2.meet_pos,
                                                ins.costs.max_wait_min, pair_caps);
          if (!pair.ok()) continue;
          const double total =
              ins.cost_per_km() * (r1.dist + r2.dist) +
              ins.costs.cost_per_min * (pair.plan_first->completion_min +
                                        pair.plan_second->completion_min);
          best = std::min(best, total);
        }
      }
    }
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

std::optional<double> enumerate_noncollab_optimum(const Instance& ins, int company) {
  std::vector<LeafRoute> routes;
  all_routes(ins, company, ins.customers_of(company), -1, routes);
  if (routes.empty()) return std::nullopt;
  double best = routes.front().cost;
  for (const LeafRoute& r : routes) best = std::min(best, r.cost);
  return best;
}

Instance small_random_instance(int n, std::uint64_t seed) {
  Rng rng(seed);
  Instance ins;
  ins.name = "oracle-" + std::to_string(n) + "-" + std::to_string(seed);
  const double side = 10.0;

  Node d1;
  d1.kind = NodeKind::Depot;
  d1.company = 0;
  d1.label = "D1";
  d1.xy = {{0.5, 0.5}};
  Node d2 = d1;
  d2.company = 1;
  d2.label = "D2";
  d2.xy = {{side - 0.5, side - 0.5}};
  ins.nodes.push_back(d1);
  ins.nodes.push_back(d2);

  const int first_company = (n + 1) / 2;
  const int max_shared = std::min(n, 5);
  std::vector<int> customer_idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) customer_idx[static_cast<size_t>(i)] = i;
  rng.shuffle(customer_idx);

  const bool slotted = (seed % 3) == 0;
  const double horizon = 480.0;
  for (int i = 0; i < n; ++i) {
    Node nd;
    nd.kind = NodeKind::Customer;
    nd.company = i < first_company ? 0 : 1;
    const bool is_shared =
        std::find(customer_idx.begin(), customer_idx.begin() + max_shared, i) !=
        customer_idx.begin() + max_shared;
    nd.customer_kind = is_shared ? CustomerKind::Shared : CustomerKind::Reserved;
    nd.demand = 1.0;
    nd.price = 100.0;
    nd.service_min = 2.0;
    nd.charger_kw = 60.0;
    nd.label = std::to_string(i + 1);
    nd.xy = {{rng.next_double(0.0, side), rng.next_double(0.0, side)}};
    if (slotted) {
      const bool first = rng.next_double() < 0.5;
      nd.earliest = first ? 0.0 : horizon / 2;
      nd.latest = first ? horizon / 2 : horizon;
    } else {
      nd.earliest = 0.0;
      nd.latest = horizon;
    }
    ins.nodes.push_back(nd);
  }
  for (int m = 0; m < 2; ++m) {
    Node nd;
    nd.kind = NodeKind::MeetPoint;
    nd.service_min = 10.0;
    nd.charger_kw = 60.0;
    nd.label = "m" + std::to_string(m + 1);
    nd.xy = {{rng.next_double(0.35 * side, 0.65 * side),
              rng.next_double(0.35 * side, 0.65 * side)}};
    ins.nodes.push_back(nd);
  }

  const size_t count = ins.nodes.size();
  ins.distance_km.assign(count * count, 0.0);
  for (size_t i = 0; i < count; ++i)
    for (size_t j = 0; j < count; ++j)
      if (i != j) {
        const auto& a = *ins.nodes[i].xy;
        const auto& b = *ins.nodes[j].xy;
        ins.distance_km[i * count + j] = std::hypot(a[0] - b[0], a[1] - b[1]);
      }

  for (int k = 0; k < 2; ++k) {
    VehicleParams& v = ins.vehicles[static_cast<size_t>(k)];
    v.company = k;
    v.capacity = n;
    v.battery_kwh = 30.0;
    v.battery_min_kwh = 5.0;
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

}  // namespace coevrp::oracle
