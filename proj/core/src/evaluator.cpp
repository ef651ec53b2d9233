#include "coevrp/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace coevrp {

namespace {

double service_duration(const Instance& ins, const Node& nd, double charge_kwh) {
  double st = nd.service_min;
  if (ins.electric() && charge_kwh > 0.0 && nd.has_charger())
    st += 60.0 * charge_kwh / nd.charger_kw;
  return st;
}

struct Assignment {
  // serving company per customer id, -1 = unserved
  std::vector<int> served_by;
  std::vector<int> visit_count;
};

Assignment build_assignment(const Instance& ins, const Solution& sol) {
  Assignment a;
  a.served_by.assign(static_cast<size_t>(ins.node_count()), -1);
  a.visit_count.assign(static_cast<size_t>(ins.node_count()), 0);
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    for (size_t p = 0; p + 1 < r.visits.size(); ++p) {
      const NodeId id = r.visits[p].node;
      if (p > 0 && ins.is_customer(id)) {
        a.visit_count[static_cast<size_t>(id)]++;
        a.served_by[static_cast<size_t>(id)] = k;
      }
    }
  }
  return a;
}

double route_distance(const Instance& ins, const Route& r, bool* forbidden) {
  double d = 0.0;
  for (size_t p = 0; p + 1 < r.visits.size(); ++p) {
    const NodeId from = r.visits[p].node;
    const NodeId to = r.visits[p + 1].node;
    if (!ins.arc_allowed(from, to)) {
      if (forbidden) *forbidden = true;
      continue;
    }
    d += ins.dist(from, to);
  }
  return d;
}

double revenue_of(const Instance& ins, const Solution& sol, int company) {
  double rev = 0.0;
  const Assignment a = build_assignment(ins, sol);
  for (NodeId j : ins.customer_ids()) {
    const int owner = ins.node(j).company;
    const int server = a.served_by[static_cast<size_t>(j)];
    if (server < 0) continue;
    const double p = ins.node(j).price;
    if (owner == server) {
      if (owner == company) rev += p;
    } else if (sol.meet_point) {
      const double alpha = profit_ratio(ins, owner, *sol.meet_point, j);
      if (owner == company) rev += p * alpha;
      if (server == company) rev += p * (1.0 - alpha);
    }
  }
  return rev;
}

}  // namespace

double profit_ratio(const Instance& ins, int company, NodeId meet_point,
                    NodeId customer) {
  const double to_meet = ins.dist(ins.depot(company), meet_point);
  const double onward = ins.dist(meet_point, customer);
  if (!std::isfinite(to_meet) || !std::isfinite(onward))
    throw std::invalid_argument("profit_ratio: forbidden arc in split legs");
  const double denom = to_meet + onward;
  if (denom == 0.0)
    throw std::invalid_argument("profit_ratio: both legs have zero length");
  return to_meet / denom;
}

CostBreakdown objective(const Instance& ins, const Solution& sol) {
  CostBreakdown out;
  for (const Route& r : sol.routes) {
    bool forbidden = false;
    out.energy += ins.cost_per_km() * route_distance(ins, r, &forbidden);
    if (forbidden) throw std::invalid_argument("objective: route traverses a forbidden arc");
    out.labor += ins.costs.cost_per_min * r.completion_min();
  }
  out.total = out.energy + out.labor;
  return out;
}

double company_profit(const Instance& ins, const Solution& sol, int company) {
  const Route& r = sol.routes[static_cast<size_t>(company)];
  bool forbidden = false;
  const double cost = ins.cost_per_km() * route_distance(ins, r, &forbidden) +
                      ins.costs.cost_per_min * r.completion_min();
  if (forbidden) throw std::invalid_argument("company_profit: forbidden arc");
  return revenue_of(ins, sol, company) - cost;
}

BatteryTrace simulate_battery(const Instance& ins, int company,
                              const std::vector<NodeId>& route,
                              const std::vector<double>& charges) {
  BatteryTrace trace;
  if (!ins.electric() || route.empty()) return trace;
  const VehicleParams& veh = ins.vehicles[static_cast<size_t>(company)];
  const double cap = veh.battery_kwh;
  const double floor = veh.battery_min_kwh;

  double level = cap;
  for (size_t p = 0; p < route.size(); ++p) {
    const Node& nd = ins.node(route[p]);
    const double charge = p < charges.size() ? charges[p] : 0.0;
    BatteryStep step;
    step.arrival_kwh = level;
    step.charge_kwh = charge;
    if (level < floor - tol::kEnergyKwh || level > cap + tol::kEnergyKwh) {
      trace.violations.push_back({constraint::kBatteryBounds, company, route[p],
                                  level < floor ? floor - level : level - cap,
                                  "battery outside [L, B] on arrival"});
    }
    if (charge > 0.0 && !nd.has_charger()) {
      trace.violations.push_back({constraint::kChargeLimit, company, route[p], charge,
                                  "charging at a node with no charger"});
    }
    if (charge > cap - level + tol::kEnergyKwh) {
      trace.violations.push_back({constraint::kChargeLimit, company, route[p],
                                  charge - (cap - level), "charge exceeds B - b"});
    }
    step.departure_kwh = level + charge;
    trace.steps.push_back(step);
    if (p + 1 < route.size()) {
      if (!ins.arc_allowed(route[p], route[p + 1])) {
        trace.violations.push_back({constraint::kForbiddenArc, company, route[p + 1],
                                    0.0, "forbidden arc in route"});
        level = step.departure_kwh;
      } else {
        level = step.departure_kwh -
                veh.consumption_kwh_per_km * ins.dist(route[p], route[p + 1]);
      }
    }
  }
  return trace;
}

EvalReport validate(const Instance& ins, const Solution& sol) {
  EvalReport rep;
  auto flag = [&rep](const char* id, int company, NodeId node, double mag,
                     std::string detail) {
    rep.violations.push_back({id, company, node, mag, std::move(detail)});
  };

  const bool collab = sol.collaborative();
  const Assignment assign = build_assignment(ins, sol);

  // route endpoints (Eqs. 18-19) and interior sanity
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    if (r.visits.empty()) continue;
    if (r.visits.front().node != ins.depot(k))
      flag(constraint::kDepotStart, k, r.visits.front().node, 0, "route must start at own depot");
    if (r.visits.back().node != ins.depot(k))
      flag(constraint::kDepotEnd, k, r.visits.back().node, 0, "route must end at own depot");
    for (size_t p = 1; p + 1 < r.visits.size(); ++p)
      if (ins.is_depot(r.visits[p].node))
        flag(constraint::kDepotStart, k, r.visits[p].node, 0, "depot in route interior");
  }

  // visit counts (Eq. 15)
  for (NodeId j : ins.customer_ids()) {
    const int owner = ins.node(j).company;
    const bool required =
        !sol.restricted_company || owner == *sol.restricted_company;
    const int count = assign.visit_count[static_cast<size_t>(j)];
    if (required && count == 0)
      flag(constraint::kVisitOnce, owner, j, 0, "customer not visited");
    if (count > 1)
      flag(constraint::kVisitOnce, owner, j, count - 1, "customer visited more than once");
    if (!required && count > 0)
      flag(constraint::kVisitOnce, owner, j, count,
           "customer outside the planned company visited");
  }

  // meet-point structure (Eqs. 16-17)
  std::array<int, 2> meet_pos{-1, -1};
  if (collab) {
    std::array<NodeId, 2> visited_meet{-1, -1};
    for (int k = 0; k < 2; ++k) {
      const Route& r = sol.routes[static_cast<size_t>(k)];
      int meets = 0;
      for (size_t p = 0; p < r.visits.size(); ++p) {
        if (ins.is_meet_point(r.visits[p].node)) {
          ++meets;
          visited_meet[static_cast<size_t>(k)] = r.visits[p].node;
          meet_pos[static_cast<size_t>(k)] = static_cast<int>(p);
        }
      }
      if (meets != 1)
        flag(constraint::kOneMeetPoint, k, *sol.meet_point, std::abs(meets - 1),
             "vehicle must visit exactly one meet point");
    }
    if (visited_meet[0] >= 0 && visited_meet[1] >= 0 &&
        visited_meet[0] != visited_meet[1])
      flag(constraint::kSameMeetPoint, -1, visited_meet[1], 0,
           "vehicles meet at different meet points");
    else if (visited_meet[0] >= 0 && visited_meet[0] != *sol.meet_point)
      flag(constraint::kSameMeetPoint, -1, visited_meet[0], 0,
           "routes visit a different meet point than declared");
  } else {
    for (int k = 0; k < 2; ++k) {
      const Route& r = sol.routes[static_cast<size_t>(k)];
      for (const Visit& v : r.visits)
        if (ins.is_meet_point(v.node))
          flag(constraint::kOneMeetPoint, k, v.node, 0,
               "meet point visited in a non-collaborative plan");
    }
  }

  // ownership rules (Eq. 20) and exchange sequencing (Eq. 10)
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    for (size_t p = 1; p + 1 < r.visits.size(); ++p) {
      const NodeId id = r.visits[p].node;
      if (!ins.is_customer(id)) continue;
      const Node& nd = ins.node(id);
      if (nd.company == k) continue;
      if (nd.customer_kind == CustomerKind::Reserved) {
        flag(constraint::kReservedOwner, k, id, 0,
             "reserved customer served by the other company");
        continue;
      }
      if (!collab) {
        flag(constraint::kExchangeAfterMeet, k, id, 0,
             "shared customer served by the other company without a meet point");
      } else if (meet_pos[static_cast<size_t>(k)] >= 0 &&
                 static_cast<int>(p) < meet_pos[static_cast<size_t>(k)]) {
        flag(constraint::kExchangeAfterMeet, k, id,
             meet_pos[static_cast<size_t>(k)] - static_cast<int>(p),
             "exchanged goods delivered before the meet point");
      }
    }
  }

  // capacity (Eq. 8): load profile from the depot, exchange at the meet point
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    if (r.visits.size() < 2) continue;
    double outbound = 0.0;   // goods of own customers handed over at the meet
    double received = 0.0;   // goods of foreign customers served by k
    double own_load = 0.0;   // goods k delivers to its own customers
    for (NodeId j : ins.customer_ids()) {
      const int server = assign.served_by[static_cast<size_t>(j)];
      const Node& nd = ins.node(j);
      if (nd.company == k && server == k) own_load += nd.demand;
      if (nd.company == k && server == 1 - k) outbound += nd.demand;
      if (nd.company != k && server == k) received += nd.demand;
    }
    double load = own_load + outbound;
    double peak = load;
    for (size_t p = 1; p + 1 < r.visits.size(); ++p) {
      const NodeId id = r.visits[p].node;
      if (ins.is_meet_point(id)) {
        load += received - outbound;
      } else if (ins.is_customer(id)) {
        load -= ins.node(id).demand;
      }
      peak = std::max(peak, load);
    }
    const double cap = ins.vehicles[static_cast<size_t>(k)].capacity;
    if (peak > cap + 1e-9)
      flag(constraint::kCapacity, k, ins.depot(k), peak - cap,
           "carried load exceeds vehicle capacity");
  }

  // schedule consistency (Eq. 11), time windows (Eq. 14), forbidden arcs
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    for (size_t p = 0; p < r.visits.size(); ++p) {
      const Visit& v = r.visits[p];
      const Node& nd = ins.node(v.node);
      if (ins.tw_enforced() && ins.is_customer(v.node)) {
        if (v.service_start < nd.earliest - tol::kTimeMin ||
            v.service_start > nd.latest + tol::kTimeMin)
          flag(constraint::kTimeWindow, k, v.node,
               std::max(nd.earliest - v.service_start, v.service_start - nd.latest),
               "service outside the customer time window");
      }
      if (p + 1 < r.visits.size()) {
        const Visit& nx = r.visits[p + 1];
        if (!ins.arc_allowed(v.node, nx.node)) {
          flag(constraint::kForbiddenArc, k, nx.node, 0, "forbidden arc in route");
          continue;
        }
        const double ready = v.service_start + service_duration(ins, nd, v.charge_kwh) +
                             ins.travel_time(v.node, nx.node, k);
        if (nx.service_start < ready - tol::kTimeMin)
          flag(constraint::kTimePropagation, k, nx.node, ready - nx.service_start,
               "service starts before the vehicle can arrive");
      }
    }
    if (!r.visits.empty() && r.visits.front().service_start < -tol::kTimeMin)
      flag(constraint::kTimePropagation, k, r.visits.front().node,
           -r.visits.front().service_start, "negative departure time");
  }

  // meet synchronization (Eq. 9)
  if (collab && meet_pos[0] >= 0 && meet_pos[1] >= 0) {
    const double s1 =
        sol.routes[0].visits[static_cast<size_t>(meet_pos[0])].service_start;
    const double s2 =
        sol.routes[1].visits[static_cast<size_t>(meet_pos[1])].service_start;
    const double gap = std::abs(s1 - s2);
    if (gap > ins.costs.max_wait_min + tol::kTimeMin)
      flag(constraint::kMeetSync, -1, *sol.meet_point, gap - ins.costs.max_wait_min,
           "meet-point waiting time exceeds the maximum");
  }

  // battery propagation (Eqs. 5-7) and stored-trace consistency (Eq. 6)
  if (ins.electric()) {
    for (int k = 0; k < 2; ++k) {
      const Route& r = sol.routes[static_cast<size_t>(k)];
      if (r.visits.size() < 2) continue;
      std::vector<NodeId> seq;
      std::vector<double> charges;
      for (const Visit& v : r.visits) {
        seq.push_back(v.node);
        charges.push_back(v.charge_kwh);
      }
      BatteryTrace trace = simulate_battery(ins, k, seq, charges);
      for (Violation& v : trace.violations)
        if (v.constraint_id != constraint::kForbiddenArc)  // already reported
          rep.violations.push_back(std::move(v));
      for (size_t p = 0; p < r.visits.size() && p < trace.steps.size(); ++p) {
        const double diff =
            std::abs(r.visits[p].arrival_battery_kwh - trace.steps[p].arrival_kwh);
        if (diff > tol::kEnergyKwh)
          flag(constraint::kBatteryPropagation, k, r.visits[p].node, diff,
               "stored battery level disagrees with the propagated trace");
      }
    }
  }

  // costs and profits
  for (const Route& r : sol.routes) {
    bool forbidden = false;
    rep.energy_cost += ins.cost_per_km() * route_distance(ins, r, &forbidden);
    rep.labor_cost += ins.costs.cost_per_min * r.completion_min();
  }
  rep.total_cost = rep.energy_cost + rep.labor_cost;
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    const double cost = ins.cost_per_km() * route_distance(ins, r, nullptr) +
                        ins.costs.cost_per_min * r.completion_min();
    rep.profits[static_cast<size_t>(k)] = revenue_of(ins, sol, k) - cost;
  }

  // profit thresholds (Eq. 2), collaborative plans only
  if (ins.thresholds_enabled() && collab) {
    for (int k = 0; k < 2; ++k) {
      const double need = ins.threshold(k);
      if (rep.profits[static_cast<size_t>(k)] < need - tol::kCostSek) {
        rep.threshold_ok[static_cast<size_t>(k)] = false;
        flag(constraint::kProfitThreshold, k, ins.depot(k),
             need - rep.profits[static_cast<size_t>(k)],
             "profit below the company threshold");
      }
    }
  }

  rep.feasible = rep.violations.empty();
  return rep;
}

EvalReport validate_multi(const Instance& ins, const MultiVehicleSolution& sol) {
  EvalReport rep;
  auto flag = [&rep](const char* id, int company, NodeId node, double mag,
                     std::string detail) {
    rep.violations.push_back({id, company, node, mag, std::move(detail)});
  };

  // transfers indexed by customer
  std::map<NodeId, std::vector<NodeId>> transfers_by_customer;
  for (const Transfer& t : sol.transfers)
    transfers_by_customer[t.customer].push_back(t.meet_point);
  for (const auto& [j, meets] : transfers_by_customer)
    if (meets.size() > 1)
      flag(constraint::kTransferOnce, ins.node(j).company, j,
           static_cast<double>(meets.size() - 1), "customer transferred more than once");

  // per-vehicle structure
  std::vector<int> served_by_route(static_cast<size_t>(ins.node_count()), -1);
  std::vector<int> visit_count(static_cast<size_t>(ins.node_count()), 0);
  std::vector<NodeId> vehicle_meet(sol.routes.size(), -1);
  std::vector<int> vehicle_meet_pos(sol.routes.size(), -1);
  for (size_t v = 0; v < sol.routes.size(); ++v) {
    const MultiRoute& r = sol.routes[v];
    if (r.visits.empty()) continue;
    if (r.visits.front().node != ins.depot(r.company))
      flag(constraint::kDepotStart, r.company, r.visits.front().node, 0,
           "route must start at the company depot");
    if (r.visits.back().node != ins.depot(r.company))
      flag(constraint::kDepotEnd, r.company, r.visits.back().node, 0,
           "route must end at the company depot");
    int meets = 0;
    for (size_t p = 1; p + 1 < r.visits.size(); ++p) {
      const NodeId id = r.visits[p].node;
      if (ins.is_customer(id)) {
        visit_count[static_cast<size_t>(id)]++;
        served_by_route[static_cast<size_t>(id)] = static_cast<int>(v);
      } else if (ins.is_meet_point(id)) {
        ++meets;
        vehicle_meet[v] = id;
        vehicle_meet_pos[v] = static_cast<int>(p);
      }
    }
    if (meets > 1)
      flag(constraint::kOneMeetPerVehicle, r.company, vehicle_meet[v], meets - 1,
           "vehicle visits more than one meet point");
  }
  for (NodeId j : ins.customer_ids()) {
    const int count = visit_count[static_cast<size_t>(j)];
    if (count == 0)
      flag(constraint::kVisitOnce, ins.node(j).company, j, 0, "customer not visited");
    if (count > 1)
      flag(constraint::kVisitOnce, ins.node(j).company, j, count - 1,
           "customer visited more than once");
  }

  // pairing consistency
  std::vector<int> pairings_of(sol.routes.size(), 0);
  for (const MeetPairing& pr : sol.pairings) {
    int idx1 = -1, idx2 = -1;
    for (size_t v = 0; v < sol.routes.size(); ++v) {
      if (sol.routes[v].company == 0 && sol.routes[v].vehicle == pr.vehicle1) idx1 = static_cast<int>(v);
      if (sol.routes[v].company == 1 && sol.routes[v].vehicle == pr.vehicle2) idx2 = static_cast<int>(v);
    }
    if (idx1 < 0 || idx2 < 0) {
      flag(constraint::kPairingConsistency, -1, pr.meet_point, 0, "pairing names an unknown vehicle");
      continue;
    }
    pairings_of[static_cast<size_t>(idx1)]++;
    pairings_of[static_cast<size_t>(idx2)]++;
    for (int idx : {idx1, idx2}) {
      if (vehicle_meet[static_cast<size_t>(idx)] != pr.meet_point)
        flag(constraint::kPairSameMeet, sol.routes[static_cast<size_t>(idx)].company,
             pr.meet_point, 0, "paired vehicle does not visit the pairing meet point");
    }
    // at least one transfer justifies the rendezvous
    bool any_transfer = false;
    for (const Transfer& t : sol.transfers) {
      if (t.meet_point != pr.meet_point) continue;
      const int server = served_by_route[static_cast<size_t>(t.customer)];
      if (server == idx1 || server == idx2) any_transfer = true;
    }
    if (!any_transfer)
      flag(constraint::kMeetRequiresTransfer, -1, pr.meet_point, 0,
           "vehicles meet without exchanging any customer");
    // synchronization at the meet point
    const MultiRoute& r1 = sol.routes[static_cast<size_t>(idx1)];
    const MultiRoute& r2 = sol.routes[static_cast<size_t>(idx2)];
    const int p1 = vehicle_meet_pos[static_cast<size_t>(idx1)];
    const int p2 = vehicle_meet_pos[static_cast<size_t>(idx2)];
    if (p1 >= 0 && p2 >= 0) {
      const double gap = std::abs(r1.visits[static_cast<size_t>(p1)].service_start -
                                  r2.visits[static_cast<size_t>(p2)].service_start);
      if (gap > ins.costs.max_wait_min + tol::kTimeMin)
        flag(constraint::kMultiMeetSync, -1, pr.meet_point, gap - ins.costs.max_wait_min,
             "paired vehicles miss the waiting-time window");
    }
  }
  for (size_t v = 0; v < sol.routes.size(); ++v) {
    const bool visits_meet = vehicle_meet[v] >= 0;
    if (visits_meet && pairings_of[v] != 1)
      flag(constraint::kPairingConsistency, sol.routes[v].company, vehicle_meet[v],
           std::abs(pairings_of[v] - 1),
           "vehicle visiting a meet point must appear in exactly one pairing");
    if (!visits_meet && pairings_of[v] > 0)
      flag(constraint::kPairingConsistency, sol.routes[v].company, -1, pairings_of[v],
           "paired vehicle never visits a meet point");
  }

  // transfer semantics
  for (NodeId j : ins.customer_ids()) {
    const Node& nd = ins.node(j);
    const auto it = transfers_by_customer.find(j);
    const bool transferred = it != transfers_by_customer.end() && !it->second.empty();
    const int route_idx = served_by_route[static_cast<size_t>(j)];
    if (route_idx < 0) continue;  // unserved already flagged
    const MultiRoute& server = sol.routes[static_cast<size_t>(route_idx)];
    if (transferred == (server.company == nd.company)) {
      flag(constraint::kTransferService, nd.company, j, 0,
           transferred ? "transferred customer served by its own company"
                       : "customer served by the other company without a transfer");
    }
    if (nd.customer_kind == CustomerKind::Reserved && server.company != nd.company)
      flag(constraint::kReservedOwner, server.company, j, 0,
           "reserved customer served by the other company");
    if (transferred) {
      const NodeId meet = it->second.front();
      if (vehicle_meet[static_cast<size_t>(route_idx)] != meet) {
        flag(constraint::kTransferAtAttendedMeet, server.company, j, 0,
             "transfer at a meet point the serving vehicle does not attend");
      } else {
        const int mp = vehicle_meet_pos[static_cast<size_t>(route_idx)];
        int pos = -1;
        for (size_t p = 0; p < server.visits.size(); ++p)
          if (server.visits[p].node == j) pos = static_cast<int>(p);
        if (pos >= 0 && mp >= 0 && pos < mp)
          flag(constraint::kMultiExchangeAfterMeet, server.company, j,
               mp - pos, "exchanged goods delivered before the meet point");
      }
    }
  }

  // physical checks per vehicle: schedule, windows, battery
  for (const MultiRoute& r : sol.routes) {
    for (size_t p = 0; p < r.visits.size(); ++p) {
      const Visit& v = r.visits[p];
      const Node& nd = ins.node(v.node);
      if (ins.tw_enforced() && ins.is_customer(v.node)) {
        if (v.service_start < nd.earliest - tol::kTimeMin ||
            v.service_start > nd.latest + tol::kTimeMin)
          flag(constraint::kTimeWindow, r.company, v.node,
               std::max(nd.earliest - v.service_start, v.service_start - nd.latest),
               "service outside the customer time window");
      }
      if (p + 1 < r.visits.size()) {
        const Visit& nx = r.visits[p + 1];
        if (!ins.arc_allowed(v.node, nx.node)) {
          flag(constraint::kForbiddenArc, r.company, nx.node, 0, "forbidden arc in route");
          continue;
        }
        const double ready = v.service_start + service_duration(ins, nd, v.charge_kwh) +
                             ins.travel_time(v.node, nx.node, r.company);
        if (nx.service_start < ready - tol::kTimeMin)
          flag(constraint::kTimePropagation, r.company, nx.node, ready - nx.service_start,
               "service starts before the vehicle can arrive");
      }
    }
    if (ins.electric() && r.visits.size() >= 2) {
      std::vector<NodeId> seq;
      std::vector<double> charges;
      for (const Visit& v : r.visits) {
        seq.push_back(v.node);
        charges.push_back(v.charge_kwh);
      }
      BatteryTrace trace = simulate_battery(ins, r.company, seq, charges);
      for (Violation& v : trace.violations)
        if (v.constraint_id != constraint::kForbiddenArc)
          rep.violations.push_back(std::move(v));
    }
    // literal Eq. 8: demand visited by one vehicle within its capacity
    double load = 0.0;
    for (size_t p = 1; p + 1 < r.visits.size(); ++p)
      if (ins.is_customer(r.visits[p].node)) load += ins.node(r.visits[p].node).demand;
    const double cap = ins.vehicles[static_cast<size_t>(r.company)].capacity;
    if (load > cap + 1e-9)
      flag(constraint::kCapacity, r.company, ins.depot(r.company), load - cap,
           "visited demand exceeds vehicle capacity");
  }

  // costs and profits
  for (const MultiRoute& r : sol.routes) {
    Route tmp;
    tmp.company = r.company;
    tmp.visits = r.visits;
    rep.energy_cost += ins.cost_per_km() * route_distance(ins, tmp, nullptr);
    rep.labor_cost += ins.costs.cost_per_min * tmp.completion_min();
  }
  rep.total_cost = rep.energy_cost + rep.labor_cost;
  for (int k = 0; k < 2; ++k)
    rep.profits[static_cast<size_t>(k)] = profit_multi(ins, sol, k);

  if (ins.thresholds_enabled()) {
    for (int k = 0; k < 2; ++k) {
      const double need = ins.threshold(k);
      if (rep.profits[static_cast<size_t>(k)] < need - tol::kCostSek) {
        rep.threshold_ok[static_cast<size_t>(k)] = false;
        flag(constraint::kProfitThreshold, k, ins.depot(k),
             need - rep.profits[static_cast<size_t>(k)],
             "profit below the company threshold");
      }
    }
  }

  rep.feasible = rep.violations.empty();
  return rep;
}

double profit_multi(const Instance& ins, const MultiVehicleSolution& sol, int company) {
  std::map<NodeId, NodeId> transfer_meet;
  for (const Transfer& t : sol.transfers) transfer_meet.emplace(t.customer, t.meet_point);

  double revenue = 0.0;
  for (NodeId j : ins.customer_ids()) {
    const Node& nd = ins.node(j);
    const auto it = transfer_meet.find(j);
    if (it == transfer_meet.end()) {
      if (nd.company == company) revenue += nd.price;
      continue;
    }
    const double alpha = profit_ratio(ins, nd.company, it->second, j);
    if (nd.company == company) revenue += nd.price * alpha;
    else revenue += nd.price * (1.0 - alpha);
  }
  double cost = 0.0;
  for (const MultiRoute& r : sol.routes) {
    if (r.company != company) continue;
    Route tmp;
    tmp.company = r.company;
    tmp.visits = r.visits;
    cost += ins.cost_per_km() * route_distance(ins, tmp, nullptr) +
            ins.costs.cost_per_min * tmp.completion_min();
  }
  return revenue - cost;
}

}  // namespace coevrp
