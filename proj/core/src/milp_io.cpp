#include "coevrp/milp_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "coevrp/evaluator.hpp"

namespace coevrp {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Term {
  double coeff;
  std::string var;
};

std::string expr(const std::vector<Term>& terms) {
  std::string out;
  bool first = true;
  for (const Term& t : terms) {
    if (t.coeff == 0.0) continue;
    if (first) {
      if (t.coeff < 0) out += "- ";
      first = false;
    } else {
      out += t.coeff < 0 ? " - " : " + ";
    }
    const double mag = std::abs(t.coeff);
    if (mag != 1.0) {
      out += num(mag);
      out += " ";
    }
    out += t.var;
  }
  if (first) out = "0 dummy";
  return out;
}

}  // namespace

void export_milp(const Instance& ins, NodeId meet, const std::string& path) {
  if (!ins.is_meet_point(meet))
    throw std::invalid_argument("export_milp: not a meet point");
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");

  const bool ev = ins.electric();
  const bool tw = ins.tw_enforced();
  const double gamma = ins.big_m();
  const double cd = ins.cost_per_km();
  const double ct = ins.costs.cost_per_min;

  // visit set per vehicle: own depot, customers, the fixed meet point
  std::array<std::vector<NodeId>, 2> visit;
  std::vector<NodeId> customers = ins.customer_ids();
  for (int k = 0; k < 2; ++k) {
    visit[static_cast<size_t>(k)].push_back(ins.depot(k));
    for (NodeId j : customers) visit[static_cast<size_t>(k)].push_back(j);
    visit[static_cast<size_t>(k)].push_back(meet);
  }
  auto arcs_of = [&](int k) {
    std::vector<std::pair<NodeId, NodeId>> arcs;
    for (NodeId i : visit[static_cast<size_t>(k)])
      for (NodeId j : visit[static_cast<size_t>(k)])
        if (i != j && ins.arc_allowed(i, j)) arcs.push_back({i, j});
    return arcs;
  };
  const std::array<std::vector<std::pair<NodeId, NodeId>>, 2> arcs{arcs_of(0),
                                                                   arcs_of(1)};

  auto xv = [](int k, NodeId i, NodeId j) {
    return "x_" + std::to_string(k + 1) + "_" + std::to_string(i) + "_" +
           std::to_string(j);
  };
  auto var1 = [](const char* base, int k, NodeId i) {
    return std::string(base) + "_" + std::to_string(k + 1) + "_" + std::to_string(i);
  };
  auto vark = [](const char* base, int k) {
    return std::string(base) + "_" + std::to_string(k + 1);
  };

  out << "\\ m-CoEVRP export: instance " << ins.name << ", meet point "
      << ins.node(meet).label << "\n";
  out << "\\ modes: " << (ev ? "electric" : "conventional") << ", windows "
      << (tw ? "enforced" : "ignored") << ", gamma " << num(gamma) << "\n";

  // objective
  {
    std::vector<Term> obj;
    for (int k = 0; k < 2; ++k)
      for (const auto& [i, j] : arcs[static_cast<size_t>(k)])
        obj.push_back({cd * ins.dist(i, j), xv(k, i, j)});
    obj.push_back({ct, vark("t", 0)});
    obj.push_back({ct, vark("t", 1)});
    out << "Minimize\n obj: " << expr(obj) << "\n";
  }

  out << "Subject To\n";
  auto row = [&out](const std::string& name, const std::vector<Term>& terms,
                    const char* rel, double rhs) {
    out << " " << name << ": " << expr(terms) << " " << rel << " " << num(rhs) << "\n";
  };

  // Eq. 15: every customer served exactly once
  for (NodeId j : customers) {
    std::vector<Term> t;
    for (int k = 0; k < 2; ++k)
      for (const auto& [i, jj] : arcs[static_cast<size_t>(k)])
        if (jj == j) t.push_back({1.0, xv(k, i, jj)});
    row("eq15_visit_once_" + std::to_string(j), t, "=", 1.0);
  }
  // Eq. 34: each vehicle enters the fixed meet point once
  for (int k = 0; k < 2; ++k) {
    std::vector<Term> t;
    for (const auto& [i, j] : arcs[static_cast<size_t>(k)])
      if (j == meet) t.push_back({1.0, xv(k, i, j)});
    row("eq34_one_meet_" + std::to_string(k + 1), t, "=", 1.0);
  }
  // Eq. 35: same meet point for both vehicles
  {
    std::vector<Term> t;
    for (const auto& [i, j] : arcs[0])
      if (j == meet) t.push_back({1.0, xv(0, i, j)});
    for (const auto& [i, j] : arcs[1])
      if (j == meet) t.push_back({-1.0, xv(1, i, j)});
    row("eq35_same_meet", t, "=", 0.0);
  }
  // Eqs. 18-19: leave and re-enter the own depot once
  for (int k = 0; k < 2; ++k) {
    std::vector<Term> t1, t2;
    for (const auto& [i, j] : arcs[static_cast<size_t>(k)]) {
      if (i == ins.depot(k)) t1.push_back({1.0, xv(k, i, j)});
      if (j == ins.depot(k)) t2.push_back({1.0, xv(k, i, j)});
    }
    row("eq18_depot_start_" + std::to_string(k + 1), t1, "=", 1.0);
    row("eq19_depot_end_" + std::to_string(k + 1), t2, "=", 1.0);
  }
  // Eq. 20: reserved customers leave with their own company
  for (NodeId j : customers) {
    if (ins.node(j).customer_kind != CustomerKind::Reserved) continue;
    const int k = ins.node(j).company;
    std::vector<Term> t;
    for (const auto& [i, jj] : arcs[static_cast<size_t>(k)])
      if (i == j) t.push_back({1.0, xv(k, i, jj)});
    row("eq20_reserved_" + std::to_string(j), t, "=", 1.0);
  }
  // Eq. 22: y links
  for (int k = 0; k < 2; ++k) {
    for (NodeId j : customers) {
      std::vector<Term> t;
      for (const auto& [i, jj] : arcs[static_cast<size_t>(k)])
        if (jj == j) t.push_back({1.0, xv(k, i, jj)});
      t.push_back({-1.0, var1("y", k, j)});
      row("eq22_assign_" + std::to_string(k + 1) + "_" + std::to_string(j), t, "=", 0.0);
    }
  }
  // Eq. 23: flow conservation at customers and the meet point
  for (int k = 0; k < 2; ++k) {
    for (NodeId j : visit[static_cast<size_t>(k)]) {
      if (j == ins.depot(k)) continue;
      std::vector<Term> t;
      for (const auto& [i, jj] : arcs[static_cast<size_t>(k)]) {
        if (jj == j) t.push_back({1.0, xv(k, i, jj)});
        if (i == j) t.push_back({-1.0, xv(k, i, jj)});
      }
      row("eq23_flow_" + std::to_string(k + 1) + "_" + std::to_string(j), t, "=", 0.0);
    }
  }
  // Eq. 8: capacity
  for (int k = 0; k < 2; ++k) {
    std::vector<Term> t;
    for (const auto& [i, j] : arcs[static_cast<size_t>(k)])
      if (ins.is_customer(j)) t.push_back({ins.node(j).demand, xv(k, i, j)});
    row("eq8_capacity_" + std::to_string(k + 1), t, "<=",
        ins.vehicles[static_cast<size_t>(k)].capacity);
  }
  // Eq. 11 with Eq. 12 inlined at the depot (s=0, no charge there)
  for (int k = 0; k < 2; ++k) {
    for (const auto& [i, j] : arcs[static_cast<size_t>(k)]) {
      std::vector<Term> t;
      double rhs = gamma - ins.travel_time(i, j, k);
      if (i == ins.depot(k)) {
        // departure at time zero
      } else {
        t.push_back({1.0, var1("s", k, i)});
        if (ev && ins.node(i).has_charger()) {
          t.push_back({1.0, var1("st", k, i)});
        } else {
          rhs -= ins.node(i).service_min;
        }
      }
      if (j == ins.depot(k)) t.push_back({-1.0, vark("t", k)});
      else t.push_back({-1.0, var1("s", k, j)});
      t.push_back({gamma, xv(k, i, j)});
      row("eq11_time_" + std::to_string(k + 1) + "_" + std::to_string(i) + "_" +
              std::to_string(j),
          t, "<=", rhs);
    }
  }
  // Eq. 12: dwell = service + charging time, at charger-equipped stops
  if (ev) {
    for (int k = 0; k < 2; ++k) {
      for (NodeId i : visit[static_cast<size_t>(k)]) {
        if (i == ins.depot(k) || !ins.node(i).has_charger()) continue;
        std::vector<Term> t{{1.0, var1("st", k, i)},
                            {-60.0 / ins.node(i).charger_kw, var1("d", k, i)}};
        row("eq12_dwell_" + std::to_string(k + 1) + "_" + std::to_string(i), t, "=",
            ins.node(i).service_min);
      }
    }
  }
  // Eq. 10: exchanged goods only after the meet point (prose index set)
  for (int k = 0; k < 2; ++k) {
    for (NodeId j : customers) {
      if (ins.node(j).company == k) continue;
      if (ins.node(j).customer_kind != CustomerKind::Shared) continue;
      std::vector<Term> t{{1.0, var1("s", k, meet)},
                          {-1.0, var1("s", k, j)},
                          {gamma, var1("y", k, j)}};
      row("eq10_exchange_" + std::to_string(k + 1) + "_" + std::to_string(j), t, "<=",
          gamma);
    }
  }
  // Eq. 32: synchronization band at the meet point
  {
    std::vector<Term> t{{1.0, var1("s", 0, meet)}, {-1.0, var1("s", 1, meet)}};
    row("eq32_sync_hi", t, "<=", ins.costs.max_wait_min);
    std::vector<Term> t2{{1.0, var1("s", 1, meet)}, {-1.0, var1("s", 0, meet)}};
    row("eq32_sync_lo", t2, "<=", ins.costs.max_wait_min);
  }
  // battery propagation and charging limits
  if (ev) {
    for (int k = 0; k < 2; ++k) {
      const VehicleParams& veh = ins.vehicles[static_cast<size_t>(k)];
      for (const auto& [i, j] : arcs[static_cast<size_t>(k)]) {
        // b_j <= b_i + d_i - eps*D + B(1 - x)
        std::vector<Term> t;
        double rhs = veh.battery_kwh - veh.consumption_kwh_per_km * ins.dist(i, j);
        if (j == ins.depot(k)) t.push_back({1.0, var1("b", k, j) + "_end"});
        else t.push_back({1.0, var1("b", k, j)});
        if (i == ins.depot(k)) {
          rhs += veh.battery_kwh;  // full battery at departure
        } else {
          t.push_back({-1.0, var1("b", k, i)});
          if (ins.node(i).has_charger()) t.push_back({-1.0, var1("d", k, i)});
        }
        t.push_back({veh.battery_kwh, xv(k, i, j)});
        row("eq6_battery_" + std::to_string(k + 1) + "_" + std::to_string(i) + "_" +
                std::to_string(j),
            t, "<=", rhs);
      }
      for (NodeId i : visit[static_cast<size_t>(k)]) {
        if (i == ins.depot(k) || !ins.node(i).has_charger()) continue;
        std::vector<Term> t{{1.0, var1("d", k, i)}, {1.0, var1("b", k, i)}};
        row("eq30_charge_cap_" + std::to_string(k + 1) + "_" + std::to_string(i), t,
            "<=", veh.battery_kwh);
        std::vector<Term> t2{{1.0, var1("d", k, i)},
                             {-veh.battery_kwh, var1("z", k, i)}};
        row("eq31_charge_flag_" + std::to_string(k + 1) + "_" + std::to_string(i), t2,
            "<=", 0.0);
      }
    }
  }
  // Eq. 29: profit definition (y-linearized), Eq. 2 thresholds
  for (int k = 0; k < 2; ++k) {
    std::vector<Term> t{{1.0, vark("phi", k)}};
    double rhs = 0.0;
    for (NodeId j : customers) {
      const double alpha = profit_ratio(ins, ins.node(j).company, meet, j);
      const double p = ins.node(j).price;
      if (ins.node(j).company == k) {
        rhs += p * alpha;
        t.push_back({-p * (1.0 - alpha), var1("y", k, j)});
      } else {
        t.push_back({-p * (1.0 - alpha), var1("y", k, j)});
      }
    }
    for (const auto& [i, j] : arcs[static_cast<size_t>(k)])
      t.push_back({cd * ins.dist(i, j), xv(k, i, j)});
    t.push_back({ct, vark("t", k)});
    row("eq29_profit_" + std::to_string(k + 1), t, "=", rhs);
    if (ins.costs.profit_threshold[static_cast<size_t>(k)]) {
      std::vector<Term> t2{{1.0, vark("phi", k)}};
      row("eq2_threshold_" + std::to_string(k + 1), t2, ">=",
          *ins.costs.profit_threshold[static_cast<size_t>(k)]);
    }
  }

  // bounds
  out << "Bounds\n";
  for (int k = 0; k < 2; ++k) {
    for (NodeId i : visit[static_cast<size_t>(k)]) {
      if (i == ins.depot(k)) continue;
      if (tw && ins.is_customer(i)) {
        const Node& nd = ins.node(i);
        out << " " << num(nd.earliest) << " <= " << var1("s", k, i) << " <= "
            << (std::isfinite(nd.latest) ? num(nd.latest) : "+inf") << "\n";
      } else {
        out << " 0 <= " << var1("s", k, i) << " <= +inf\n";
      }
    }
    if (ev) {
      const VehicleParams& veh = ins.vehicles[static_cast<size_t>(k)];
      for (NodeId i : visit[static_cast<size_t>(k)]) {
        if (i == ins.depot(k)) continue;
        out << " " << num(veh.battery_min_kwh) << " <= " << var1("b", k, i) << " <= "
            << num(veh.battery_kwh) << "\n";
      }
      out << " " << num(veh.battery_min_kwh) << " <= " << var1("b", k, ins.depot(k))
          << "_end <= " << num(veh.battery_kwh) << "\n";
    }
  }
  out << " 0 <= dummy <= 0\n";

  // integrality
  out << "Binaries\n";
  for (int k = 0; k < 2; ++k)
    for (const auto& [i, j] : arcs[static_cast<size_t>(k)])
      out << " " << xv(k, i, j) << "\n";
  for (int k = 0; k < 2; ++k)
    for (NodeId j : customers) out << " " << var1("y", k, j) << "\n";
  if (ev) {
    for (int k = 0; k < 2; ++k)
      for (NodeId i : visit[static_cast<size_t>(k)])
        if (i != ins.depot(k) && ins.node(i).has_charger())
          out << " " << var1("z", k, i) << "\n";
  }
  out << "End\n";
}

Solution import_milp_solution(const Instance& ins, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open");
  std::map<std::string, double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == '\\') continue;
    std::istringstream ss(line);
    std::string name;
    double value;
    if (!(ss >> name >> value))
      throw std::invalid_argument(path + ": malformed line: " + line);
    values[name] = value;
  }

  Solution sol;
  NodeId meet = -1;
  for (int k = 0; k < 2; ++k) {
    // successor map from active arcs
    std::map<NodeId, NodeId> next;
    for (const auto& [name, value] : values) {
      if (value < 0.5) continue;
      if (name.rfind("x_" + std::to_string(k + 1) + "_", 0) != 0) continue;
      const std::string rest = name.substr(4);
      const size_t us = rest.find('_');
      if (us == std::string::npos) continue;
      const NodeId i = static_cast<NodeId>(std::stol(rest.substr(0, us)));
      const NodeId j = static_cast<NodeId>(std::stol(rest.substr(us + 1)));
      next[i] = j;
      if (ins.is_meet_point(j)) meet = j;
    }
    Route& route = sol.routes[static_cast<size_t>(k)];
    route.company = k;
    NodeId cur = ins.depot(k);
    Visit first;
    first.node = cur;
    first.service_start = 0.0;
    route.visits.push_back(first);
    size_t guard = 0;
    while (next.count(cur) && guard++ <= next.size()) {
      cur = next[cur];
      Visit v;
      v.node = cur;
      const std::string skey = "s_" + std::to_string(k + 1) + "_" + std::to_string(cur);
      const std::string dkey = "d_" + std::to_string(k + 1) + "_" + std::to_string(cur);
      if (cur == ins.depot(k)) {
        const auto it = values.find("t_" + std::to_string(k + 1));
        v.service_start = it != values.end() ? it->second : 0.0;
      } else {
        const auto it = values.find(skey);
        v.service_start = it != values.end() ? it->second : 0.0;
        const auto dit = values.find(dkey);
        v.charge_kwh = dit != values.end() ? std::max(0.0, dit->second) : 0.0;
      }
      route.visits.push_back(v);
      if (cur == ins.depot(k)) break;
    }
    if (route.visits.back().node != ins.depot(k))
      throw std::invalid_argument(path + ": arcs of vehicle " + std::to_string(k + 1) +
                                  " do not close a depot tour");
    // recompute the battery trace from the charges
    std::vector<NodeId> seq;
    std::vector<double> charge;
    for (const Visit& v : route.visits) {
      seq.push_back(v.node);
      charge.push_back(v.charge_kwh);
    }
    BatteryTrace trace = simulate_battery(ins, k, seq, charge);
    for (size_t p = 0; p < route.visits.size() && p < trace.steps.size(); ++p)
      route.visits[p].arrival_battery_kwh = trace.steps[p].arrival_kwh;
    if (!ins.electric())
      for (Visit& v : route.visits) v.arrival_battery_kwh = 0.0;
  }
  if (meet >= 0) sol.meet_point = meet;
  const CostBreakdown cost = objective(ins, sol);
  sol.total_cost = cost.total;
  sol.energy_cost = cost.energy;
  sol.labor_cost = cost.labor;
  for (int k = 0; k < 2; ++k)
    sol.profits[static_cast<size_t>(k)] = company_profit(ins, sol, k);
  return sol;
}

}  // namespace coevrp
