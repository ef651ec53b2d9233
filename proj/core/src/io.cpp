#include "coevrp/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coevrp/evaluator.hpp"
#include "json.hpp"

namespace coevrp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& what) {
  throw std::invalid_argument(origin + ": " + path + ": " + what);
}

double get_num(const json& j, const std::string& origin, const std::string& path,
               const char* key, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(origin, path + "." + key, "missing");
  }
  if (!j[key].is_number()) fail(origin, path + "." + key, "not a number");
  return j[key].get<double>();
}

json node_xy(const Node& nd) {
  json j = json::array();
  j.push_back((*nd.xy)[0]);
  j.push_back((*nd.xy)[1]);
  return j;
}

void read_xy(const json& j, Node& nd) {
  if (j.contains("xy") && !j["xy"].is_null())
    nd.xy = {{j["xy"][0].get<double>(), j["xy"][1].get<double>()}};
}

}  // namespace

std::string instance_to_json_text(const Instance& ins) {
  json root;
  root["name"] = ins.name;

  json depots = json::array();
  json customers = json::array();
  json meets = json::array();
  for (const Node& nd : ins.nodes) {
    json n;
    n["label"] = nd.label;
    if (nd.xy) n["xy"] = node_xy(nd);
    switch (nd.kind) {
      case NodeKind::Depot:
        n["company"] = nd.company + 1;
        depots.push_back(n);
        break;
      case NodeKind::Customer:
        n["company"] = nd.company + 1;
        n["kind"] = nd.customer_kind == CustomerKind::Shared ? "shared" : "reserved";
        n["demand"] = nd.demand;
        n["price"] = nd.price;
        n["window"] = json::array(
            {nd.earliest, std::isfinite(nd.latest) ? json(nd.latest) : json(nullptr)});
        n["service_min"] = nd.service_min;
        if (nd.has_charger()) n["charger_kw"] = nd.charger_kw;
        customers.push_back(n);
        break;
      case NodeKind::MeetPoint:
        n["service_min"] = nd.service_min;
        if (nd.has_charger()) n["charger_kw"] = nd.charger_kw;
        meets.push_back(n);
        break;
    }
  }
  root["nodes"] = {{"depots", depots}, {"customers", customers}, {"meet_points", meets}};

  const size_t n = ins.nodes.size();
  json dist = json::array();
  for (size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (size_t j = 0; j < n; ++j) {
      const double d = ins.distance_km[i * n + j];
      row.push_back(std::isfinite(d) ? json(d) : json(nullptr));
    }
    dist.push_back(row);
  }
  root["distance_km"] = dist;

  if (ins.travel_time_min) {
    json tt = json::array();
    for (size_t i = 0; i < n; ++i) {
      json row = json::array();
      for (size_t j = 0; j < n; ++j) row.push_back((*ins.travel_time_min)[i * n + j]);
      tt.push_back(row);
    }
    root["travel_time_min"] = tt;
  }

  json vehicles = json::array();
  for (const VehicleParams& v : ins.vehicles) {
    vehicles.push_back({{"company", v.company + 1},
                        {"capacity", v.capacity},
                        {"battery_kwh", v.battery_kwh},
                        {"battery_min_kwh", v.battery_min_kwh},
                        {"consumption_kwh_per_km", v.consumption_kwh_per_km},
                        {"speed_kmh", v.speed_kmh},
                        {"count", v.count}});
  }
  root["vehicles"] = vehicles;

  json costs;
  costs["cost_per_km_ev"] = ins.costs.cost_per_km_ev;
  costs["cost_per_km_conventional"] = ins.costs.cost_per_km_conventional;
  costs["cost_per_min"] = ins.costs.cost_per_min;
  costs["max_wait_min"] = ins.costs.max_wait_min;
  if (ins.costs.big_m_min) costs["big_m_min"] = *ins.costs.big_m_min;
  if (ins.costs.profit_threshold[0] || ins.costs.profit_threshold[1]) {
    costs["profit_thresholds"] =
        json::array({ins.costs.profit_threshold[0] ? json(*ins.costs.profit_threshold[0])
                                                   : json(nullptr),
                     ins.costs.profit_threshold[1] ? json(*ins.costs.profit_threshold[1])
                                                   : json(nullptr)});
  }
  root["costs"] = costs;
  root["modes"] = {{"ev", ins.electric()}, {"time_windows", ins.tw_enforced()}};
  return root.dump(2);
}

Instance instance_from_json_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(origin + ": parse error: " + e.what());
  }

  Instance ins;
  ins.name = root.value("name", "");
  if (!root.contains("nodes")) fail(origin, "nodes", "missing");
  const json& nodes = root["nodes"];

  if (!nodes.contains("depots") || nodes["depots"].size() != 2)
    fail(origin, "nodes.depots", "exactly two depots required");
  int di = 0;
  for (const json& d : nodes["depots"]) {
    Node nd;
    nd.kind = NodeKind::Depot;
    nd.company = static_cast<int>(get_num(d, origin, "nodes.depots", "company")) - 1;
    nd.label = d.value("label", "D" + std::to_string(di + 1));
    read_xy(d, nd);
    ins.nodes.push_back(nd);
    ++di;
  }

  int ci = 0;
  for (const json& c : nodes.value("customers", json::array())) {
    const std::string path = "nodes.customers[" + std::to_string(ci) + "]";
    Node nd;
    nd.kind = NodeKind::Customer;
    nd.company = static_cast<int>(get_num(c, origin, path, "company")) - 1;
    const std::string kind = c.value("kind", "shared");
    if (kind != "shared" && kind != "reserved")
      fail(origin, path + ".kind", "must be 'shared' or 'reserved'");
    nd.customer_kind = kind == "shared" ? CustomerKind::Shared : CustomerKind::Reserved;
    nd.demand = get_num(c, origin, path, "demand", 1.0);
    nd.price = get_num(c, origin, path, "price", 0.0);
    if (c.contains("window")) {
      const json& w = c["window"];
      if (!w.is_array() || w.size() != 2) fail(origin, path + ".window", "need [e, l]");
      nd.earliest = w[0].get<double>();
      nd.latest = w[1].is_null() ? kNoDeadline : w[1].get<double>();
    }
    nd.service_min = get_num(c, origin, path, "service_min", 0.0);
    if (c.contains("charger_kw") && !c["charger_kw"].is_null())
      nd.charger_kw = c["charger_kw"].get<double>();
    nd.label = c.value("label", std::to_string(ci + 1));
    read_xy(c, nd);
    ins.nodes.push_back(nd);
    ++ci;
  }

  int mi = 0;
  for (const json& m : nodes.value("meet_points", json::array())) {
    const std::string path = "nodes.meet_points[" + std::to_string(mi) + "]";
    Node nd;
    nd.kind = NodeKind::MeetPoint;
    nd.service_min = get_num(m, origin, path, "service_min", 0.0);
    if (m.contains("charger_kw") && !m["charger_kw"].is_null())
      nd.charger_kw = m["charger_kw"].get<double>();
    nd.label = m.value("label", "m" + std::to_string(mi + 1));
    read_xy(m, nd);
    ins.nodes.push_back(nd);
    ++mi;
  }

  const size_t n = ins.nodes.size();
  if (!root.contains("distance_km")) fail(origin, "distance_km", "missing");
  const json& dist = root["distance_km"];
  if (dist.size() != n) fail(origin, "distance_km", "row count != node count");
  ins.distance_km.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n)
      fail(origin, "distance_km[" + std::to_string(i) + "]", "column count != node count");
    for (size_t j = 0; j < n; ++j) {
      const json& cell = dist[i][j];
      ins.distance_km[i * n + j] = cell.is_null() ? kForbiddenArc : cell.get<double>();
    }
  }
  if (root.contains("travel_time_min")) {
    std::vector<double> tt(n * n, 0.0);
    const json& jt = root["travel_time_min"];
    if (jt.size() != n) fail(origin, "travel_time_min", "row count != node count");
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) tt[i * n + j] = jt[i][j].get<double>();
    ins.travel_time_min = std::move(tt);
  }

  if (!root.contains("vehicles") || root["vehicles"].size() != 2)
    fail(origin, "vehicles", "exactly two entries required");
  for (const json& v : root["vehicles"]) {
    const int k = static_cast<int>(get_num(v, origin, "vehicles", "company")) - 1;
    if (k != 0 && k != 1) fail(origin, "vehicles.company", "must be 1 or 2");
    VehicleParams& vp = ins.vehicles[static_cast<size_t>(k)];
    vp.company = k;
    vp.capacity = get_num(v, origin, "vehicles", "capacity");
    vp.battery_kwh = get_num(v, origin, "vehicles", "battery_kwh", 0.0);
    vp.battery_min_kwh = get_num(v, origin, "vehicles", "battery_min_kwh", 0.0);
    vp.consumption_kwh_per_km = get_num(v, origin, "vehicles", "consumption_kwh_per_km", 1.0);
    vp.speed_kmh = get_num(v, origin, "vehicles", "speed_kmh", 40.0);
    vp.count = static_cast<int>(get_num(v, origin, "vehicles", "count", 1.0));
  }

  if (root.contains("costs")) {
    const json& c = root["costs"];
    ins.costs.cost_per_km_ev = get_num(c, origin, "costs", "cost_per_km_ev", 3.0);
    ins.costs.cost_per_km_conventional =
        get_num(c, origin, "costs", "cost_per_km_conventional", 6.0);
    ins.costs.cost_per_min = get_num(c, origin, "costs", "cost_per_min", 2.05);
    ins.costs.max_wait_min = get_num(c, origin, "costs", "max_wait_min", 5.0);
    if (c.contains("big_m_min") && !c["big_m_min"].is_null())
      ins.costs.big_m_min = c["big_m_min"].get<double>();
    if (c.contains("profit_thresholds") && !c["profit_thresholds"].is_null()) {
      const json& t = c["profit_thresholds"];
      if (!t.is_array() || t.size() != 2)
        fail(origin, "costs.profit_thresholds", "need two entries");
      for (int k = 0; k < 2; ++k)
        if (!t[static_cast<size_t>(k)].is_null())
          ins.costs.profit_threshold[static_cast<size_t>(k)] =
              t[static_cast<size_t>(k)].get<double>();
    }
  }
  if (root.contains("modes")) {
    const json& m = root["modes"];
    ins.ev_mode = m.value("ev", true) ? EvMode::Electric : EvMode::Conventional;
    ins.tw_mode = m.value("time_windows", true) ? TwMode::Enforced : TwMode::Ignored;
  }

  try {
    ins.finalize();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  return ins;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_json_text(buf.str(), path);
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");
  out << instance_to_json_text(instance) << "\n";
}

std::string solution_to_json_text(const Instance& ins, const Solution& sol) {
  json root;
  root["instance"] = ins.name;
  root["meet_point"] = sol.meet_point ? json(*sol.meet_point) : json(nullptr);
  root["restricted_company"] =
      sol.restricted_company ? json(*sol.restricted_company + 1) : json(nullptr);
  switch (sol.status) {
    case SolveStatus::Feasible: root["status"] = "feasible"; break;
    case SolveStatus::BestEffort: root["status"] = "best_effort"; break;
    case SolveStatus::NoFeasibleSolution: root["status"] = "no_feasible_solution"; break;
  }
  json routes = json::array();
  for (const Route& r : sol.routes) {
    json visits = json::array();
    for (const Visit& v : r.visits) {
      visits.push_back({{"node", v.node},
                        {"label", ins.node(v.node).label},
                        {"service_start", v.service_start},
                        {"charge_kwh", v.charge_kwh},
                        {"arrival_battery_kwh", v.arrival_battery_kwh}});
    }
    routes.push_back({{"company", r.company + 1}, {"visits", visits}});
  }
  root["routes"] = routes;
  root["total_cost"] = sol.total_cost;
  root["energy_cost"] = sol.energy_cost;
  root["labor_cost"] = sol.labor_cost;
  root["profits"] = json::array({sol.profits[0], sol.profits[1]});
  return root.dump(2);
}

void save_solution(const Instance& instance, const Solution& solution,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");
  out << solution_to_json_text(instance, solution) << "\n";
}

Solution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": parse error: " + e.what());
  }
  Solution sol;
  if (root.contains("meet_point") && !root["meet_point"].is_null())
    sol.meet_point = root["meet_point"].get<NodeId>();
  if (root.contains("restricted_company") && !root["restricted_company"].is_null())
    sol.restricted_company = root["restricted_company"].get<int>() - 1;
  const std::string status = root.value("status", "feasible");
  sol.status = status == "feasible"       ? SolveStatus::Feasible
               : status == "best_effort" ? SolveStatus::BestEffort
                                          : SolveStatus::NoFeasibleSolution;
  const json& routes = root["routes"];
  if (!routes.is_array() || routes.size() != 2)
    throw std::invalid_argument(path + ": routes: need exactly two");
  for (const json& r : routes) {
    const int k = r["company"].get<int>() - 1;
    Route& route = sol.routes[static_cast<size_t>(k)];
    route.company = k;
    for (const json& v : r["visits"]) {
      Visit visit;
      visit.node = v["node"].get<NodeId>();
      visit.service_start = v.value("service_start", 0.0);
      visit.charge_kwh = v.value("charge_kwh", 0.0);
      visit.arrival_battery_kwh = v.value("arrival_battery_kwh", 0.0);
      route.visits.push_back(visit);
    }
  }
  sol.total_cost = root.value("total_cost", 0.0);
  sol.energy_cost = root.value("energy_cost", 0.0);
  sol.labor_cost = root.value("labor_cost", 0.0);
  if (root.contains("profits")) {
    sol.profits[0] = root["profits"][0].get<double>();
    sol.profits[1] = root["profits"][1].get<double>();
  }
  return sol;
}

std::string report_to_json_text(const EvalReport& rep) {
  json root;
  root["feasible"] = rep.feasible;
  json violations = json::array();
  for (const Violation& v : rep.violations) {
    violations.push_back({{"constraint", v.constraint_id},
                          {"company", v.company >= 0 ? json(v.company + 1) : json(nullptr)},
                          {"node", v.node >= 0 ? json(v.node) : json(nullptr)},
                          {"magnitude", v.magnitude},
                          {"detail", v.detail}});
  }
  root["violations"] = violations;
  root["total_cost"] = rep.total_cost;
  root["energy_cost"] = rep.energy_cost;
  root["labor_cost"] = rep.labor_cost;
  root["profits"] = json::array({rep.profits[0], rep.profits[1]});
  root["threshold_ok"] = json::array({rep.threshold_ok[0], rep.threshold_ok[1]});
  return root.dump(2);
}

bool instances_equal(const Instance& a, const Instance& b) {
  if (a.name != b.name || a.nodes.size() != b.nodes.size()) return false;
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    const Node& x = a.nodes[i];
    const Node& y = b.nodes[i];
    if (x.kind != y.kind || x.company != y.company ||
        x.customer_kind != y.customer_kind || x.demand != y.demand ||
        x.price != y.price || x.earliest != y.earliest || x.latest != y.latest ||
        x.service_min != y.service_min || x.charger_kw != y.charger_kw ||
        x.label != y.label || x.xy != y.xy)
      return false;
  }
  if (a.distance_km != b.distance_km) return false;
  if (a.travel_time_min != b.travel_time_min) return false;
  for (int k = 0; k < 2; ++k) {
    const VehicleParams& x = a.vehicles[static_cast<size_t>(k)];
    const VehicleParams& y = b.vehicles[static_cast<size_t>(k)];
    if (x.capacity != y.capacity || x.battery_kwh != y.battery_kwh ||
        x.battery_min_kwh != y.battery_min_kwh ||
        x.consumption_kwh_per_km != y.consumption_kwh_per_km ||
        x.speed_kmh != y.speed_kmh || x.count != y.count)
      return false;
  }
  const CostParams& ca = a.costs;
  const CostParams& cb = b.costs;
  return ca.cost_per_km_ev == cb.cost_per_km_ev &&
         ca.cost_per_km_conventional == cb.cost_per_km_conventional &&
         ca.cost_per_min == cb.cost_per_min && ca.max_wait_min == cb.max_wait_min &&
         ca.big_m_min == cb.big_m_min && ca.profit_threshold == cb.profit_threshold &&
         a.ev_mode == b.ev_mode && a.tw_mode == b.tw_mode;
}

}  // namespace coevrp
