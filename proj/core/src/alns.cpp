#include "coevrp/alns.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "coevrp/charging_lp.hpp"
#include "coevrp/evaluator.hpp"
#include "coevrp/exact.hpp"
#include "json.hpp"

namespace coevrp {

namespace {

bool alns_debug() {
  static const bool on = std::getenv("COEVRP_ALNS_DEBUG") != nullptr;
  return on;
}

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// per-route screening state. Two earliest-start profiles are kept: `fwd`
// simulates a late-as-possible charging policy (realistic dwell times) and
// `fwd0` the zero-charge relaxation (a sound necessary condition; the
// charging LP stays the arbiter). Battery prospects use a charge-to-full
// relaxation. All O(length) to rebuild.
// ---------------------------------------------------------------------------
struct RouteState {
  std::vector<NodeId> seq;
  int meet_pos = -1;
  double dist = 0.0;
  bool arcs_ok = true;
  bool time_ok = true;   // policy windows hold
  bool time_ok0 = true;  // zero-charge windows hold (necessary for the LP)
  bool batt_ok = true;
  double t0 = 0.0;  // policy completion estimate
  std::vector<double> fwd;   // policy earliest starts
  std::vector<double> slack;
  std::vector<double> wait_suffix;
  std::vector<double> dwell;  // policy service + charging minutes per stop
  std::vector<double> fwd0;   // zero-charge earliest starts
  std::vector<double> slack0;
  std::vector<double> maxbatt;
  std::vector<double> reach;
  double min_precharge = kInf;  // min zero-charge arrival battery

  size_t size() const { return seq.size(); }
};

void recompute(const Instance& ins, int company, RouteState& st) {
  const size_t n = st.seq.size();
  st.fwd.assign(n, 0.0);
  st.slack.assign(n, kInf);
  st.wait_suffix.assign(n, 0.0);
  st.dwell.assign(n, 0.0);
  st.fwd0.assign(n, 0.0);
  st.slack0.assign(n, kInf);
  st.maxbatt.assign(n, 0.0);
  st.reach.assign(n, kInf);
  st.dist = 0.0;
  st.arcs_ok = true;
  st.time_ok = true;
  st.time_ok0 = true;
  st.batt_ok = true;
  st.meet_pos = -1;
  st.min_precharge = kInf;
  if (n == 0) {
    st.t0 = 0.0;
    return;
  }
  const VehicleParams& veh = ins.vehicles[static_cast<size_t>(company)];
  const bool ev = ins.electric();
  double ready = 0.0;    // policy
  double ready0 = 0.0;   // zero charge
  double batt = veh.battery_kwh;      // policy battery
  double batt_max = veh.battery_kwh;  // charge-to-full relaxation
  double batt_zero = veh.battery_kwh;
  for (size_t i = 0; i < n; ++i) {
    const Node& nd = ins.node(st.seq[i]);
    if (ins.is_meet_point(st.seq[i])) st.meet_pos = static_cast<int>(i);
    const bool windowed = ins.tw_enforced() && nd.kind == NodeKind::Customer;
    const double e = windowed ? nd.earliest : 0.0;
    double s = std::max(ready, e);
    double s0 = std::max(ready0, e);
    if (windowed && s > nd.latest + kEps) st.time_ok = false;
    if (windowed && s0 > nd.latest + kEps) st.time_ok0 = false;
    st.fwd[i] = s;
    st.fwd0[i] = s0;
    st.maxbatt[i] = batt_max;
    st.dwell[i] = nd.service_min;
    if (ev) {
      st.min_precharge = std::min(st.min_precharge, batt_zero);
      if (batt_max < veh.battery_min_kwh - kEps) st.batt_ok = false;
    }
    if (i + 1 < n) {
      if (!ins.arc_allowed(st.seq[i], st.seq[i + 1])) {
        st.arcs_ok = false;
        ready = s + nd.service_min;
        ready0 = s0 + nd.service_min;
        continue;
      }
      const double d = ins.dist(st.seq[i], st.seq[i + 1]);
      st.dist += d;
      const double tt = ins.travel_time(st.seq[i], st.seq[i + 1], company);
      if (ev) {
        const double drain = veh.consumption_kwh_per_km * d;
        if (nd.has_charger()) {
          // charge into the next stop's waiting slack first (absorbed for free)
          const Node& nx = ins.node(st.seq[i + 1]);
          const bool nx_windowed = ins.tw_enforced() && nx.kind == NodeKind::Customer;
          const double arr_next = s + st.dwell[i] + tt;
          const double wait = nx_windowed ? std::max(0.0, nx.earliest - arr_next) : 0.0;
          const double free_kwh =
              std::min(wait * nd.charger_kw / 60.0, veh.battery_kwh - batt);
          if (free_kwh > kEps) {
            batt += free_kwh;
            st.dwell[i] += 60.0 * free_kwh / nd.charger_kw;
          }
        }
        // then cover any remaining deficit of the next arc right here
        if (batt - drain < veh.battery_min_kwh - kEps) {
          const double need = veh.battery_min_kwh - (batt - drain);
          if (nd.has_charger() && need <= veh.battery_kwh - batt + kEps) {
            batt += need;
            st.dwell[i] += 60.0 * need / nd.charger_kw;
          } else {
            st.time_ok = false;  // policy cannot cover it; LP may still manage
          }
        }
        batt -= drain;
        batt_max = (nd.has_charger() ? veh.battery_kwh : batt_max) - drain;
        batt_zero -= drain;
      }
      ready = s + st.dwell[i] + tt;
      ready0 = s0 + nd.service_min + tt;
    }
  }
  st.t0 = st.fwd[n - 1];
  // backward pass: slacks, waits, battery reach
  for (size_t ri = n; ri-- > 0;) {
    const Node& nd = ins.node(st.seq[ri]);
    const bool windowed = ins.tw_enforced() && nd.kind == NodeKind::Customer;
    const double own = windowed ? nd.latest - st.fwd[ri] : kInf;
    const double own0 = windowed ? nd.latest - st.fwd0[ri] : kInf;
    if (ri + 1 < n) {
      const double tt = ins.arc_allowed(st.seq[ri], st.seq[ri + 1])
                            ? ins.travel_time(st.seq[ri], st.seq[ri + 1], company)
                            : 0.0;
      const double wait = std::max(0.0, st.fwd[ri + 1] - (st.fwd[ri] + st.dwell[ri] + tt));
      st.slack[ri] = std::min(own, st.slack[ri + 1] + wait);
      st.wait_suffix[ri] = st.wait_suffix[ri + 1] + wait;
      const double wait0 =
          std::max(0.0, st.fwd0[ri + 1] - (st.fwd0[ri] + nd.service_min + tt));
      st.slack0[ri] = std::min(own0, st.slack0[ri + 1] + wait0);
    } else {
      st.slack[ri] = own;
      st.slack0[ri] = own0;
    }
    if (ins.electric()) {
      const double margin = st.maxbatt[ri] - veh.battery_min_kwh;
      if (nd.has_charger() || ri + 1 == n)
        st.reach[ri] = margin;
      else
        st.reach[ri] = std::min(margin, st.reach[ri + 1]);
    }
  }
}

struct InsertEval {
  bool ok = false;
  double delta_dist = 0.0;
  double cost = kInf;
};

enum class ScreenMode { Policy, Optimistic };

/// Screens inserting customer `c` before position `pos` (1 <= pos < size).
/// Policy mode uses the charging-aware dwell times; Optimistic mode the
/// zero-charge relaxation. Battery prospects are checked with charge-to-full.
InsertEval eval_insert(const Instance& ins, int company, const RouteState& st,
                       size_t pos, NodeId c, ScreenMode mode = ScreenMode::Policy) {
  InsertEval ev;
  const NodeId u = st.seq[pos - 1];
  const NodeId v = st.seq[pos];
  if (!ins.arc_allowed(u, c) || !ins.arc_allowed(c, v)) return ev;
  const Node& ndc = ins.node(c);
  const Node& ndu = ins.node(u);

  const bool policy = mode == ScreenMode::Policy;
  const std::vector<double>& fwd = policy ? st.fwd : st.fwd0;
  const std::vector<double>& slack = policy ? st.slack : st.slack0;
  const double dwell_u = policy ? st.dwell[pos - 1] : ndu.service_min;

  const double tt_uc = ins.travel_time(u, c, company);
  const double arr_c = fwd[pos - 1] + dwell_u + tt_uc;
  const bool windowed = ins.tw_enforced();
  double s_c = arr_c;
  if (windowed) {
    if (arr_c > ndc.latest + kEps) return ev;
    s_c = std::max(arr_c, ndc.earliest);
  }
  const double arr_v_new = s_c + ndc.service_min + ins.travel_time(c, v, company);
  const double push = std::max(0.0, arr_v_new - fwd[pos]);
  if (windowed && push > slack[pos] + kEps) return ev;

  const double d_uc = ins.dist(u, c);
  const double d_cv = ins.dist(c, v);
  const double d_uv = ins.dist(u, v);
  ev.delta_dist = d_uc + d_cv - d_uv;

  double charge_term = 0.0;
  if (ins.electric()) {
    const VehicleParams& veh = ins.vehicles[static_cast<size_t>(company)];
    const double eps_rate = veh.consumption_kwh_per_km;
    const double dep_u = ndu.has_charger() ? veh.battery_kwh : st.maxbatt[pos - 1];
    const double at_c = dep_u - eps_rate * d_uc;
    if (at_c < veh.battery_min_kwh - kEps) return ev;
    const double dep_c = ndc.has_charger() ? veh.battery_kwh : at_c;
    const double at_v = dep_c - eps_rate * d_cv;
    if (at_v < veh.battery_min_kwh - kEps) return ev;
    const double drop = st.maxbatt[pos] - at_v;
    if (drop > st.reach[pos] + kEps) return ev;
    if (st.min_precharge < veh.battery_min_kwh)  // charging already binding
      charge_term = 60.0 * eps_rate * std::max(0.0, ev.delta_dist) /
                    std::max(1.0, ndc.has_charger() ? ndc.charger_kw : 60.0);
  }
  const double delay = std::max(0.0, push - st.wait_suffix[pos]);
  ev.cost = ins.cost_per_km() * ev.delta_dist +
            ins.costs.cost_per_min * (delay + charge_term);
  ev.ok = true;
  return ev;
}

// ---------------------------------------------------------------------------
// route completion cache: charging LP results keyed by exact sequence
// ---------------------------------------------------------------------------
struct RouteKey {
  int company;
  std::vector<NodeId> seq;
  bool operator==(const RouteKey& other) const {
    return company == other.company && seq == other.seq;
  }
};
struct RouteKeyHash {
  size_t operator()(const RouteKey& k) const {
    std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(k.company);
    for (NodeId id : k.seq) {
      h ^= static_cast<std::uint64_t>(id) + 0x9e3779b97f4a7c15ULL;
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
  }
};

struct Completion {
  bool feasible = false;
  double completion_min = 0.0;
  std::vector<double> charge;
  std::vector<double> starts;
};

class LpCache {
 public:
  const Completion& complete(const Instance& ins, int company,
                             const std::vector<NodeId>& seq) {
    RouteKey key{company, seq};
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    Completion comp;
    RouteLp lp = build_route_lp(ins, company, seq);
    ChargingResult res = solve_charging(lp);
    if (res.ok()) {
      comp.feasible = true;
      comp.completion_min = res.plan->completion_min;
      comp.charge = std::move(res.plan->charge_kwh);
      comp.starts = std::move(res.plan->service_start);
    }
    if (map_.size() > 200000) map_.clear();
    return map_.emplace(std::move(key), std::move(comp)).first->second;
  }

 private:
  std::unordered_map<RouteKey, Completion, RouteKeyHash> map_;
};

// ---------------------------------------------------------------------------
// working solution
// ---------------------------------------------------------------------------
struct Work {
  std::array<RouteState, 2> routes;
  NodeId meet = -1;
  bool complete_ok = false;
  std::array<double, 2> completion{};   // LP T per route
  std::array<double, 2> meet_start{};   // s at the meet point per route
  std::array<std::vector<double>, 2> charge;
  std::array<std::vector<double>, 2> starts;
  double dist_total = 0.0;
  double sync_excess = 0.0;
  double penalized = kInf;
};

struct Engine {
  const Instance& ins;
  AlnsConfig cfg;
  bool collab = true;
  int restricted = -1;  // company when non-collaborative
  double lambda_sync = 0.0;
  std::vector<NodeId> scope;  // customers being planned
  std::unordered_map<NodeId, std::vector<NodeId>> knn;
  LpCache cache;

  Engine(const Instance& instance, const AlnsConfig& config, bool collaborative,
         int company)
      : ins(instance), cfg(config), collab(collaborative), restricted(company) {
    lambda_sync = cfg.sync_penalty_per_min > 0 ? cfg.sync_penalty_per_min
                                               : 10.0 * ins.costs.cost_per_min;
    scope = collab ? ins.customer_ids() : ins.customers_of(company);
    const int k = std::min<int>(cfg.neighbor_k, static_cast<int>(scope.size()) - 1);
    for (NodeId c : scope) {
      std::vector<std::pair<double, NodeId>> near;
      for (NodeId o : scope) {
        if (o == c || !ins.arc_allowed(c, o) || !ins.arc_allowed(o, c)) continue;
        near.push_back({0.5 * (ins.dist(c, o) + ins.dist(o, c)), o});
      }
      std::sort(near.begin(), near.end());
      std::vector<NodeId> ids;
      for (int i = 0; i < k && i < static_cast<int>(near.size()); ++i)
        ids.push_back(near[static_cast<size_t>(i)].second);
      knn.emplace(c, std::move(ids));
    }
  }

  bool active_route(int k) const { return collab || k == restricted; }

  int removal_quota() const {
    return std::max(1, static_cast<int>(std::ceil(
                           cfg.removal_fraction * static_cast<double>(scope.size()))));
  }

  // ---- completion ---------------------------------------------------------
  void complete(Work& w) {
    w.complete_ok = true;
    w.dist_total = 0.0;
    double labor = 0.0;
    for (int k = 0; k < 2; ++k) {
      if (!active_route(k)) {
        w.completion[static_cast<size_t>(k)] = 0.0;
        continue;
      }
      RouteState& st = w.routes[static_cast<size_t>(k)];
      if (!st.arcs_ok || !st.time_ok0 || !st.batt_ok) {
        w.complete_ok = false;
        return;
      }
      const Completion& comp = cache.complete(ins, k, st.seq);
      if (!comp.feasible) {
        w.complete_ok = false;
        return;
      }
      w.completion[static_cast<size_t>(k)] = comp.completion_min;
      w.charge[static_cast<size_t>(k)] = comp.charge;
      w.starts[static_cast<size_t>(k)] = comp.starts;
      if (collab && st.meet_pos >= 0)
        w.meet_start[static_cast<size_t>(k)] =
            comp.starts[static_cast<size_t>(st.meet_pos)];
      w.dist_total += st.dist;
      labor += comp.completion_min;
    }
    w.sync_excess = 0.0;
    if (collab)
      w.sync_excess = std::max(
          0.0, std::abs(w.meet_start[0] - w.meet_start[1]) - ins.costs.max_wait_min);
    w.penalized = ins.cost_per_km() * w.dist_total + ins.costs.cost_per_min * labor +
                  lambda_sync * w.sync_excess;
  }

  // lower bound on the strict (synchronized) total cost of this work
  double strict_lower(const Work& w) const {
    return ins.cost_per_km() * w.dist_total +
           ins.costs.cost_per_min * (w.completion[0] + w.completion[1]);
  }

  // ---- construction -------------------------------------------------------
  bool nn_construct(RouteState& st, int company, const std::vector<NodeId>& customers) {
    st.seq = {ins.depot(company), ins.depot(company)};
    recompute(ins, company, st);
    std::vector<NodeId> pending = customers;
    while (!pending.empty()) {
      // append the nearest feasible customer at the tail position
      double best_d = kInf;
      size_t best_idx = pending.size();
      const size_t tail = st.seq.size() - 1;
      for (size_t i = 0; i < pending.size(); ++i) {
        InsertEval ev = eval_insert(ins, company, st, tail, pending[i]);
        if (!ev.ok) continue;
        const double d = ins.dist(st.seq[tail - 1], pending[i]);
        if (d < best_d - kEps) {
          best_d = d;
          best_idx = i;
        }
      }
      if (best_idx == pending.size()) return false;
      st.seq.insert(st.seq.begin() + static_cast<long>(tail), pending[best_idx]);
      pending.erase(pending.begin() + static_cast<long>(best_idx));
      recompute(ins, company, st);
    }
    return true;
  }

  /// Deadline-ordered greedy insertion over one company's own customers.
  bool deadline_construct(RouteState& st, int k, std::vector<NodeId> own,
                          ScreenMode mode) {
    st.seq = {ins.depot(k), ins.depot(k)};
    recompute(ins, k, st);
    std::sort(own.begin(), own.end(), [this](NodeId a, NodeId b) {
      const double la = ins.node(a).latest;
      const double lb = ins.node(b).latest;
      return la != lb ? la < lb : a < b;
    });
    for (NodeId c : own) {
      double best = kInf;
      size_t best_pos = 0;
      for (size_t pos = 1; pos < st.seq.size(); ++pos) {
        InsertEval ev = eval_insert(ins, k, st, pos, c, mode);
        if (ev.ok && ev.cost < best - kEps) {
          best = ev.cost;
          best_pos = pos;
        }
      }
      if (best_pos == 0) {
        if (alns_debug())
          std::fprintf(stderr, "[alns] deadline_construct: no slot for %s (mode %d)\n",
                       ins.node(c).label.c_str(), 0);
        return false;
      }
      st.seq.insert(st.seq.begin() + static_cast<long>(best_pos), c);
      recompute(ins, k, st);
    }
    return true;
  }

  /// One construction attempt; 0 = nearest neighbor, 1 = deadline-policy,
  /// 2 = deadline-optimistic, 3 = greedy repair from empty, 4 = regret repair.
  bool construct_routes(Work& w, int strategy) {
    std::vector<NodeId> all_removed;
    for (int k = 0; k < 2; ++k) {
      RouteState& st = w.routes[static_cast<size_t>(k)];
      st.seq.clear();
      if (active_route(k)) st.seq = {ins.depot(k), ins.depot(k)};
      recompute(ins, k, st);
      if (!active_route(k)) continue;
      std::vector<NodeId> own = ins.customers_of(k);
      switch (strategy) {
        case 0:
          if (!nn_construct(st, k, own)) return false;
          break;
        case 1:
          if (!deadline_construct(st, k, own, ScreenMode::Policy)) return false;
          break;
        default:
          for (NodeId c : own) all_removed.push_back(c);
          break;
      }
    }
    if (strategy == 2 && !ordered_repair(w, all_removed, std::nullopt)) return false;
    if ((strategy == 3 || strategy == 4) &&
        !repair_work(w, all_removed, strategy == 3 ? RepairOp::Greedy : RepairOp::Regret2))
      return false;
    if (strategy >= 5 &&
        !ordered_repair(w, all_removed, static_cast<std::uint64_t>(strategy)))
      return false;
    return true;
  }

  /// Per-company optimal tours as a warm start; affordable only while the
  /// per-company customer sets stay tiny.
  std::optional<Work> exact_seed() {
    Work w;
    for (int k = 0; k < 2; ++k) {
      RouteState& st = w.routes[static_cast<size_t>(k)];
      st.seq.clear();
      if (active_route(k)) st.seq = {ins.depot(k), ins.depot(k)};
      recompute(ins, k, st);
      if (!active_route(k)) continue;
      if (ins.customers_of(k).size() > 10) return std::nullopt;
      Instance unshared = ins;  // thresholds do not apply to a single company
      unshared.costs.profit_threshold = {std::nullopt, std::nullopt};
      NonCollabResult res = solve_noncollab_exact(unshared, k);
      if (!res.solution) return std::nullopt;
      st.seq.clear();
      for (const Visit& v : res.solution->routes[static_cast<size_t>(k)].visits)
        st.seq.push_back(v.node);
      recompute(ins, k, st);
    }
    if (!splice_meet(w)) return std::nullopt;
    complete(w);
    if (!w.complete_ok) return std::nullopt;
    return w;
  }

  /// Meet point first, straight out of both depots, then every customer
  /// inserted under the placement rules; exchange-heavy structures fall out
  /// naturally because both cross-route tails are open from the start.
  bool construct_early_meet(Work& w, NodeId m) {
    std::vector<NodeId> all;
    for (int k = 0; k < 2; ++k) {
      RouteState& st = w.routes[static_cast<size_t>(k)];
      st.seq = {ins.depot(k), m, ins.depot(k)};
      recompute(ins, k, st);
      if (!st.arcs_ok) return false;
      for (NodeId c : ins.customers_of(k)) all.push_back(c);
    }
    w.meet = m;
    return ordered_repair(w, all, std::nullopt);
  }

  std::optional<Work> make_initial() {
    std::optional<Work> best;
    auto consider = [&](Work& w) {
      complete(w);
      if (!w.complete_ok) return;
      if (!best || w.penalized < best->penalized - kEps) best = std::move(w);
    };
    if (collab) {
      for (NodeId m : ins.meet_point_ids()) {
        Work w;
        if (construct_early_meet(w, m)) consider(w);
      }
    }
    for (int strategy = 0; strategy < 13; ++strategy) {
      Work w;
      if (!construct_routes(w, strategy)) continue;
      if (!splice_meet(w)) continue;
      consider(w);
    }
    if (std::optional<Work> w = exact_seed()) {
      consider(*w);
    }
    if (!best && alns_debug())
      std::fprintf(stderr, "[alns] make_initial: all constructions failed\n");
    return best;
  }

  bool splice_meet(Work& w) {
    if (!collab) return true;
    // cheapest feasible meet-point splice over both routes
    double best_total = kInf;
    NodeId best_m = -1;
    std::array<size_t, 2> best_pos{};
    for (NodeId m : ins.meet_point_ids()) {
      double total = 0.0;
      std::array<size_t, 2> pos{};
      bool ok = true;
      for (int k = 0; k < 2 && ok; ++k) {
        RouteState& st = w.routes[static_cast<size_t>(k)];
        double best = kInf;
        size_t bp = 0;
        for (ScreenMode mode : {ScreenMode::Policy, ScreenMode::Optimistic}) {
          for (size_t p = 1; p < st.seq.size(); ++p) {
            InsertEval ev = eval_insert_node(ins, k, st, p, m, mode);
            if (ev.ok && ev.cost < best - kEps) {
              best = ev.cost;
              bp = p;
            }
          }
          if (bp != 0) break;
        }
        if (bp == 0) ok = false;
        total += best;
        pos[static_cast<size_t>(k)] = bp;
      }
      if (ok && total < best_total - kEps) {
        best_total = total;
        best_m = m;
        best_pos = pos;
      }
    }
    if (best_m < 0) return false;
    w.meet = best_m;
    for (int k = 0; k < 2; ++k) {
      RouteState& st = w.routes[static_cast<size_t>(k)];
      st.seq.insert(st.seq.begin() + static_cast<long>(best_pos[static_cast<size_t>(k)]),
                    best_m);
      recompute(ins, k, st);
    }
    return true;
  }

  // like eval_insert but for an arbitrary node (the meet point has no window)
  static InsertEval eval_insert_node(const Instance& ins, int company,
                                     const RouteState& st, size_t pos, NodeId node,
                                     ScreenMode mode = ScreenMode::Policy) {
    InsertEval ev;
    const NodeId u = st.seq[pos - 1];
    const NodeId v = st.seq[pos];
    if (!ins.arc_allowed(u, node) || !ins.arc_allowed(node, v)) return ev;
    const Node& nd = ins.node(node);
    const Node& ndu = ins.node(u);
    const bool policy = mode == ScreenMode::Policy;
    const std::vector<double>& fwd = policy ? st.fwd : st.fwd0;
    const std::vector<double>& slack = policy ? st.slack : st.slack0;
    const double dwell_u = policy ? st.dwell[pos - 1] : ndu.service_min;
    const double arr = fwd[pos - 1] + dwell_u + ins.travel_time(u, node, company);
    const double arr_v = arr + nd.service_min + ins.travel_time(node, v, company);
    const double push = std::max(0.0, arr_v - fwd[pos]);
    if (ins.tw_enforced() && push > slack[pos] + kEps) return ev;
    const double dd = ins.dist(u, node) + ins.dist(node, v) - ins.dist(u, v);
    if (ins.electric()) {
      const VehicleParams& veh = ins.vehicles[static_cast<size_t>(company)];
      const double eps_rate = veh.consumption_kwh_per_km;
      const double dep_u = ndu.has_charger() ? veh.battery_kwh : st.maxbatt[pos - 1];
      const double at_n = dep_u - eps_rate * ins.dist(u, node);
      if (at_n < veh.battery_min_kwh - kEps) return ev;
      const double dep_n = nd.has_charger() ? veh.battery_kwh : at_n;
      const double at_v = dep_n - eps_rate * ins.dist(node, v);
      if (at_v < veh.battery_min_kwh - kEps) return ev;
      const double drop = st.maxbatt[pos] - at_v;
      if (drop > st.reach[pos] + kEps) return ev;
    }
    ev.delta_dist = dd;
    ev.cost = ins.cost_per_km() * dd +
              ins.costs.cost_per_min * std::max(0.0, push - st.wait_suffix[pos]);
    ev.ok = true;
    return ev;
  }

  // ---- destroy ------------------------------------------------------------
  bool removal_allowed(const RouteState& st, size_t pos) const {
    const NodeId u = st.seq[pos - 1];
    const NodeId w = st.seq[pos + 1];
    return ins.arc_allowed(u, w);
  }

  struct Removable {
    int route;
    size_t pos;
    NodeId node;
  };

  std::vector<Removable> list_removable(const Work& w) const {
    std::vector<Removable> out;
    for (int k = 0; k < 2; ++k) {
      if (!active_route(k)) continue;
      const RouteState& st = w.routes[static_cast<size_t>(k)];
      for (size_t p = 1; p + 1 < st.seq.size(); ++p)
        if (ins.is_customer(st.seq[p]) && removal_allowed(st, p))
          out.push_back({k, p, st.seq[p]});
    }
    return out;
  }

  void remove_at(Work& w, int route, size_t pos) {
    RouteState& st = w.routes[static_cast<size_t>(route)];
    st.seq.erase(st.seq.begin() + static_cast<long>(pos));
    recompute(ins, route, st);
  }

  std::vector<NodeId> destroy_work(Work& w, DestroyOp op, Rng& rng) {
    std::vector<NodeId> removed;
    const int quota = removal_quota();
    switch (op) {
      case DestroyOp::Random: {
        while (static_cast<int>(removed.size()) < quota) {
          std::vector<Removable> cands = list_removable(w);
          if (cands.empty()) break;
          const Removable pick =
              cands[static_cast<size_t>(rng.next_below(cands.size()))];
          remove_at(w, pick.route, pick.pos);
          removed.push_back(pick.node);
        }
        break;
      }
      case DestroyOp::Worst: {
        while (static_cast<int>(removed.size()) < quota) {
          std::vector<Removable> cands = list_removable(w);
          if (cands.empty()) break;
          std::vector<std::pair<double, size_t>> savings;
          for (size_t i = 0; i < cands.size(); ++i) {
            const RouteState& st = w.routes[static_cast<size_t>(cands[i].route)];
            const NodeId u = st.seq[cands[i].pos - 1];
            const NodeId c = st.seq[cands[i].pos];
            const NodeId v = st.seq[cands[i].pos + 1];
            const double save = ins.dist(u, c) + ins.dist(c, v) - ins.dist(u, v);
            savings.push_back({-save, i});  // ascending = largest saving first
          }
          std::sort(savings.begin(), savings.end());
          const double y = rng.next_double();
          const size_t idx = static_cast<size_t>(
              std::pow(y, 3.0) * static_cast<double>(savings.size()));
          const Removable pick = cands[savings[std::min(idx, savings.size() - 1)].second];
          remove_at(w, pick.route, pick.pos);
          removed.push_back(pick.node);
        }
        break;
      }
      case DestroyOp::Related: {
        std::vector<Removable> cands = list_removable(w);
        if (cands.empty()) break;
        const Removable seed =
            cands[static_cast<size_t>(rng.next_below(cands.size()))];
        const NodeId anchor = seed.node;
        remove_at(w, seed.route, seed.pos);
        removed.push_back(anchor);
        while (static_cast<int>(removed.size()) < quota) {
          std::vector<Removable> rest = list_removable(w);
          if (rest.empty()) break;
          double best = kInf;
          size_t best_i = rest.size();
          for (size_t i = 0; i < rest.size(); ++i) {
            const double d =
                0.5 * (ins.dist(anchor, rest[i].node) + ins.dist(rest[i].node, anchor));
            if (d < best - kEps) {
              best = d;
              best_i = i;
            }
          }
          if (best_i == rest.size()) break;
          remove_at(w, rest[best_i].route, rest[best_i].pos);
          removed.push_back(rest[best_i].node);
        }
        break;
      }
    }
    return removed;
  }

  // ---- repair -------------------------------------------------------------
  struct PositionChoice {
    double cost = kInf;
    int route = -1;
    size_t pos = 0;
    double second = kInf;  // second-best cost anywhere
  };

  PositionChoice scan_customer(const Work& w, NodeId c, ScreenMode mode) const {
    PositionChoice choice;
    const int owner = ins.node(c).company;
    const bool reserved = ins.node(c).customer_kind == CustomerKind::Reserved;
    for (int k = 0; k < 2; ++k) {
      if (!active_route(k)) continue;
      if (k != owner && (reserved || !collab)) continue;
      const RouteState& st = w.routes[static_cast<size_t>(k)];
      size_t lo = 1;
      if (k != owner) {
        if (st.meet_pos < 0) continue;
        lo = static_cast<size_t>(st.meet_pos) + 1;  // only after the exchange
      }
      for (size_t pos = lo; pos < st.seq.size(); ++pos) {
        InsertEval ev = eval_insert(ins, k, st, pos, c, mode);
        if (!ev.ok) continue;
        if (ev.cost < choice.cost - kEps) {
          choice.second = choice.cost;
          choice.cost = ev.cost;
          choice.route = k;
          choice.pos = pos;
        } else if (ev.cost < choice.second - kEps) {
          choice.second = ev.cost;
        }
      }
    }
    return choice;
  }

  // policy screen first, zero-charge fallback so the LP can arbitrate later
  PositionChoice scan_customer_tiered(const Work& w, NodeId c) const {
    PositionChoice choice = scan_customer(w, c, ScreenMode::Policy);
    if (choice.route < 0) choice = scan_customer(w, c, ScreenMode::Optimistic);
    return choice;
  }

  /// Last-resort placement: try the cheapest optimistic positions and let the
  /// charging LP arbitrate each tentative insertion. Bounded to a handful of
  /// attempts; used only when the policy screen finds no slot.
  bool lp_tier_insert(Work& w, NodeId c) {
    struct Cand {
      double est;
      int route;
      size_t pos;
    };
    std::vector<Cand> cands;
    const int owner = ins.node(c).company;
    const bool reserved = ins.node(c).customer_kind == CustomerKind::Reserved;
    for (int k = 0; k < 2; ++k) {
      if (!active_route(k)) continue;
      if (k != owner && (reserved || !collab)) continue;
      const RouteState& st = w.routes[static_cast<size_t>(k)];
      size_t lo = 1;
      if (k != owner) {
        if (st.meet_pos < 0) continue;
        lo = static_cast<size_t>(st.meet_pos) + 1;
      }
      for (size_t pos = lo; pos < st.seq.size(); ++pos) {
        InsertEval ev = eval_insert(ins, k, st, pos, c, ScreenMode::Optimistic);
        if (ev.ok) cands.push_back({ev.cost, k, pos});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return a.est != b.est ? a.est < b.est : a.pos < b.pos;
    });
    const size_t tries = std::min<size_t>(cands.size(), 8);
    for (size_t t = 0; t < tries; ++t) {
      RouteState& st = w.routes[static_cast<size_t>(cands[t].route)];
      std::vector<NodeId> backup = st.seq;
      st.seq.insert(st.seq.begin() + static_cast<long>(cands[t].pos), c);
      recompute(ins, cands[t].route, st);
      const bool ok = st.arcs_ok && st.time_ok0 && st.batt_ok &&
                      cache.complete(ins, cands[t].route, st.seq).feasible;
      if (ok) return true;
      st.seq = std::move(backup);
      recompute(ins, cands[t].route, st);
    }
    return false;
  }

  /// Inserts customers at their policy-best position in deadline order, or in
  /// a seeded random order when `shuffle_seed` is given; the LP referees any
  /// customer the screen cannot place.
  bool ordered_repair(Work& w, std::vector<NodeId> order,
                      std::optional<std::uint64_t> shuffle_seed) {
    if (shuffle_seed) {
      Rng order_rng(cfg.seed * 1000003ULL + *shuffle_seed);
      std::sort(order.begin(), order.end());
      order_rng.shuffle(order);
    } else {
      std::sort(order.begin(), order.end(), [this](NodeId a, NodeId b) {
        const double la = ins.node(a).latest;
        const double lb = ins.node(b).latest;
        return la != lb ? la < lb : a < b;
      });
    }
    for (NodeId c : order) {
      PositionChoice ch = scan_customer(w, c, ScreenMode::Policy);
      if (ch.route >= 0) {
        RouteState& st = w.routes[static_cast<size_t>(ch.route)];
        st.seq.insert(st.seq.begin() + static_cast<long>(ch.pos), c);
        recompute(ins, ch.route, st);
      } else if (!lp_tier_insert(w, c)) {
        if (alns_debug())
          std::fprintf(stderr, "[alns] ordered_repair: no position for %s\n",
                       ins.node(c).label.c_str());
        return false;
      }
    }
    return true;
  }

  bool repair_work(Work& w, std::vector<NodeId> removed, RepairOp op) {
    std::sort(removed.begin(), removed.end());
    while (!removed.empty()) {
      // fresh scan each round; only the inserted route changed but the lists
      // are short, so a full rescan keeps the logic simple and deterministic
      size_t pick = removed.size();
      PositionChoice pick_choice;
      std::vector<PositionChoice> choices(removed.size());
      int blocked = -1;
      for (size_t i = 0; i < removed.size(); ++i) {
        choices[i] = scan_customer(w, removed[i], ScreenMode::Policy);
        if (choices[i].route < 0 && blocked < 0) blocked = static_cast<int>(i);
      }
      if (blocked >= 0) {
        // place the stuck customer first, with the LP as referee
        const NodeId c = removed[static_cast<size_t>(blocked)];
        if (!lp_tier_insert(w, c)) {
          if (alns_debug())
            std::fprintf(stderr, "[alns] repair: no position for %s\n",
                         ins.node(c).label.c_str());
          return false;
        }
        removed.erase(removed.begin() + blocked);
        continue;
      }
      if (op == RepairOp::Greedy) {
        for (size_t i = 0; i < removed.size(); ++i) {
          if (choices[i].cost < pick_choice.cost - kEps) {
            pick_choice = choices[i];
            pick = i;
          }
        }
      } else {  // regret-2
        double best_regret = -kInf;
        for (size_t i = 0; i < removed.size(); ++i) {
          const PositionChoice& ch = choices[i];
          const double regret = (std::isfinite(ch.second) ? ch.second : kInf) - ch.cost;
          if (regret > best_regret + kEps ||
              (regret > best_regret - kEps && pick < removed.size() &&
               ch.cost < pick_choice.cost - kEps)) {
            best_regret = regret;
            pick_choice = ch;
            pick = i;
          }
        }
      }
      if (pick == removed.size()) {
        if (alns_debug()) std::fprintf(stderr, "[alns] repair: nothing pickable\n");
        return false;
      }
      RouteState& st = w.routes[static_cast<size_t>(pick_choice.route)];
      st.seq.insert(st.seq.begin() + static_cast<long>(pick_choice.pos), removed[pick]);
      recompute(ins, pick_choice.route, st);
      removed.erase(removed.begin() + static_cast<long>(pick));
    }
    return true;
  }

  /// Occasionally relocates the meet slot to a random feasible position in
  /// each route so exchange-heavy structures stay reachable; the repair and
  /// annealing decide whether the shape survives.
  void shake_meet(Work& w, Rng& rng) {
    if (!collab) return;
    if (rng.next_double() >= 0.3) return;
    for (int k = 0; k < 2; ++k) {
      RouteState& st = w.routes[static_cast<size_t>(k)];
      if (st.meet_pos < 0 || st.seq.size() < 3) continue;
      const NodeId m = st.seq[static_cast<size_t>(st.meet_pos)];
      st.seq.erase(st.seq.begin() + st.meet_pos);
      size_t cap = st.seq.size() - 1;
      for (size_t p = 1; p + 1 < st.seq.size(); ++p) {
        const NodeId id = st.seq[p];
        if (ins.is_customer(id) && ins.node(id).company != k) {
          cap = p;
          break;
        }
      }
      const size_t pos = 1 + static_cast<size_t>(rng.next_below(cap));
      st.seq.insert(st.seq.begin() + static_cast<long>(pos), m);
      recompute(ins, k, st);
    }
  }

  // ---- meet point re-selection ---------------------------------------------
  // Tries every meet point on the fixed customer partition, and for each one a
  // few splice slots per route: the current slot, the screen-estimated best
  // slot, and the slot right after the depot (which is what deep exchange
  // structures need). The charging LP arbitrates; the best completion wins.
  void choose_meet(Work& w) {
    if (!collab || !w.complete_ok) return;

    // routes without their meet slot, plus the cap before the first customer
    // of the other company (the meet must precede exchanged goods)
    std::array<RouteState, 2> bare;
    std::array<size_t, 2> foreign_cap{};
    for (int k = 0; k < 2; ++k) {
      bare[static_cast<size_t>(k)] = w.routes[static_cast<size_t>(k)];
      RouteState& st = bare[static_cast<size_t>(k)];
      if (st.meet_pos >= 0) {
        st.seq.erase(st.seq.begin() + st.meet_pos);
        recompute(ins, k, st);
      }
      size_t cap = st.seq.empty() ? 1 : st.seq.size() - 1;
      for (size_t p = 1; p + 1 < st.seq.size(); ++p) {
        const NodeId id = st.seq[p];
        if (ins.is_customer(id) && ins.node(id).company != k) {
          cap = p;
          break;
        }
      }
      foreign_cap[static_cast<size_t>(k)] = cap;
    }

    struct Splice {
      NodeId m;
      std::array<size_t, 2> pos;
    };
    std::vector<Splice> candidates;
    for (NodeId m : ins.meet_point_ids()) {
      // current slots (identity swap)
      if (w.routes[0].meet_pos >= 0 && w.routes[1].meet_pos >= 0) {
        Splice s{m, {static_cast<size_t>(w.routes[0].meet_pos),
                     static_cast<size_t>(w.routes[1].meet_pos)}};
        if (s.pos[0] <= foreign_cap[0] && s.pos[1] <= foreign_cap[1])
          candidates.push_back(s);
      }
      // screen-estimated best slots
      Splice est{m, {0, 0}};
      bool est_ok = true;
      for (int k = 0; k < 2 && est_ok; ++k) {
        const RouteState& st = bare[static_cast<size_t>(k)];
        double best = kInf;
        size_t bp = 0;
        for (ScreenMode mode : {ScreenMode::Policy, ScreenMode::Optimistic}) {
          for (size_t p = 1; p <= foreign_cap[static_cast<size_t>(k)]; ++p) {
            InsertEval ev = eval_insert_node(ins, k, st, p, m, mode);
            if (ev.ok && ev.cost < best - kEps) {
              best = ev.cost;
              bp = p;
            }
          }
          if (bp != 0) break;
        }
        if (bp == 0) est_ok = false;
        est.pos[static_cast<size_t>(k)] = bp;
      }
      if (est_ok) candidates.push_back(est);
      // straight-out-of-the-depot slots
      candidates.push_back({m, {1, 1}});
    }

    Work best_work = w;
    bool improved = false;
    const bool big = ins.node_count() > 80;
    std::vector<std::pair<double, Work>> ranked;
    std::array<NodeId, 64> seen{};
    size_t seen_n = 0;
    for (const Splice& cand_splice : candidates) {
      // dedupe identical (m, pos) triples cheaply
      const NodeId sig = static_cast<NodeId>(
          cand_splice.m * 1000003 + static_cast<NodeId>(cand_splice.pos[0]) * 1009 +
          static_cast<NodeId>(cand_splice.pos[1]));
      bool dup = false;
      for (size_t i = 0; i < seen_n; ++i)
        if (seen[i] == sig) dup = true;
      if (dup) continue;
      if (seen_n < seen.size()) seen[seen_n++] = sig;

      Work cand = w;
      cand.meet = cand_splice.m;
      bool ok = true;
      for (int k = 0; k < 2 && ok; ++k) {
        RouteState& st = cand.routes[static_cast<size_t>(k)];
        st = bare[static_cast<size_t>(k)];
        if (st.seq.size() < 2 ||
            cand_splice.pos[static_cast<size_t>(k)] >= st.seq.size()) {
          ok = false;
          break;
        }
        st.seq.insert(st.seq.begin() +
                          static_cast<long>(cand_splice.pos[static_cast<size_t>(k)]),
                      cand_splice.m);
        recompute(ins, k, st);
        ok = st.arcs_ok && st.time_ok0 && st.batt_ok;
      }
      if (!ok) continue;
      if (big) {
        // rank by the policy-time estimate; only the leaders get the LP
        double est_sync = 0.0;
        if (cand.routes[0].meet_pos >= 0 && cand.routes[1].meet_pos >= 0)
          est_sync = std::max(
              0.0,
              std::abs(cand.routes[0].fwd[static_cast<size_t>(cand.routes[0].meet_pos)] -
                       cand.routes[1].fwd[static_cast<size_t>(cand.routes[1].meet_pos)]) -
                  ins.costs.max_wait_min);
        const double est = ins.cost_per_km() * (cand.routes[0].dist + cand.routes[1].dist) +
                           ins.costs.cost_per_min * (cand.routes[0].t0 + cand.routes[1].t0) +
                           lambda_sync * est_sync;
        ranked.push_back({est, std::move(cand)});
        continue;
      }
      complete(cand);
      if (cand.complete_ok && cand.penalized < best_work.penalized - kEps) {
        best_work = std::move(cand);
        improved = true;
      }
    }
    if (big) {
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const size_t tries = std::min<size_t>(ranked.size(), 2);
      for (size_t t = 0; t < tries; ++t) {
        Work& cand = ranked[t].second;
        complete(cand);
        if (cand.complete_ok && cand.penalized < best_work.penalized - kEps) {
          best_work = std::move(cand);
          improved = true;
        }
      }
    }
    if (improved) w = std::move(best_work);
  }

  // ---- strict finalization --------------------------------------------------
  std::array<double, 2> revenues(const Work& w) const {
    std::array<double, 2> rev{};
    if (!collab) {
      for (NodeId c : scope) rev[static_cast<size_t>(restricted)] += ins.node(c).price;
      return rev;
    }
    for (int k = 0; k < 2; ++k) {
      const RouteState& st = w.routes[static_cast<size_t>(k)];
      for (size_t p = 1; p + 1 < st.seq.size(); ++p) {
        const NodeId c = st.seq[p];
        if (!ins.is_customer(c)) continue;
        const int owner = ins.node(c).company;
        const double price = ins.node(c).price;
        if (owner == k) {
          rev[static_cast<size_t>(k)] += price;
        } else {
          const double alpha = profit_ratio(ins, owner, w.meet, c);
          rev[static_cast<size_t>(k)] += price * (1.0 - alpha);
          rev[static_cast<size_t>(owner)] += price * alpha;
        }
      }
    }
    return rev;
  }

  /// Exact synchronized (and threshold-capped) completion; returns the strict
  /// total cost and fills the plans, or nullopt when impossible.
  std::optional<double> finalize_strict(Work& w) {
    if (!collab) {
      if (!w.complete_ok) return std::nullopt;
      return w.penalized;  // no synchronization involved
    }
    if (!w.complete_ok) return std::nullopt;
    std::optional<std::array<double, 2>> caps;
    if (ins.thresholds_enabled()) {
      const std::array<double, 2> rev = revenues(w);
      caps = std::array<double, 2>{};
      for (int k = 0; k < 2; ++k) {
        const double cap =
            (rev[static_cast<size_t>(k)] -
             ins.cost_per_km() * w.routes[static_cast<size_t>(k)].dist -
             ins.threshold(k)) /
            ins.costs.cost_per_min;
        if (cap < -kEps) return std::nullopt;
        (*caps)[static_cast<size_t>(k)] = cap;
      }
    }
    // already synchronized: the per-route minimal-T plans are jointly valid,
    // and they also maximize both profits, so threshold failures are final
    if (w.sync_excess <= tol::kTimeMin) {
      if (caps) {
        if (w.completion[0] > (*caps)[0] + kEps || w.completion[1] > (*caps)[1] + kEps)
          return std::nullopt;
      }
      return ins.cost_per_km() * w.dist_total +
             ins.costs.cost_per_min * (w.completion[0] + w.completion[1]);
    }
    RouteLp lp1 = build_route_lp(ins, 0, w.routes[0].seq);
    RouteLp lp2 = build_route_lp(ins, 1, w.routes[1].seq);
    PairResult pair = solve_charging_pair(lp1, w.routes[0].meet_pos, lp2,
                                          w.routes[1].meet_pos,
                                          ins.costs.max_wait_min, caps);
    if (!pair.ok()) return std::nullopt;
    w.charge[0] = pair.plan_first->charge_kwh;
    w.starts[0] = pair.plan_first->service_start;
    w.charge[1] = pair.plan_second->charge_kwh;
    w.starts[1] = pair.plan_second->service_start;
    w.completion[0] = pair.plan_first->completion_min;
    w.completion[1] = pair.plan_second->completion_min;
    w.meet_start[0] = w.starts[0][static_cast<size_t>(w.routes[0].meet_pos)];
    w.meet_start[1] = w.starts[1][static_cast<size_t>(w.routes[1].meet_pos)];
    w.sync_excess = 0.0;
    const double total = ins.cost_per_km() * w.dist_total +
                         ins.costs.cost_per_min * (w.completion[0] + w.completion[1]);
    w.penalized = total;
    return total;
  }

  Solution assemble(const Work& w, SolveStatus status) const {
    Solution sol;
    sol.meet_point = collab ? std::optional<NodeId>(w.meet) : std::nullopt;
    if (!collab) sol.restricted_company = restricted;
    sol.status = status;
    for (int k = 0; k < 2; ++k) {
      Route& route = sol.routes[static_cast<size_t>(k)];
      route.company = k;
      if (!active_route(k)) continue;
      const RouteState& st = w.routes[static_cast<size_t>(k)];
      const std::vector<double>& charge = w.charge[static_cast<size_t>(k)];
      const std::vector<double>& starts = w.starts[static_cast<size_t>(k)];
      BatteryTrace trace = simulate_battery(ins, k, st.seq, charge);
      for (size_t p = 0; p < st.seq.size(); ++p) {
        Visit v;
        v.node = st.seq[p];
        v.service_start = p < starts.size() ? starts[p] : 0.0;
        v.charge_kwh = p < charge.size() ? charge[p] : 0.0;
        v.arrival_battery_kwh = p < trace.steps.size()
                                    ? trace.steps[p].arrival_kwh
                                    : ins.vehicles[static_cast<size_t>(k)].battery_kwh;
        route.visits.push_back(v);
      }
    }
    const CostBreakdown cost = objective(ins, sol);
    sol.total_cost = cost.total;
    sol.energy_cost = cost.energy;
    sol.labor_cost = cost.labor;
    for (int k = 0; k < 2; ++k)
      sol.profits[static_cast<size_t>(k)] = company_profit(ins, sol, k);
    return sol;
  }

  Work work_from_solution(const Solution& sol) {
    Work w;
    if (sol.meet_point) w.meet = *sol.meet_point;
    for (int k = 0; k < 2; ++k) {
      RouteState& st = w.routes[static_cast<size_t>(k)];
      st.seq.clear();
      for (const Visit& v : sol.routes[static_cast<size_t>(k)].visits)
        st.seq.push_back(v.node);
      recompute(ins, k, st);
    }
    complete(w);
    return w;
  }

  // ---- local search --------------------------------------------------------
  bool try_apply(Work& w, const std::array<std::vector<NodeId>, 2>& seqs) {
    Work cand = w;
    for (int k = 0; k < 2; ++k) {
      if (!active_route(k)) continue;
      if (cand.routes[static_cast<size_t>(k)].seq != seqs[static_cast<size_t>(k)]) {
        cand.routes[static_cast<size_t>(k)].seq = seqs[static_cast<size_t>(k)];
        recompute(ins, k, cand.routes[static_cast<size_t>(k)]);
        if (!cand.routes[static_cast<size_t>(k)].arcs_ok ||
            !cand.routes[static_cast<size_t>(k)].time_ok0 ||
            !cand.routes[static_cast<size_t>(k)].batt_ok)
          return false;
      }
    }
    complete(cand);
    if (!cand.complete_ok || cand.penalized >= w.penalized - 1e-6) return false;
    w = std::move(cand);
    return true;
  }

  bool rules_ok(const std::vector<NodeId>& seq, int k) const {
    int meet_pos = -1;
    for (size_t p = 0; p < seq.size(); ++p)
      if (ins.is_meet_point(seq[p])) meet_pos = static_cast<int>(p);
    for (size_t p = 1; p + 1 < seq.size(); ++p) {
      const NodeId c = seq[p];
      if (!ins.is_customer(c)) continue;
      if (ins.node(c).company == k) continue;
      if (ins.node(c).customer_kind == CustomerKind::Reserved) return false;
      if (meet_pos < 0 || static_cast<int>(p) < meet_pos) return false;
    }
    return true;
  }

  bool ls_pass(Work& w) {
    // relocate + neighbor move driven by nearest-neighbor lists, then 2-opt
    for (int k = 0; k < 2; ++k) {
      if (!active_route(k)) continue;
      const RouteState& st = w.routes[static_cast<size_t>(k)];
      for (size_t p = 1; p + 1 < st.seq.size(); ++p) {
        const NodeId c = st.seq[p];
        if (!ins.is_customer(c)) continue;
        // relocate c next to each of its near neighbors (either route)
        auto it = knn.find(c);
        if (it == knn.end()) continue;
        for (NodeId nb : it->second) {
          for (int k2 = 0; k2 < 2; ++k2) {
            if (!active_route(k2)) continue;
            const RouteState& st2 = w.routes[static_cast<size_t>(k2)];
            const int q = [&]() {
              for (size_t i = 0; i < st2.seq.size(); ++i)
                if (st2.seq[i] == nb) return static_cast<int>(i);
              return -1;
            }();
            if (q < 0) continue;
            std::array<std::vector<NodeId>, 2> seqs{w.routes[0].seq, w.routes[1].seq};
            // remove c
            auto& src = seqs[static_cast<size_t>(k)];
            src.erase(std::find(src.begin(), src.end(), c));
            auto& dst = seqs[static_cast<size_t>(k2)];
            const auto at = std::find(dst.begin(), dst.end(), nb);
            if (at == dst.end()) continue;
            dst.insert(at + 1, c);
            if (!rules_ok(seqs[static_cast<size_t>(k)], k) ||
                !rules_ok(seqs[static_cast<size_t>(k2)], k2))
              continue;
            if (try_apply(w, seqs)) return true;
          }
        }
      }
    }
    // 2-opt: intra-route segment reversal on one side of the meet point
    for (int k = 0; k < 2; ++k) {
      if (!active_route(k)) continue;
      const RouteState& st = w.routes[static_cast<size_t>(k)];
      const size_t n = st.seq.size();
      for (size_t i = 1; i + 1 < n; ++i) {
        for (size_t j = i + 1; j + 1 < n; ++j) {
          bool crosses_meet = false;
          for (size_t p = i; p <= j; ++p)
            if (ins.is_meet_point(st.seq[p])) crosses_meet = true;
          if (crosses_meet) break;
          std::array<std::vector<NodeId>, 2> seqs{w.routes[0].seq, w.routes[1].seq};
          std::reverse(seqs[static_cast<size_t>(k)].begin() + static_cast<long>(i),
                       seqs[static_cast<size_t>(k)].begin() + static_cast<long>(j) + 1);
          if (try_apply(w, seqs)) return true;
        }
      }
    }
    return false;
  }

  void local_search_work(Work& w) {
    if (!w.complete_ok) return;
    while (ls_pass(w)) {
    }
  }
};

Solution run_engine(const Instance& ins, const AlnsConfig& cfg, bool collab,
                    int company, const ProgressFn& progress) {
  Engine eng(ins, cfg, collab, company);
  Rng rng(cfg.seed);
  const auto t_start = std::chrono::steady_clock::now();
  auto out_of_time = [&]() {
    if (cfg.time_limit_s <= 0) return false;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return elapsed > cfg.time_limit_s;
  };

  std::optional<Work> initial = eng.make_initial();
  if (!initial) {
    Solution sol;
    sol.status = SolveStatus::NoFeasibleSolution;
    if (!collab) sol.restricted_company = company;
    for (int k = 0; k < 2; ++k) sol.routes[static_cast<size_t>(k)].company = k;
    return sol;
  }

  Work best_pen = *initial;
  std::optional<Solution> best_strict;
  double best_strict_cost = kInf;
  {
    Work w = *initial;
    if (auto cost = eng.finalize_strict(w)) {
      best_strict = eng.assemble(w, SolveStatus::Feasible);
      best_strict_cost = *cost;
    }
  }

  const double t0 = std::max(1e-6, cfg.start_temp_ratio * best_pen.penalized / std::log(2.0));
  OperatorBank bank;
  int global_iter = 0;
  int dbg_repair_fail = 0, dbg_complete_fail = 0, dbg_accepted = 0, dbg_empty = 0;

  for (int run = 0; run < cfg.runs && !out_of_time(); ++run) {
    Rng run_rng = rng.fork(static_cast<std::uint64_t>(run) + 1);
    Work current = *initial;
    Work run_best = current;
    double temp = t0;

    for (int seg = 0; seg < cfg.segments_per_run && !out_of_time(); ++seg) {
      for (int it = 0; it < cfg.iterations_per_segment; ++it) {
        ++global_iter;
        if (out_of_time()) break;
        // roulette selection
        const double dsum = bank.destroy_weight[0] + bank.destroy_weight[1] +
                            bank.destroy_weight[2];
        double pickd = run_rng.next_double() * dsum;
        int d_op = 0;
        for (; d_op < 2; ++d_op) {
          pickd -= bank.destroy_weight[static_cast<size_t>(d_op)];
          if (pickd <= 0) break;
        }
        const double rsum = bank.repair_weight[0] + bank.repair_weight[1];
        int r_op = run_rng.next_double() * rsum <= bank.repair_weight[0] ? 0 : 1;
        bank.destroy_uses[static_cast<size_t>(d_op)]++;
        bank.repair_uses[static_cast<size_t>(r_op)]++;

        Work cand = current;
        std::vector<NodeId> removed =
            eng.destroy_work(cand, static_cast<DestroyOp>(d_op), run_rng);
        if (removed.empty()) {
          ++dbg_empty;
          continue;
        }
        eng.shake_meet(cand, run_rng);
        if (!eng.repair_work(cand, std::move(removed), static_cast<RepairOp>(r_op))) {
          ++dbg_repair_fail;
          continue;
        }
        eng.complete(cand);
        if (!cand.complete_ok) {
          ++dbg_complete_fail;
          continue;
        }
        eng.choose_meet(cand);

        double reward = 0.0;
        if (cand.penalized < best_pen.penalized - kEps) reward = cfg.reward_best;
        else if (cand.penalized < current.penalized - kEps) reward = cfg.reward_improve;

        bool accepted = cand.penalized <= current.penalized + kEps;
        if (!accepted) {
          const double p = std::exp(-(cand.penalized - current.penalized) / temp);
          accepted = run_rng.next_double() < p;
          if (accepted && reward == 0.0) reward = cfg.reward_accept;
        }
        bank.destroy_score[static_cast<size_t>(d_op)] += reward;
        bank.repair_score[static_cast<size_t>(r_op)] += reward;

        if (cand.penalized < best_pen.penalized - kEps) best_pen = cand;
        if (cand.penalized < run_best.penalized - kEps) run_best = cand;
        if (eng.strict_lower(cand) < best_strict_cost - kEps) {
          Work strict = cand;
          if (auto cost = eng.finalize_strict(strict)) {
            if (*cost < best_strict_cost - kEps) {
              best_strict_cost = *cost;
              best_strict = eng.assemble(strict, SolveStatus::Feasible);
            }
          }
        }
        if (accepted) {
          current = std::move(cand);
          ++dbg_accepted;
        }
        temp *= cfg.cooling;
        if (progress)
          progress(global_iter, seg, run,
                   best_strict ? best_strict_cost : best_pen.penalized);
      }
      update_weights(bank, cfg.weight_decay);
    }

    eng.local_search_work(run_best);
    if (run_best.complete_ok) {
      if (run_best.penalized < best_pen.penalized - kEps) best_pen = run_best;
      if (eng.strict_lower(run_best) < best_strict_cost - kEps) {
        Work strict = run_best;
        if (auto cost = eng.finalize_strict(strict)) {
          if (*cost < best_strict_cost - kEps) {
            best_strict_cost = *cost;
            best_strict = eng.assemble(strict, SolveStatus::Feasible);
          }
        }
      }
    }
  }

  if (alns_debug())
    std::fprintf(stderr,
                 "[alns] iters=%d empty=%d repair_fail=%d complete_fail=%d accepted=%d\n",
                 global_iter, dbg_empty, dbg_repair_fail, dbg_complete_fail,
                 dbg_accepted);
  if (best_strict) return *best_strict;
  return eng.assemble(best_pen, SolveStatus::NoFeasibleSolution);
}

}  // namespace

void update_weights(OperatorBank& bank, double weight_decay) {
  for (size_t i = 0; i < bank.destroy_weight.size(); ++i) {
    if (bank.destroy_uses[i] > 0)
      bank.destroy_weight[i] =
          weight_decay * bank.destroy_weight[i] +
          (1.0 - weight_decay) * bank.destroy_score[i] / bank.destroy_uses[i];
    bank.destroy_score[i] = 0.0;
    bank.destroy_uses[i] = 0;
  }
  for (size_t i = 0; i < bank.repair_weight.size(); ++i) {
    if (bank.repair_uses[i] > 0)
      bank.repair_weight[i] =
          weight_decay * bank.repair_weight[i] +
          (1.0 - weight_decay) * bank.repair_score[i] / bank.repair_uses[i];
    bank.repair_score[i] = 0.0;
    bank.repair_uses[i] = 0;
  }
}

Solution initial_solution(const Instance& ins, std::uint64_t seed) {
  AlnsConfig cfg;
  cfg.seed = seed;
  Engine eng(ins, cfg, true, -1);
  std::optional<Work> w = eng.make_initial();
  if (!w) throw std::runtime_error(
      "initial_solution: no window-feasible construction found; try the exact "
      "solver or relax the windows");
  return eng.assemble(*w, SolveStatus::Feasible);
}

PartialSolution destroy(const Instance& ins, const Solution& sol, DestroyOp op,
                        double rho, Rng& rng) {
  AlnsConfig cfg;
  cfg.removal_fraction = rho;
  const bool collab = sol.collaborative();
  Engine eng(ins, cfg, collab, sol.restricted_company.value_or(-1));
  Work w = eng.work_from_solution(sol);
  PartialSolution partial;
  partial.removed = eng.destroy_work(w, op, rng);
  partial.meet_point = sol.meet_point;
  partial.restricted_company = sol.restricted_company;
  for (int k = 0; k < 2; ++k)
    partial.sequences[static_cast<size_t>(k)] = w.routes[static_cast<size_t>(k)].seq;
  return partial;
}

std::optional<Solution> repair(const Instance& ins, const PartialSolution& partial,
                               RepairOp op, Rng& rng) {
  (void)rng;  // deterministic insertion; kept for interface parity
  AlnsConfig cfg;
  const bool collab = !partial.restricted_company.has_value();
  Engine eng(ins, cfg, collab, partial.restricted_company.value_or(-1));
  Work w;
  if (partial.meet_point) w.meet = *partial.meet_point;
  for (int k = 0; k < 2; ++k) {
    w.routes[static_cast<size_t>(k)].seq = partial.sequences[static_cast<size_t>(k)];
    recompute(ins, k, w.routes[static_cast<size_t>(k)]);
  }
  if (!eng.repair_work(w, partial.removed, op)) return std::nullopt;
  eng.complete(w);
  if (!w.complete_ok) return std::nullopt;
  return eng.assemble(w, SolveStatus::Feasible);
}

Solution local_search(const Instance& ins, const Solution& sol) {
  AlnsConfig cfg;
  const bool collab = sol.collaborative();
  Engine eng(ins, cfg, collab, sol.restricted_company.value_or(-1));
  Work w = eng.work_from_solution(sol);
  if (!w.complete_ok) return sol;
  eng.local_search_work(w);
  return eng.assemble(w, sol.status);
}

Solution solve_alns(const Instance& ins, const AlnsConfig& cfg,
                    const ProgressFn& progress) {
  return run_engine(ins, cfg, true, -1, progress);
}

Solution solve_noncollab(const Instance& ins, int company, const AlnsConfig& cfg,
                         const ProgressFn& progress) {
  return run_engine(ins, cfg, false, company, progress);
}

AlnsConfig load_alns_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": parse error: " + e.what());
  }
  AlnsConfig cfg;
  cfg.removal_fraction = j.value("removal_fraction", cfg.removal_fraction);
  cfg.iterations_per_segment = j.value("iterations_per_segment", cfg.iterations_per_segment);
  cfg.segments_per_run = j.value("segments_per_run", cfg.segments_per_run);
  cfg.runs = j.value("runs", cfg.runs);
  cfg.reward_best = j.value("reward_best", cfg.reward_best);
  cfg.reward_improve = j.value("reward_improve", cfg.reward_improve);
  cfg.reward_accept = j.value("reward_accept", cfg.reward_accept);
  cfg.weight_decay = j.value("weight_decay", cfg.weight_decay);
  cfg.start_temp_ratio = j.value("start_temp_ratio", cfg.start_temp_ratio);
  cfg.cooling = j.value("cooling", cfg.cooling);
  cfg.sync_penalty_per_min = j.value("sync_penalty_per_min", cfg.sync_penalty_per_min);
  cfg.neighbor_k = j.value("neighbor_k", cfg.neighbor_k);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.time_limit_s = j.value("time_limit_s", cfg.time_limit_s);
  if (!(cfg.removal_fraction > 0 && cfg.removal_fraction < 1))
    throw std::invalid_argument(path + ": removal_fraction must be in (0,1)");
  if (cfg.iterations_per_segment < 1 || cfg.segments_per_run < 1 || cfg.runs < 1)
    throw std::invalid_argument(path + ": loop counts must be at least 1");
  return cfg;
}

std::string alns_config_to_json_text(const AlnsConfig& cfg) {
  nlohmann::json j;
  j["removal_fraction"] = cfg.removal_fraction;
  j["iterations_per_segment"] = cfg.iterations_per_segment;
  j["segments_per_run"] = cfg.segments_per_run;
  j["runs"] = cfg.runs;
  j["reward_best"] = cfg.reward_best;
  j["reward_improve"] = cfg.reward_improve;
  j["reward_accept"] = cfg.reward_accept;
  j["weight_decay"] = cfg.weight_decay;
  j["start_temp_ratio"] = cfg.start_temp_ratio;
  j["cooling"] = cfg.cooling;
  j["sync_penalty_per_min"] = cfg.sync_penalty_per_min;
  j["neighbor_k"] = cfg.neighbor_k;
  j["seed"] = cfg.seed;
  j["time_limit_s"] = cfg.time_limit_s;
  return j.dump(2);
}

}  // namespace coevrp
