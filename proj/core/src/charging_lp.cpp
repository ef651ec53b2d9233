#include "coevrp/charging_lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "coevrp/simplex.hpp"

namespace coevrp {

namespace {

constexpr double kFeasTol = 1e-9;

/// Earliest service starts for fixed charges; respects lower window bounds and
/// an optional floor on one position. Returns false when an upper bound breaks.
bool earliest_replay(const RouteLp& r, const std::vector<double>& charge,
                     int floor_pos, double floor_value, std::vector<double>& out) {
  const size_t n = r.size();
  out.resize(n);
  double ready = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double s = std::max(ready, r.earliest[i]);
    if (static_cast<int>(i) == floor_pos) s = std::max(s, floor_value);
    if (s > r.latest[i] + kFeasTol) return false;
    out[i] = s;
    if (i + 1 < n) {
      double dwell = r.service_min[i];
      if (r.electric && charge[i] > 0.0 && r.charger_kw[i] > 0.0)
        dwell += 60.0 * charge[i] / r.charger_kw[i];
      ready = s + dwell + r.travel_min[i];
    }
  }
  return true;
}

bool battery_ok_zero_charge(const RouteLp& r) {
  if (!r.electric) return true;
  for (double b : r.precharge_battery)
    if (b < r.battery_min_kwh - kFeasTol) return false;
  return true;
}

ChargingPlan make_plan(const RouteLp& r, std::vector<double> charge,
                       std::vector<double> starts) {
  ChargingPlan plan;
  plan.charge_kwh = std::move(charge);
  plan.service_start = std::move(starts);
  plan.completion_min = plan.service_start.back();
  plan.labor_cost = r.cost_per_min * plan.completion_min;
  return plan;
}

struct LpLayout {
  std::vector<int> delta_var;  // per position, -1 when pinned to zero
  int s_var0 = 0;              // s variables are contiguous from here
};

/// Adds one route's variables to `lp`. Battery-only mode (timing = false)
/// creates no schedule variables and is used to classify infeasibility.
LpLayout add_route(LinearProgram& lp, const RouteLp& r, bool timing,
                   std::optional<double> completion_cap) {
  const int n = static_cast<int>(r.size());
  LpLayout layout;
  layout.delta_var.assign(static_cast<size_t>(n), -1);
  if (r.electric) {
    for (int i = 0; i < n; ++i)
      if (r.charger_kw[static_cast<size_t>(i)] > 0.0)
        layout.delta_var[static_cast<size_t>(i)] = lp.add_variable(0.0, 0.0, kLpInfinity);
  }
  layout.s_var0 = lp.num_vars;
  if (timing) {
    for (int i = 0; i < n; ++i) {
      double hi = r.latest[static_cast<size_t>(i)];
      if (i == n - 1 && completion_cap) hi = std::min(hi, *completion_cap);
      lp.add_variable(0.0, r.earliest[static_cast<size_t>(i)], hi);
    }
  }
  return layout;
}

void add_route_rows(LinearProgram& lp, const RouteLp& r, const LpLayout& layout,
                    bool timing) {
  const int n = static_cast<int>(r.size());
  if (r.electric) {
    // cumulative battery bounds: sum_{l<=i} delta <= B - bhat_i (after charge),
    // sum_{l<i} delta >= L - bhat_i (arrival above the floor)
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(static_cast<size_t>(lp.num_vars), 0.0);
      bool any = false;
      for (int l = 0; l <= i; ++l) {
        const int v = layout.delta_var[static_cast<size_t>(l)];
        if (v >= 0) {
          row[static_cast<size_t>(v)] = 1.0;
          any = true;
        }
      }
      const double cap = r.battery_kwh - r.precharge_battery[static_cast<size_t>(i)];
      if (any) lp.add_row(row, -kLpInfinity, cap);
      else if (cap < -kFeasTol) lp.add_row(row, -kLpInfinity, cap);  // unsatisfiable
    }
    for (int i = 1; i < n; ++i) {
      const double need = r.battery_min_kwh - r.precharge_battery[static_cast<size_t>(i)];
      if (need <= 0.0) continue;
      std::vector<double> row(static_cast<size_t>(lp.num_vars), 0.0);
      for (int l = 0; l < i; ++l) {
        const int v = layout.delta_var[static_cast<size_t>(l)];
        if (v >= 0) row[static_cast<size_t>(v)] = 1.0;
      }
      lp.add_row(row, need, kLpInfinity);
    }
  }
  if (timing) {
    // s_{i+1} - s_i - (60/r_i) delta_i >= st_i + tt_i
    for (int i = 0; i + 1 < n; ++i) {
      std::vector<double> row(static_cast<size_t>(lp.num_vars), 0.0);
      row[static_cast<size_t>(layout.s_var0 + i + 1)] = 1.0;
      row[static_cast<size_t>(layout.s_var0 + i)] = -1.0;
      const int v = layout.delta_var[static_cast<size_t>(i)];
      if (v >= 0) row[static_cast<size_t>(v)] = -60.0 / r.charger_kw[static_cast<size_t>(i)];
      lp.add_row(row,
                 r.service_min[static_cast<size_t>(i)] + r.travel_min[static_cast<size_t>(i)],
                 kLpInfinity);
    }
  }
}

bool battery_bounds_feasible(const RouteLp& r) {
  LinearProgram lp;
  LpLayout layout = add_route(lp, r, false, std::nullopt);
  add_route_rows(lp, r, layout, false);
  return solve_lp(lp).status == LpStatus::Optimal;
}

std::vector<double> extract_charges(const RouteLp& r, const LpLayout& layout,
                                    const std::vector<double>& x) {
  std::vector<double> charge(r.size(), 0.0);
  for (size_t i = 0; i < r.size(); ++i) {
    const int v = layout.delta_var[i];
    if (v >= 0) charge[i] = std::max(0.0, x[static_cast<size_t>(v)]);
  }
  return charge;
}

}  // namespace

RouteLp build_route_lp(const Instance& ins, int company,
                       const std::vector<NodeId>& route) {
  RouteLp r;
  r.sequence = route;
  const size_t n = route.size();
  r.precharge_battery.resize(n);
  r.service_min.resize(n);
  r.earliest.resize(n);
  r.latest.resize(n);
  r.charger_kw.resize(n);
  r.travel_min.resize(n > 0 ? n - 1 : 0);
  const VehicleParams& veh = ins.vehicles[static_cast<size_t>(company)];
  r.battery_kwh = veh.battery_kwh;
  r.battery_min_kwh = veh.battery_min_kwh;
  r.cost_per_min = ins.costs.cost_per_min;
  r.electric = ins.electric();
  r.company = company;

  double battery = veh.battery_kwh;
  for (size_t i = 0; i < n; ++i) {
    const Node& nd = ins.node(route[i]);
    r.precharge_battery[i] = battery;
    r.service_min[i] = nd.service_min;
    r.charger_kw[i] = r.electric ? nd.charger_kw : 0.0;
    const bool windowed = ins.tw_enforced() && nd.kind == NodeKind::Customer;
    r.earliest[i] = windowed ? nd.earliest : 0.0;
    r.latest[i] = windowed ? nd.latest : kNoDeadline;
    if (i + 1 < n) {
      if (!ins.arc_allowed(route[i], route[i + 1]))
        throw std::invalid_argument("build_route_lp: forbidden arc in route");
      r.travel_min[i] = ins.travel_time(route[i], route[i + 1], company);
      battery -= veh.consumption_kwh_per_km * ins.dist(route[i], route[i + 1]);
    }
  }
  return r;
}

ChargingResult solve_charging(const RouteLp& r) {
  ChargingResult out;
  if (r.size() == 0) {
    out.status = ChargingStatus::Optimal;
    out.plan = ChargingPlan{};
    return out;
  }
  std::vector<double> zero(r.size(), 0.0);
  std::vector<double> starts;
  const bool time_ok = earliest_replay(r, zero, -1, 0.0, starts);
  if (!time_ok) {
    out.status = ChargingStatus::TimeInfeasible;
    return out;
  }
  if (battery_ok_zero_charge(r)) {
    out.plan = make_plan(r, std::move(zero), std::move(starts));
    return out;
  }
  if (!battery_bounds_feasible(r)) {
    out.status = ChargingStatus::BatteryInfeasible;
    return out;
  }

  LinearProgram lp;
  LpLayout layout = add_route(lp, r, true, std::nullopt);
  add_route_rows(lp, r, layout, true);
  lp.objective[static_cast<size_t>(layout.s_var0) + r.size() - 1] = 1.0;
  const LpSolution res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) {
    out.status = ChargingStatus::TimeInfeasible;
    return out;
  }
  std::vector<double> charge = extract_charges(r, layout, res.x);
  if (!earliest_replay(r, charge, -1, 0.0, starts)) {
    // numerically tight optimum; fall back to the LP's own schedule
    starts.assign(r.size(), 0.0);
    for (size_t i = 0; i < r.size(); ++i)
      starts[i] = res.x[static_cast<size_t>(layout.s_var0) + i];
  }
  out.plan = make_plan(r, std::move(charge), std::move(starts));
  return out;
}

PairResult solve_charging_pair(const RouteLp& first, int meet_pos_first,
                               const RouteLp& second, int meet_pos_second,
                               double max_wait_min,
                               const std::optional<std::array<double, 2>>& caps) {
  PairResult out;
  auto cap_of = [&caps](int k) -> std::optional<double> {
    if (!caps) return std::nullopt;
    return (*caps)[static_cast<size_t>(k)];
  };

  // fast path: zero charging feasible on both sides
  std::vector<double> zero1(first.size(), 0.0), zero2(second.size(), 0.0);
  std::vector<double> s1, s2;
  const bool t1 = earliest_replay(first, zero1, -1, 0.0, s1);
  const bool t2 = earliest_replay(second, zero2, -1, 0.0, s2);
  if (!t1 || !t2) {
    out.status = ChargingStatus::TimeInfeasible;
    return out;
  }
  if (battery_ok_zero_charge(first) && battery_ok_zero_charge(second)) {
    // close the sync gap by delaying the earlier vehicle only
    double m1 = s1[static_cast<size_t>(meet_pos_first)];
    double m2 = s2[static_cast<size_t>(meet_pos_second)];
    bool ok = true;
    if (m1 + max_wait_min < m2 - kFeasTol)
      ok = earliest_replay(first, zero1, meet_pos_first, m2 - max_wait_min, s1);
    else if (m2 + max_wait_min < m1 - kFeasTol)
      ok = earliest_replay(second, zero2, meet_pos_second, m1 - max_wait_min, s2);
    if (ok) {
      const auto c1 = cap_of(0);
      const auto c2 = cap_of(1);
      if ((!c1 || s1.back() <= *c1 + kFeasTol) && (!c2 || s2.back() <= *c2 + kFeasTol)) {
        out.plan_first = make_plan(first, std::move(zero1), std::move(s1));
        out.plan_second = make_plan(second, std::move(zero2), std::move(s2));
        return out;
      }
    }
    // zero charging cannot close the gap within the caps; charging cannot
    // help either (it only delays), so this pair is time-infeasible
    out.status = ChargingStatus::TimeInfeasible;
    return out;
  }
  if (!battery_bounds_feasible(first) || !battery_bounds_feasible(second)) {
    out.status = ChargingStatus::BatteryInfeasible;
    return out;
  }

  LinearProgram lp;
  LpLayout l1 = add_route(lp, first, true, cap_of(0));
  LpLayout l2 = add_route(lp, second, true, cap_of(1));
  add_route_rows(lp, first, l1, true);
  add_route_rows(lp, second, l2, true);
  // |s_m1 - s_m2| <= WT as one range row
  {
    std::vector<double> row(static_cast<size_t>(lp.num_vars), 0.0);
    row[static_cast<size_t>(l1.s_var0 + meet_pos_first)] = 1.0;
    row[static_cast<size_t>(l2.s_var0 + meet_pos_second)] = -1.0;
    lp.add_row(row, -max_wait_min, max_wait_min);
  }
  lp.objective[static_cast<size_t>(l1.s_var0) + first.size() - 1] = 1.0;
  lp.objective[static_cast<size_t>(l2.s_var0) + second.size() - 1] = 1.0;
  const LpSolution res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) {
    out.status = ChargingStatus::TimeInfeasible;
    return out;
  }

  std::vector<double> c1 = extract_charges(first, l1, res.x);
  std::vector<double> c2 = extract_charges(second, l2, res.x);
  std::vector<double> r1, r2;
  bool ok = earliest_replay(first, c1, -1, 0.0, r1) &&
            earliest_replay(second, c2, -1, 0.0, r2);
  if (ok) {
    const double m1 = r1[static_cast<size_t>(meet_pos_first)];
    const double m2 = r2[static_cast<size_t>(meet_pos_second)];
    if (m1 + max_wait_min < m2 - kFeasTol)
      ok = earliest_replay(first, c1, meet_pos_first, m2 - max_wait_min, r1);
    else if (m2 + max_wait_min < m1 - kFeasTol)
      ok = earliest_replay(second, c2, meet_pos_second, m1 - max_wait_min, r2);
  }
  if (!ok) {  // keep the raw LP schedule when the replay hits a numeric edge
    r1.resize(first.size());
    r2.resize(second.size());
    for (size_t i = 0; i < first.size(); ++i)
      r1[i] = res.x[static_cast<size_t>(l1.s_var0) + i];
    for (size_t i = 0; i < second.size(); ++i)
      r2[i] = res.x[static_cast<size_t>(l2.s_var0) + i];
  }
  out.plan_first = make_plan(first, std::move(c1), std::move(r1));
  out.plan_second = make_plan(second, std::move(c2), std::move(r2));
  return out;
}

std::optional<ChargingPlan> grid_oracle(const RouteLp& r, double resolution_kwh) {
  if (r.size() > 6) throw std::invalid_argument("grid_oracle: route too long");
  if (resolution_kwh <= 0) throw std::invalid_argument("grid_oracle: bad resolution");
  const int n = static_cast<int>(r.size());
  if (n == 0) return ChargingPlan{};

  double max_deficit = 0.0;
  for (double b : r.precharge_battery)
    max_deficit = std::max(max_deficit, r.battery_min_kwh - b);
  const int max_steps =
      r.electric ? static_cast<int>(std::ceil(max_deficit / resolution_kwh + 1e-9)) : 0;

  std::vector<double> charge(static_cast<size_t>(n), 0.0);
  std::vector<double> best_charge;
  std::vector<double> best_starts;
  double best_t = kNoDeadline;

  std::vector<double> starts;
  auto evaluate = [&]() {
    if (r.electric) {
      double cum = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i > 0 && r.precharge_battery[static_cast<size_t>(i)] + cum <
                         r.battery_min_kwh - kFeasTol)
          return;  // arrives below the floor
        cum += charge[static_cast<size_t>(i)];
        if (cum > r.battery_kwh - r.precharge_battery[static_cast<size_t>(i)] + kFeasTol)
          return;  // overcharged
      }
    }
    if (!earliest_replay(r, charge, -1, 0.0, starts)) return;
    if (starts.back() < best_t - 1e-12) {
      best_t = starts.back();
      best_charge = charge;
      best_starts = starts;
    }
  };

  // depth-first over the charge grid at charger positions
  std::vector<int> charger_pos;
  for (int i = 0; i < n; ++i)
    if (r.electric && r.charger_kw[static_cast<size_t>(i)] > 0.0) charger_pos.push_back(i);

  std::function<void(size_t)> rec = [&](size_t d) {
    if (d == charger_pos.size()) {
      evaluate();
      return;
    }
    const int pos = charger_pos[d];
    for (int s = 0; s <= max_steps; ++s) {
      charge[static_cast<size_t>(pos)] = s * resolution_kwh;
      rec(d + 1);
    }
    charge[static_cast<size_t>(pos)] = 0.0;
  };
  rec(0);

  if (best_t == kNoDeadline) return std::nullopt;
  return make_plan(r, std::move(best_charge), std::move(best_starts));
}

}  // namespace coevrp
