#include "coevrp/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>

#include "coevrp/charging_lp.hpp"
#include "coevrp/evaluator.hpp"

namespace coevrp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kCostEps = 1e-9;

struct RouteCandidate {
  std::vector<NodeId> seq;  // depot ... depot
  int meet_pos = -1;        // -1 for non-collaborative routes
  double dist = 0.0;
  double min_completion = 0.0;  // standalone LP optimum T
  double cost = 0.0;            // c_d * dist + c_t * min_completion
};

struct EnumContext {
  const Instance* ins = nullptr;
  int company = 0;
  NodeId meet = -1;  // -1: no meet point in the route
  double cost_budget = 0.0;
  bool shrink_budget = false;  // single-route search: completed routes tighten it
  Clock::time_point deadline;
  bool timed_out = false;
  std::uint64_t nodes = 0;
  std::vector<RouteCandidate>* out = nullptr;
};

/// Depth-first enumeration of all feasible visit orders for one vehicle with
/// admissible cost pruning. Customers owned by the other company may only be
/// placed after the meet point.
class RouteEnumerator {
 public:
  RouteEnumerator(EnumContext& ctx, std::vector<NodeId> required)
      : ctx_(ctx), required_(std::move(required)) {
    const Instance& ins = *ctx_.ins;
    if (ctx_.meet >= 0) required_.push_back(ctx_.meet);
    std::sort(required_.begin(), required_.end());
    visited_.assign(required_.size(), false);
    seq_.push_back(ins.depot(ctx_.company));
    battery_relaxed_ = ins.vehicles[static_cast<size_t>(ctx_.company)].battery_kwh;
    run();
  }

 private:
  void run() { extend(0.0, 0.0); }

  bool deadline_hit() {
    if ((ctx_.nodes & 1023) == 0 && Clock::now() > ctx_.deadline) ctx_.timed_out = true;
    return ctx_.timed_out;
  }

  // admissible completion-cost bound for the current partial route
  double bound(double dist_so_far, double ready_min, size_t placed) const {
    const Instance& ins = *ctx_.ins;
    const int k = ctx_.company;
    const NodeId cur = seq_.back();
    const NodeId depot = ins.depot(k);
    double dist_lb = 0.0;
    double service_rest = 0.0;
    double max_e = 0.0;
    if (placed == required_.size()) {
      dist_lb = ins.arc_allowed(cur, depot) ? ins.dist(cur, depot) : 0.0;
    } else {
      // nearest-predecessor sum over the remaining visits plus the return arc
      for (size_t a = 0; a < required_.size(); ++a) {
        if (visited_[a]) continue;
        const NodeId v = required_[a];
        double best = kForbiddenArc;
        if (ins.arc_allowed(cur, v)) best = ins.dist(cur, v);
        for (size_t b = 0; b < required_.size(); ++b) {
          if (b == a || visited_[b]) continue;
          if (ins.arc_allowed(required_[b], v))
            best = std::min(best, ins.dist(required_[b], v));
        }
        if (!std::isfinite(best)) return kForbiddenArc;  // unreachable node
        dist_lb += best;
        service_rest += ins.node(v).service_min;
        if (ins.tw_enforced() && ins.is_customer(v))
          max_e = std::max(max_e, ins.node(v).earliest);
      }
      double ret = kForbiddenArc;
      for (size_t a = 0; a < required_.size(); ++a) {
        if (visited_[a]) continue;
        if (ins.arc_allowed(required_[a], depot))
          ret = std::min(ret, ins.dist(required_[a], depot));
      }
      if (!std::isfinite(ret)) return kForbiddenArc;
      dist_lb += ret;
    }
    const double speed = ins.vehicles[static_cast<size_t>(k)].speed_kmh;
    const double drive_lb = ins.travel_time_min ? 0.0 : dist_lb / speed * 60.0;
    const double t_lb = std::max(ready_min + drive_lb + service_rest, max_e);
    return ins.cost_per_km() * (dist_so_far + dist_lb) + ins.costs.cost_per_min * t_lb;
  }

  void extend(double dist_so_far, double ready_min) {
    if (deadline_hit()) return;
    ++ctx_.nodes;
    const Instance& ins = *ctx_.ins;
    const int k = ctx_.company;
    const size_t placed = seq_.size() - 1;

    if (bound(dist_so_far, ready_min, placed) >= ctx_.cost_budget) return;

    if (placed == required_.size()) {
      const NodeId depot = ins.depot(k);
      if (!ins.arc_allowed(seq_.back(), depot)) return;
      std::vector<NodeId> full = seq_;
      full.push_back(depot);
      RouteLp lp = build_route_lp(ins, k, full);
      ChargingResult res = solve_charging(lp);
      if (!res.ok()) return;
      RouteCandidate cand;
      cand.seq = std::move(full);
      cand.meet_pos = ctx_.meet >= 0
                          ? static_cast<int>(std::find(cand.seq.begin(), cand.seq.end(),
                                                       ctx_.meet) -
                                             cand.seq.begin())
                          : -1;
      cand.dist = dist_so_far + ins.dist(cand.seq[cand.seq.size() - 2], depot);
      cand.min_completion = res.plan->completion_min;
      cand.cost = ins.cost_per_km() * cand.dist + ins.costs.cost_per_min * cand.min_completion;
      if (cand.cost < ctx_.cost_budget) {
        if (ctx_.shrink_budget) ctx_.cost_budget = cand.cost;
        ctx_.out->push_back(std::move(cand));
      }
      return;
    }

    const bool meet_done = meet_placed_;
    for (size_t a = 0; a < required_.size(); ++a) {
      if (visited_[a]) continue;
      const NodeId v = required_[a];
      const bool is_meet = v == ctx_.meet;
      // exchanged goods may only be delivered after the meet point
      if (!is_meet && ins.is_customer(v) && ins.node(v).company != k && !meet_done)
        continue;
      const NodeId cur = seq_.back();
      if (!ins.arc_allowed(cur, v)) continue;

      const Node& nd = ins.node(v);
      const double tt = ins.travel_time(cur, v, k);
      double start = ready_min + tt;
      if (ins.tw_enforced() && ins.is_customer(v)) {
        if (start > nd.latest + 1e-9) continue;  // zero-charge earliest misses it
        start = std::max(start, nd.earliest);
      }
      // battery relaxation: even charging to full everywhere cannot recover
      const double drain =
          ins.vehicles[static_cast<size_t>(k)].consumption_kwh_per_km * ins.dist(cur, v);
      const double arrive_batt = battery_relaxed_ - drain;
      if (ins.electric() &&
          arrive_batt < ins.vehicles[static_cast<size_t>(k)].battery_min_kwh - 1e-9)
        continue;
      // any unvisited customer whose deadline is unreachable kills the branch:
      // its service cannot start before departure from v plus its cheapest
      // remaining in-arc
      if (ins.tw_enforced()) {
        bool dead = false;
        const double depart = start + nd.service_min;
        for (size_t b = 0; b < required_.size(); ++b) {
          if (b == a || visited_[b]) continue;
          const NodeId w = required_[b];
          if (!ins.is_customer(w)) continue;
          const double lw = ins.node(w).latest;
          if (!std::isfinite(lw)) continue;
          double min_in = ins.arc_allowed(v, w) ? ins.travel_time(v, w, k) : kForbiddenArc;
          for (size_t c2 = 0; c2 < required_.size(); ++c2) {
            if (c2 == b || c2 == a || visited_[c2]) continue;
            const NodeId u = required_[c2];
            if (ins.arc_allowed(u, w)) min_in = std::min(min_in, ins.travel_time(u, w, k));
          }
          if (depart + min_in > lw + 1e-9) {
            dead = true;
            break;
          }
        }
        if (dead) continue;
      }

      visited_[a] = true;
      seq_.push_back(v);
      const bool prev_meet = meet_placed_;
      if (is_meet) meet_placed_ = true;
      const double prev_batt = battery_relaxed_;
      battery_relaxed_ = ins.electric() && nd.has_charger()
                             ? ins.vehicles[static_cast<size_t>(k)].battery_kwh
                             : arrive_batt;
      extend(dist_so_far + ins.dist(cur, v), start + nd.service_min);
      battery_relaxed_ = prev_batt;
      meet_placed_ = prev_meet;
      seq_.pop_back();
      visited_[a] = false;
      if (ctx_.timed_out) return;
    }
  }

  EnumContext& ctx_;
  std::vector<NodeId> required_;
  std::vector<bool> visited_;
  std::vector<NodeId> seq_;
  bool meet_placed_ = false;
  double battery_relaxed_ = 0.0;
};

/// Quick admissible cost bound for serving `required` with one vehicle.
double set_bound(const Instance& ins, int company, const std::vector<NodeId>& required,
                 NodeId meet) {
  std::vector<NodeId> all = required;
  if (meet >= 0) all.push_back(meet);
  const NodeId depot = ins.depot(company);
  double dist_lb = 0.0;
  double service = 0.0;
  double max_e = 0.0;
  for (NodeId v : all) {
    double best = ins.arc_allowed(depot, v) ? ins.dist(depot, v) : kForbiddenArc;
    for (NodeId u : all)
      if (u != v && ins.arc_allowed(u, v)) best = std::min(best, ins.dist(u, v));
    if (!std::isfinite(best)) return kForbiddenArc;
    dist_lb += best;
    service += ins.node(v).service_min;
    if (ins.tw_enforced() && ins.is_customer(v))
      max_e = std::max(max_e, ins.node(v).earliest);
  }
  double ret = all.empty() ? 0.0 : kForbiddenArc;
  for (NodeId u : all)
    if (ins.arc_allowed(u, depot)) ret = std::min(ret, ins.dist(u, depot));
  if (!all.empty() && !std::isfinite(ret)) return kForbiddenArc;
  dist_lb += all.empty() ? 0.0 : ret;
  const double speed = ins.vehicles[static_cast<size_t>(company)].speed_kmh;
  const double drive_lb = ins.travel_time_min ? 0.0 : dist_lb / speed * 60.0;
  const double t_lb = std::max(drive_lb + service, max_e);
  return ins.cost_per_km() * dist_lb + ins.costs.cost_per_min * t_lb;
}

double assignment_revenue(const Instance& ins, NodeId meet, int company,
                          const std::vector<NodeId>& own_served,
                          const std::vector<NodeId>& foreign_served) {
  double rev = 0.0;
  for (NodeId j : own_served) rev += ins.node(j).price;
  for (NodeId j : foreign_served) {
    const double alpha = profit_ratio(ins, ins.node(j).company, meet, j);
    rev += ins.node(j).price * (1.0 - alpha);
  }
  return rev;
}

Solution assemble_solution(const Instance& ins, NodeId meet,
                           const RouteCandidate& r1, const ChargingPlan& p1,
                           const RouteCandidate& r2, const ChargingPlan& p2) {
  Solution sol;
  sol.meet_point = meet >= 0 ? std::optional<NodeId>(meet) : std::nullopt;
  const std::array<const RouteCandidate*, 2> cands{&r1, &r2};
  const std::array<const ChargingPlan*, 2> plans{&p1, &p2};
  for (int k = 0; k < 2; ++k) {
    Route& route = sol.routes[static_cast<size_t>(k)];
    route.company = k;
    const RouteCandidate& cand = *cands[static_cast<size_t>(k)];
    const ChargingPlan& plan = *plans[static_cast<size_t>(k)];
    BatteryTrace trace = simulate_battery(ins, k, cand.seq, plan.charge_kwh);
    for (size_t p = 0; p < cand.seq.size(); ++p) {
      Visit v;
      v.node = cand.seq[p];
      v.service_start = plan.service_start[p];
      v.charge_kwh = plan.charge_kwh[p];
      v.arrival_battery_kwh =
          p < trace.steps.size()
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
  sol.status = SolveStatus::Feasible;
  return sol;
}

}  // namespace

BranchResult solve_subproblem(const Instance& ins, NodeId meet,
                              const ExactConfig& config) {
  if (!ins.is_meet_point(meet))
    throw std::invalid_argument("solve_subproblem: not a meet point");
  if (ins.customer_count() > config.max_customers)
    throw std::invalid_argument("solve_subproblem: instance above max_customers");

  BranchResult result;
  result.meet_point = meet;
  const auto deadline =
      std::isfinite(config.time_limit_s)
          ? Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(config.time_limit_s))
          : Clock::time_point::max();

  std::vector<NodeId> shared;
  std::array<std::vector<NodeId>, 2> reserved;
  for (NodeId j : ins.customer_ids()) {
    if (ins.node(j).customer_kind == CustomerKind::Shared) shared.push_back(j);
    else reserved[static_cast<size_t>(ins.node(j).company)].push_back(j);
  }

  double incumbent = kForbiddenArc;
  std::optional<Solution> best;
  double global_lb = kForbiddenArc;
  bool timed_out = false;

  auto process_mask = [&](std::uint64_t mask) {
    std::array<std::vector<NodeId>, 2> served = reserved;
    for (size_t s = 0; s < shared.size(); ++s)
      served[(mask >> s) & 1ULL].push_back(shared[s]);

    const double lb0 = set_bound(ins, 0, served[0], meet);
    const double lb1 = set_bound(ins, 1, served[1], meet);
    global_lb = std::min(global_lb, lb0 + lb1);
    if (lb0 + lb1 >= incumbent) return;

    // profit caps: revenue fixed per assignment, thresholds bound completion
    std::array<double, 2> revenue{};
    for (int k = 0; k < 2; ++k) {
      std::vector<NodeId> own, foreign;
      for (NodeId j : served[static_cast<size_t>(k)]) {
        (ins.node(j).company == k ? own : foreign).push_back(j);
      }
      revenue[static_cast<size_t>(k)] = assignment_revenue(ins, meet, k, own, foreign);
    }

    std::array<std::vector<RouteCandidate>, 2> cands;
    bool dead = false;
    for (int k = 0; k < 2 && !dead; ++k) {
      EnumContext ctx;
      ctx.ins = &ins;
      ctx.company = k;
      ctx.meet = meet;
      ctx.cost_budget = incumbent - (k == 0 ? lb1 : lb0);
      ctx.deadline = deadline;
      ctx.out = &cands[static_cast<size_t>(k)];
      RouteEnumerator enumerate(ctx, served[static_cast<size_t>(k)]);
      result.nodes_explored += ctx.nodes;
      if (ctx.timed_out) timed_out = true;
      if (cands[static_cast<size_t>(k)].empty()) dead = true;
    }
    if (dead || timed_out) return;

    for (int k = 0; k < 2; ++k)
      std::stable_sort(cands[static_cast<size_t>(k)].begin(),
                       cands[static_cast<size_t>(k)].end(),
                       [](const RouteCandidate& a, const RouteCandidate& b) {
                         return a.cost < b.cost;
                       });

    std::optional<std::array<double, 2>> caps;
    if (ins.thresholds_enabled()) caps = std::array<double, 2>{};

    for (const RouteCandidate& r1 : cands[0]) {
      if (r1.cost + cands[1].front().cost >= incumbent - kCostEps) break;
      RouteLp lp1 = build_route_lp(ins, 0, r1.seq);
      for (const RouteCandidate& r2 : cands[1]) {
        if (r1.cost + r2.cost >= incumbent - kCostEps) break;
        if (Clock::now() > deadline) {
          timed_out = true;
          break;
        }
        if (caps) {
          (*caps)[0] = (revenue[0] - ins.cost_per_km() * r1.dist - ins.threshold(0)) /
                       ins.costs.cost_per_min;
          (*caps)[1] = (revenue[1] - ins.cost_per_km() * r2.dist - ins.threshold(1)) /
                       ins.costs.cost_per_min;
          if ((*caps)[0] < -kCostEps || (*caps)[1] < -kCostEps) continue;
        }
        RouteLp lp2 = build_route_lp(ins, 1, r2.seq);
        PairResult pair = solve_charging_pair(lp1, r1.meet_pos, lp2, r2.meet_pos,
                                              ins.costs.max_wait_min, caps);
        ++result.nodes_explored;
        if (!pair.ok()) continue;
        const double total =
            ins.cost_per_km() * (r1.dist + r2.dist) +
            ins.costs.cost_per_min *
                (pair.plan_first->completion_min + pair.plan_second->completion_min);
        if (total < incumbent - kCostEps) {
          incumbent = total;
          best = assemble_solution(ins, meet, r1, *pair.plan_first, r2, *pair.plan_second);
        }
      }
      if (timed_out) break;
    }
  };

  // seed the incumbent with the owner-serves-own assignment, then sweep
  std::uint64_t seed_mask = 0;
  for (size_t s = 0; s < shared.size(); ++s)
    if (ins.node(shared[s]).company == 1) seed_mask |= 1ULL << s;
  process_mask(seed_mask);
  const std::uint64_t combos = 1ULL << shared.size();
  for (std::uint64_t mask = 0; mask < combos && !timed_out; ++mask) {
    if (mask == seed_mask) continue;
    process_mask(mask);
  }

  result.best_solution = std::move(best);
  result.proven_optimal = !timed_out && result.best_solution.has_value();
  result.lower_bound = result.proven_optimal ? incumbent
                       : std::isfinite(global_lb) ? global_lb
                                                  : 0.0;
  return result;
}

ExactResult solve_exact(const Instance& ins, const ExactConfig& config) {
  ExactResult out;
  const std::vector<NodeId> meets = ins.meet_point_ids();

  if (config.parallel_branches && meets.size() > 1) {
    std::vector<std::future<BranchResult>> futures;
    futures.reserve(meets.size());
    for (NodeId m : meets)
      futures.push_back(std::async(std::launch::async, [&ins, m, &config] {
        return solve_subproblem(ins, m, config);
      }));
    for (auto& f : futures) out.branches.push_back(f.get());
  } else {
    for (NodeId m : meets) out.branches.push_back(solve_subproblem(ins, m, config));
  }

  out.proven_optimal = true;
  const BranchResult* winner = nullptr;
  for (const BranchResult& br : out.branches) {
    if (!br.proven_optimal) out.proven_optimal = false;
    if (!br.best_solution) continue;
    if (!winner || br.best_solution->total_cost <
                       winner->best_solution->total_cost - kCostEps)
      winner = &br;
    // equal-cost branches already favor the lower meet index by iteration order
  }
  if (winner) out.solution = *winner->best_solution;
  return out;
}

NonCollabResult solve_noncollab_exact(const Instance& ins, int company,
                                      const ExactConfig& config) {
  NonCollabResult out;
  const auto deadline =
      std::isfinite(config.time_limit_s)
          ? Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(config.time_limit_s))
          : Clock::time_point::max();

  std::vector<RouteCandidate> cands;
  EnumContext ctx;
  ctx.ins = &ins;
  ctx.company = company;
  ctx.meet = -1;
  ctx.cost_budget = kForbiddenArc;
  ctx.shrink_budget = true;
  ctx.deadline = deadline;
  ctx.out = &cands;
  RouteEnumerator enumerate(ctx, ins.customers_of(company));
  out.nodes_explored = ctx.nodes;
  out.proven_optimal = !ctx.timed_out;
  if (cands.empty()) return out;

  const RouteCandidate* best = &cands.front();
  for (const RouteCandidate& c : cands)
    if (c.cost < best->cost - kCostEps) best = &c;

  RouteLp lp = build_route_lp(ins, company, best->seq);
  ChargingResult res = solve_charging(lp);
  if (!res.ok()) return out;  // cannot happen: candidate was LP-feasible

  Solution sol;
  sol.restricted_company = company;
  Route& route = sol.routes[static_cast<size_t>(company)];
  route.company = company;
  BatteryTrace trace = simulate_battery(ins, company, best->seq, res.plan->charge_kwh);
  for (size_t p = 0; p < best->seq.size(); ++p) {
    Visit v;
    v.node = best->seq[p];
    v.service_start = res.plan->service_start[p];
    v.charge_kwh = res.plan->charge_kwh[p];
    v.arrival_battery_kwh = p < trace.steps.size()
                                ? trace.steps[p].arrival_kwh
                                : ins.vehicles[static_cast<size_t>(company)].battery_kwh;
    route.visits.push_back(v);
  }
  Route& other = sol.routes[static_cast<size_t>(1 - company)];
  other.company = 1 - company;
  const CostBreakdown cost = objective(ins, sol);
  sol.total_cost = cost.total;
  sol.energy_cost = cost.energy;
  sol.labor_cost = cost.labor;
  for (int k = 0; k < 2; ++k)
    sol.profits[static_cast<size_t>(k)] = company_profit(ins, sol, k);
  sol.status = SolveStatus::Feasible;
  out.solution = std::move(sol);
  return out;
}

}  // namespace coevrp
