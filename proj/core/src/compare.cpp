#include "coevrp/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "coevrp/exact.hpp"
#include "coevrp/rng.hpp"
#include "json.hpp"

namespace coevrp {

namespace {

std::string money(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::optional<Solution> best_noncollab(const Instance& ins, int company,
                                       const AlnsConfig& cfg,
                                       const CompareOptions& opt) {
  if (opt.use_exact) {
    NonCollabResult r = solve_noncollab_exact(ins, company);
    return r.solution;
  }
  std::optional<Solution> best;
  for (int rep = 0; rep < opt.alns_repeats; ++rep) {
    AlnsConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(rep) * 7919;
    Solution s = solve_noncollab(ins, company, c);
    if (s.status != SolveStatus::Feasible) continue;
    if (!best || s.total_cost < best->total_cost) best = std::move(s);
  }
  return best;
}

std::optional<Solution> best_collab(const Instance& ins, const AlnsConfig& cfg,
                                    const CompareOptions& opt) {
  if (opt.use_exact) {
    ExactResult r = solve_exact(ins);
    return r.solution;
  }
  std::optional<Solution> best;
  for (int rep = 0; rep < opt.alns_repeats; ++rep) {
    AlnsConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(rep) * 7919;
    Solution s = solve_alns(ins, c);
    if (s.status != SolveStatus::Feasible) continue;
    if (!best || s.total_cost < best->total_cost) best = std::move(s);
  }
  return best;
}

}  // namespace

std::string model_name(const Instance& ins, bool collaborative) {
  std::string base = ins.electric() ? "EVRP" : "VRP";
  if (collaborative) base = ins.electric() ? "CoEVRPMP" : "CoVRPMP";
  if (ins.tw_enforced()) base += collaborative ? "-TW" : "TW";
  return base;
}

CompareReport run_compare(const Instance& ins, const AlnsConfig& cfg,
                          const CompareOptions& opt) {
  CompareReport rep;
  rep.instance_name = ins.name;
  rep.seed = cfg.seed;
  {
    std::ostringstream digest;
    digest << "rho=" << cfg.removal_fraction << ";iters=" << cfg.iterations_per_segment
           << "x" << cfg.segments_per_run << "x" << cfg.runs
           << ";decay=" << cfg.weight_decay << ";cool=" << cfg.cooling;
    rep.config_digest = digest.str();
  }

  // per-company baselines
  rep.noncollab.model = model_name(ins, false);
  double base_tc = 0.0;
  bool base_all_ok = true;
  for (int k = 0; k < 2; ++k) {
    std::optional<Solution> s = best_noncollab(ins, k, cfg, opt);
    const bool ok = s.has_value() && s->status == SolveStatus::Feasible;
    rep.noncollab_company_ok[static_cast<size_t>(k)] = ok;
    if (ok) {
      base_tc += s->total_cost;
      rep.noncollab_profit[static_cast<size_t>(k)] = s->profits[static_cast<size_t>(k)];
    } else {
      base_all_ok = false;
    }
  }
  rep.noncollab.feasible = base_all_ok;
  rep.noncollab.total_cost = base_tc;
  rep.noncollab.profits = rep.noncollab_profit;

  // collaboration without thresholds
  Instance free_ins = ins;
  free_ins.costs.profit_threshold = {std::nullopt, std::nullopt};
  rep.collab_free.model = model_name(ins, true);
  if (std::optional<Solution> s = best_collab(free_ins, cfg, opt)) {
    rep.collab_free.feasible = true;
    rep.collab_free.total_cost = s->total_cost;
    rep.collab_free.profits = s->profits;
  }

  // collaboration with the baselines as thresholds (explicit thresholds win)
  Instance thr_ins = ins;
  rep.collab_thresholds.model = rep.collab_free.model;
  bool thresholds_known = true;
  for (int k = 0; k < 2; ++k) {
    if (!thr_ins.costs.profit_threshold[static_cast<size_t>(k)]) {
      if (rep.noncollab_company_ok[static_cast<size_t>(k)])
        thr_ins.costs.profit_threshold[static_cast<size_t>(k)] =
            rep.noncollab_profit[static_cast<size_t>(k)];
      else
        thresholds_known = false;
    }
  }
  if (thresholds_known) {
    if (std::optional<Solution> s = best_collab(thr_ins, cfg, opt)) {
      rep.collab_thresholds.feasible = true;
      rep.collab_thresholds.total_cost = s->total_cost;
      rep.collab_thresholds.profits = s->profits;
    }
  }
  return rep;
}

std::string compare_to_csv(const CompareReport& rep) {
  std::ostringstream out;
  out << "scenario,model,TC,TC_drop_pct,profit_1,profit_1_gain_pct,profit_2,"
         "profit_2_gain_pct\n";
  auto line = [&](const char* scenario, const ScenarioResult& s, bool with_delta) {
    out << scenario << "," << s.model << ",";
    if (!s.feasible) {
      out << "-,-,-,-,-,-\n";
      return;
    }
    out << money(s.total_cost) << ",";
    const ScenarioResult& base = rep.noncollab;
    if (with_delta && base.feasible)
      out << money((base.total_cost - s.total_cost) / base.total_cost * 100.0);
    out << ",";
    for (int k = 0; k < 2; ++k) {
      out << money(s.profits[static_cast<size_t>(k)]) << ",";
      if (with_delta && base.feasible &&
          rep.noncollab_company_ok[static_cast<size_t>(k)]) {
        const double b = base.profits[static_cast<size_t>(k)];
        out << money((s.profits[static_cast<size_t>(k)] - b) / std::abs(b) * 100.0);
      }
      if (k == 0) out << ",";
    }
    out << "\n";
  };
  line("noncollab", rep.noncollab, false);
  line("collab_no_thresholds", rep.collab_free, true);
  line("collab_thresholds", rep.collab_thresholds, true);
  return out.str();
}

std::string compare_to_json_text(const CompareReport& rep) {
  nlohmann::json j;
  j["instance"] = rep.instance_name;
  j["seed"] = rep.seed;
  j["config"] = rep.config_digest;
  auto block = [](const ScenarioResult& s) {
    nlohmann::json b;
    b["model"] = s.model;
    b["feasible"] = s.feasible;
    if (s.feasible) {
      b["total_cost"] = s.total_cost;
      b["profits"] = {s.profits[0], s.profits[1]};
    }
    return b;
  };
  j["noncollab"] = block(rep.noncollab);
  j["noncollab"]["company_feasible"] = {rep.noncollab_company_ok[0],
                                        rep.noncollab_company_ok[1]};
  j["collab_no_thresholds"] = block(rep.collab_free);
  j["collab_thresholds"] = block(rep.collab_thresholds);
  return j.dump(2);
}

Instance with_shared_set(const Instance& ins, const std::vector<std::string>& labels) {
  Instance out = ins;
  for (Node& nd : out.nodes)
    if (nd.kind == NodeKind::Customer) nd.customer_kind = CustomerKind::Reserved;
  for (const std::string& label : labels) {
    bool found = false;
    for (Node& nd : out.nodes) {
      if (nd.kind == NodeKind::Customer && nd.label == label) {
        nd.customer_kind = CustomerKind::Shared;
        found = true;
      }
    }
    if (!found)
      throw std::invalid_argument("with_shared_set: unknown customer label " + label);
  }
  out.finalize();
  return out;
}

Instance with_tw_profile(const Instance& ins, double window_len_min,
                         double horizon_min, std::uint64_t seed) {
  if (window_len_min < 0 || horizon_min < window_len_min)
    throw std::invalid_argument("with_tw_profile: need 0 <= len <= horizon");
  Instance out = ins;
  Rng rng(seed);
  for (Node& nd : out.nodes) {
    if (nd.kind != NodeKind::Customer) continue;
    const double e = std::floor(rng.next_double(0.0, horizon_min - window_len_min));
    nd.earliest = e;
    nd.latest = e + window_len_min;
  }
  out.finalize();
  return out;
}

}  // namespace coevrp
