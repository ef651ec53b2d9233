// Command-line front end: solve / baseline / validate / generate / compare /
// plot / export-milp / import-solution over the JSON instance format.
// Exit codes: 0 solved & feasible, 2 no feasible solution, 1 usage/data error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coevrp/alns.hpp"
#include "coevrp/compare.hpp"
#include "coevrp/evaluator.hpp"
#include "coevrp/exact.hpp"
#include "coevrp/generator.hpp"
#include "coevrp/gothenburg.hpp"
#include "coevrp/io.hpp"
#include "coevrp/milp_io.hpp"
#include "coevrp/plot.hpp"

namespace {

using namespace coevrp;

struct ModeFlags {
  bool ev = false, conventional = false;
  bool tw = false, no_tw = false;
  bool thresholds = false, no_thresholds = false;
  std::string shared_set;
  std::string tw_profile;
  std::uint64_t tw_profile_seed = 1;
};

void add_mode_flags(CLI::App* cmd, ModeFlags& flags) {
  cmd->add_flag("--ev", flags.ev, "Electric vehicles");
  cmd->add_flag("--conventional", flags.conventional, "Conventional vehicles");
  cmd->add_flag("--tw", flags.tw, "Enforce customer time windows");
  cmd->add_flag("--no-tw", flags.no_tw, "Ignore customer time windows");
  cmd->add_flag("--thresholds", flags.thresholds,
                "Enforce profit thresholds (non-collaborative optima when the "
                "instance carries none)");
  cmd->add_flag("--no-thresholds", flags.no_thresholds, "Drop profit thresholds");
  cmd->add_option("--shared-set", flags.shared_set,
                  "Customer labels that may be exchanged: 'all', 'none' or a "
                  "comma list like 2,13");
  cmd->add_option("--tw-profile", flags.tw_profile,
                  "Randomized windows LEN,HORIZON in minutes (table-4 style)");
  cmd->add_option("--tw-profile-seed", flags.tw_profile_seed,
                  "Seed for --tw-profile");
}

Instance load_any(const std::string& path) {
  if (path == "gothenburg") return builtin_gothenburg();
  return load_instance(path);
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Instance apply_modes(Instance ins, const ModeFlags& flags, const AlnsConfig& cfg) {
  if (flags.ev && flags.conventional)
    throw CLI::ValidationError("--ev and --conventional are mutually exclusive");
  if (flags.tw && flags.no_tw)
    throw CLI::ValidationError("--tw and --no-tw are mutually exclusive");
  if (flags.ev) ins.ev_mode = EvMode::Electric;
  if (flags.conventional) ins.ev_mode = EvMode::Conventional;
  if (flags.tw) ins.tw_mode = TwMode::Enforced;
  if (flags.no_tw) ins.tw_mode = TwMode::Ignored;
  if (!flags.tw_profile.empty()) {
    const auto parts = split_csv(flags.tw_profile);
    if (parts.size() != 2)
      throw CLI::ValidationError("--tw-profile expects LEN,HORIZON");
    ins = with_tw_profile(ins, std::stod(parts[0]), std::stod(parts[1]),
                          flags.tw_profile_seed);
  }
  if (!flags.shared_set.empty()) {
    if (flags.shared_set == "all") {
      for (Node& nd : ins.nodes)
        if (nd.kind == NodeKind::Customer) nd.customer_kind = CustomerKind::Shared;
    } else if (flags.shared_set == "none") {
      for (Node& nd : ins.nodes)
        if (nd.kind == NodeKind::Customer) nd.customer_kind = CustomerKind::Reserved;
    } else {
      ins = with_shared_set(ins, split_csv(flags.shared_set));
    }
  }
  if (flags.no_thresholds) ins.costs.profit_threshold = {std::nullopt, std::nullopt};
  if (flags.thresholds && !ins.thresholds_enabled()) {
    for (int k = 0; k < 2; ++k) {
      Solution base = solve_noncollab(ins, k, cfg);
      if (base.status != SolveStatus::Feasible)
        throw std::runtime_error(
            "cannot derive profit thresholds: non-collaborative baseline "
            "infeasible for company " +
            std::to_string(k + 1));
      ins.costs.profit_threshold[static_cast<size_t>(k)] =
          base.profits[static_cast<size_t>(k)];
    }
  }
  return ins;
}

int report_and_store(const Instance& ins, const Solution& sol,
                     const std::string& out_path, const std::string& report_path) {
  const EvalReport rep = validate(ins, sol);
  if (!out_path.empty()) save_solution(ins, sol, out_path);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << report_to_json_text(rep) << "\n";
  }
  std::cout << "status: "
            << (sol.status == SolveStatus::Feasible        ? "feasible"
                : sol.status == SolveStatus::BestEffort    ? "best_effort"
                                                           : "no_feasible_solution")
            << "\n";
  if (sol.status != SolveStatus::NoFeasibleSolution) {
    std::printf("total_cost: %.1f\nprofit_1: %.1f\nprofit_2: %.1f\n", sol.total_cost,
                sol.profits[0], sol.profits[1]);
    std::cout << "validator: " << (rep.feasible ? "clean" : "violations") << "\n";
    if (!rep.feasible)
      for (const Violation& v : rep.violations)
        std::cout << "  " << v.constraint_id << " " << v.detail << "\n";
  }
  return sol.status == SolveStatus::NoFeasibleSolution ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative EV routing with meet points"};
  app.require_subcommand(1);

  // ---- solve ----
  std::string in_path, out_path, report_path, method = "alns", config_path,
              progress_path;
  ModeFlags mode;
  int company = 0;
  bool no_collab = false;
  double time_limit = 0.0;
  std::uint64_t seed = 1;

  CLI::App* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", in_path)->required();
  solve->add_option("--method", method, "alns or exact");
  solve->add_option("--seed", seed);
  solve->add_option("--time-limit", time_limit, "seconds");
  solve->add_option("--config", config_path, "ALNS config JSON");
  solve->add_option("--out", out_path, "solution JSON path");
  solve->add_option("--report", report_path, "validation report JSON path");
  solve->add_option("--progress", progress_path, "iter,segment,run,best_cost log");
  solve->add_flag("--no-collab", no_collab, "Single-company baseline");
  solve->add_option("--company", company, "Company for --no-collab (1 or 2)");
  add_mode_flags(solve, mode);

  // ---- baseline ----
  std::string b_in, b_out, b_report;
  int b_company = 1;
  std::uint64_t b_seed = 1;
  std::string b_config;
  ModeFlags b_mode;
  CLI::App* baseline = app.add_subcommand("baseline", "Non-collaborative run");
  baseline->add_option("instance", b_in)->required();
  baseline->add_option("--company", b_company)->required();
  baseline->add_option("--seed", b_seed);
  baseline->add_option("--config", b_config);
  baseline->add_option("--out", b_out);
  baseline->add_option("--report", b_report);
  add_mode_flags(baseline, b_mode);

  // ---- validate ----
  std::string v_in, v_sol, v_out;
  ModeFlags v_mode;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Validate a solution file");
  validate_cmd->add_option("instance", v_in)->required();
  validate_cmd->add_option("solution", v_sol)->required();
  validate_cmd->add_option("--out", v_out, "report JSON path");
  add_mode_flags(validate_cmd, v_mode);

  // ---- generate ----
  int g_customers = 100;
  double g_region = 25.0;
  std::uint64_t g_seed = 1;
  std::string g_slots = "two";
  int g_meets = 3;
  std::string g_out;
  CLI::App* generate = app.add_subcommand("generate", "Random planar instance");
  generate->add_option("--customers", g_customers)->required();
  generate->add_option("--region", g_region, "square side, km");
  generate->add_option("--seed", g_seed);
  generate->add_option("--tw-slots", g_slots, "none or two");
  generate->add_option("--meet-points", g_meets);
  generate->add_option("--out", g_out)->required();

  // ---- compare ----
  std::string c_in, c_csv, c_json, c_config;
  std::uint64_t c_seed = 1;
  int c_repeats = 3;
  bool c_exact = false;
  ModeFlags c_mode;
  CLI::App* compare = app.add_subcommand(
      "compare", "Baselines vs collaboration, with and without thresholds");
  compare->add_option("instance", c_in)->required();
  compare->add_option("--seed", c_seed);
  compare->add_option("--repeats", c_repeats, "best-of-N ALNS seeds");
  compare->add_flag("--exact", c_exact, "use the exact solvers");
  compare->add_option("--config", c_config);
  compare->add_option("--out-csv", c_csv);
  compare->add_option("--out-json", c_json);
  add_mode_flags(compare, c_mode);

  // ---- plot ----
  std::string p_in, p_sol, p_out, p_format = "svg";
  CLI::App* plot = app.add_subcommand("plot", "Render routes to SVG or GeoJSON");
  plot->add_option("instance", p_in)->required();
  plot->add_option("solution", p_sol)->required();
  plot->add_option("--format", p_format, "svg or geojson");
  plot->add_option("--out", p_out)->required();

  // ---- export-milp ----
  std::string m_in, m_out, m_meet;
  ModeFlags m_mode;
  CLI::App* milp = app.add_subcommand("export-milp",
                                      "Write the fixed-meet-point MILP (LP format)");
  milp->add_option("instance", m_in)->required();
  milp->add_option("--meet", m_meet, "meet point label (default: first)");
  milp->add_option("--out", m_out)->required();
  add_mode_flags(milp, m_mode);

  // ---- import-solution ----
  std::string i_in, i_vars, i_out, i_report;
  ModeFlags i_mode;
  CLI::App* import_cmd = app.add_subcommand(
      "import-solution", "Rebuild a solution from an external solver's var file");
  import_cmd->add_option("instance", i_in)->required();
  import_cmd->add_option("vars", i_vars)->required();
  import_cmd->add_option("--out", i_out);
  import_cmd->add_option("--report", i_report);
  add_mode_flags(import_cmd, i_mode);

  // ---- gothenburg ----
  std::string d_out;
  CLI::App* dump = app.add_subcommand("gothenburg", "Export the built-in case study");
  dump->add_option("--out", d_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      AlnsConfig cfg;
      if (!config_path.empty()) cfg = load_alns_config(config_path);
      cfg.seed = seed;
      if (time_limit > 0) cfg.time_limit_s = time_limit;
      Instance ins = apply_modes(load_any(in_path), mode, cfg);

      std::ofstream progress_out;
      ProgressFn progress;
      if (!progress_path.empty()) {
        progress_out.open(progress_path);
        progress_out << "iter,segment,run,best_cost\n";
        progress = [&progress_out](int it, int seg, int run, double best) {
          progress_out << it << "," << seg << "," << run << "," << best << "\n";
        };
      }

      Solution sol;
      if (method == "alns") {
        sol = no_collab ? solve_noncollab(ins, company - 1, cfg, progress)
                        : solve_alns(ins, cfg, progress);
      } else if (method == "exact") {
        ExactConfig ecfg;
        if (time_limit > 0) ecfg.time_limit_s = time_limit;
        ecfg.max_customers = ins.customer_count();
        if (no_collab) {
          NonCollabResult r = solve_noncollab_exact(ins, company - 1, ecfg);
          if (!r.solution) {
            std::cout << "status: no_feasible_solution\n";
            return 2;
          }
          sol = *r.solution;
          if (!r.proven_optimal) sol.status = SolveStatus::BestEffort;
        } else {
          ExactResult r = solve_exact(ins, ecfg);
          if (!r.solution) {
            std::cout << "status: no_feasible_solution\n";
            return 2;
          }
          sol = *r.solution;
          if (!r.proven_optimal) sol.status = SolveStatus::BestEffort;
        }
      } else {
        std::cerr << "unknown method " << method << "\n";
        return 1;
      }
      return report_and_store(ins, sol, out_path, report_path);
    }

    if (*baseline) {
      AlnsConfig cfg;
      if (!b_config.empty()) cfg = load_alns_config(b_config);
      cfg.seed = b_seed;
      Instance ins = apply_modes(load_any(b_in), b_mode, cfg);
      Solution sol = solve_noncollab(ins, b_company - 1, cfg);
      return report_and_store(ins, sol, b_out, b_report);
    }

    if (*validate_cmd) {
      AlnsConfig cfg;
      Instance ins = apply_modes(load_any(v_in), v_mode, cfg);
      Solution sol = load_solution(v_sol);
      EvalReport rep = validate(ins, sol);
      if (!v_out.empty()) {
        std::ofstream out(v_out);
        out << report_to_json_text(rep) << "\n";
      }
      std::cout << report_to_json_text(rep) << "\n";
      return rep.feasible ? 0 : 2;
    }

    if (*generate) {
      TwSlots slots;
      if (g_slots == "none") slots = TwSlots::None;
      else if (g_slots == "two") slots = TwSlots::TwoSlot;
      else {
        std::cerr << "unknown --tw-slots " << g_slots << "\n";
        return 1;
      }
      GeneratorOptions gopt;
      gopt.meet_points = g_meets;
      Instance ins = generate_instance(g_customers, g_region, g_seed, slots, gopt);
      save_instance(ins, g_out);
      std::cout << "wrote " << g_out << "\n";
      return 0;
    }

    if (*compare) {
      AlnsConfig cfg;
      if (!c_config.empty()) cfg = load_alns_config(c_config);
      cfg.seed = c_seed;
      Instance ins = apply_modes(load_any(c_in), c_mode, cfg);
      CompareOptions opt;
      opt.use_exact = c_exact;
      opt.alns_repeats = c_repeats;
      CompareReport rep = run_compare(ins, cfg, opt);
      const std::string csv = compare_to_csv(rep);
      std::cout << csv;
      if (!c_csv.empty()) {
        std::ofstream out(c_csv);
        out << csv;
      }
      if (!c_json.empty()) {
        std::ofstream out(c_json);
        out << compare_to_json_text(rep) << "\n";
      }
      return 0;
    }

    if (*plot) {
      Instance ins = load_any(p_in);
      Solution sol = load_solution(p_sol);
      std::ofstream out(p_out);
      if (!out) throw std::invalid_argument(p_out + ": cannot open for writing");
      if (p_format == "svg") out << solution_to_svg(ins, sol);
      else if (p_format == "geojson") out << solution_to_geojson(ins, sol);
      else {
        std::cerr << "unknown --format " << p_format << "\n";
        return 1;
      }
      std::cout << "wrote " << p_out << "\n";
      return 0;
    }

    if (*milp) {
      AlnsConfig cfg;
      Instance ins = apply_modes(load_any(m_in), m_mode, cfg);
      NodeId meet = ins.first_meet_point();
      if (!m_meet.empty()) {
        meet = -1;
        for (NodeId m2 : ins.meet_point_ids())
          if (ins.node(m2).label == m_meet) meet = m2;
        if (meet < 0) {
          std::cerr << "unknown meet point label " << m_meet << "\n";
          return 1;
        }
      }
      export_milp(ins, meet, m_out);
      std::cout << "wrote " << m_out << "\n";
      return 0;
    }

    if (*import_cmd) {
      AlnsConfig cfg;
      Instance ins = apply_modes(load_any(i_in), i_mode, cfg);
      Solution sol = import_milp_solution(ins, i_vars);
      return report_and_store(ins, sol, i_out, i_report);
    }

    if (*dump) {
      save_instance(builtin_gothenburg(), d_out);
      std::cout << "wrote " << d_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
