#include "coevrp/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace coevrp {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kPhase1Tol = 1e-7;

enum : signed char { kAtLower = 0, kAtUpper = 1, kBasic = 2, kAtZero = 3 };

struct Tableau {
  int m = 0;
  int ncols = 0;
  std::vector<double> t;     // m x ncols, row-major: B^-1 * A
  std::vector<double> xb;    // values of basic variables
  std::vector<int> basis;    // column basic in each row
  std::vector<signed char> stat;
  std::vector<double> lb, ub;
  std::vector<double> z;     // reduced costs
  int iterations = 0;

  double& at(int r, int c) { return t[static_cast<size_t>(r) * ncols + c]; }
  double nonbasic_value(int j) const {
    if (stat[static_cast<size_t>(j)] == kAtLower) return lb[static_cast<size_t>(j)];
    if (stat[static_cast<size_t>(j)] == kAtUpper) return ub[static_cast<size_t>(j)];
    return 0.0;
  }
};

void compute_reduced_costs(Tableau& tb, const std::vector<double>& cost) {
  tb.z = cost;
  for (int r = 0; r < tb.m; ++r) {
    const double cb = cost[static_cast<size_t>(tb.basis[static_cast<size_t>(r)])];
    if (cb == 0.0) continue;
    for (int j = 0; j < tb.ncols; ++j) tb.z[static_cast<size_t>(j)] -= cb * tb.at(r, j);
  }
}

/// Runs the simplex loop until optimal/unbounded for the current cost row.
LpStatus iterate(Tableau& tb) {
  int degenerate_streak = 0;
  for (;;) {
    if (++tb.iterations > 2'000'000)
      throw std::runtime_error("simplex: iteration limit exceeded");
    const bool bland = degenerate_streak > 60;

    // entering variable
    int enter = -1;
    int dir = +1;
    double best = kReducedCostTol;
    for (int j = 0; j < tb.ncols; ++j) {
      const signed char s = tb.stat[static_cast<size_t>(j)];
      if (s == kBasic) continue;
      const double rc = tb.z[static_cast<size_t>(j)];
      if ((s == kAtLower || s == kAtZero) && rc < -best) {
        enter = j;
        dir = +1;
        if (bland) break;
        best = -rc;
      } else if ((s == kAtUpper || s == kAtZero) && rc > best) {
        enter = j;
        dir = -1;
        if (bland) break;
        best = rc;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    // ratio test: how far can the entering variable move
    double limit = kLpInfinity;
    int leave_row = -1;
    bool leave_at_upper = false;
    const double span = tb.ub[static_cast<size_t>(enter)] - tb.lb[static_cast<size_t>(enter)];
    if (std::isfinite(span)) limit = span;  // bound-to-bound flip

    for (int r = 0; r < tb.m; ++r) {
      const double a = tb.at(r, enter) * dir;
      if (std::abs(a) < kPivotTol) continue;
      const int bv = tb.basis[static_cast<size_t>(r)];
      double ratio;
      bool hits_upper;
      if (a > 0) {  // basic value decreases toward its lower bound
        const double lo = tb.lb[static_cast<size_t>(bv)];
        if (!std::isfinite(lo)) continue;
        ratio = (tb.xb[static_cast<size_t>(r)] - lo) / a;
        hits_upper = false;
      } else {  // basic value increases toward its upper bound
        const double hi = tb.ub[static_cast<size_t>(bv)];
        if (!std::isfinite(hi)) continue;
        ratio = (tb.xb[static_cast<size_t>(r)] - hi) / a;
        hits_upper = true;
      }
      if (ratio < -1e-12) ratio = 0.0;
      if (ratio < limit - 1e-12 ||
          (bland && leave_row >= 0 && std::abs(ratio - limit) <= 1e-12 &&
           bv < tb.basis[static_cast<size_t>(leave_row)])) {
        limit = ratio;
        leave_row = r;
        leave_at_upper = hits_upper;
      }
    }

    if (!std::isfinite(limit)) return LpStatus::Unbounded;
    degenerate_streak = limit < 1e-12 ? degenerate_streak + 1 : 0;

    if (leave_row < 0) {
      // bound flip: entering variable crosses to its other bound
      for (int r = 0; r < tb.m; ++r)
        tb.xb[static_cast<size_t>(r)] -= dir * tb.at(r, enter) * limit;
      tb.stat[static_cast<size_t>(enter)] =
          tb.stat[static_cast<size_t>(enter)] == kAtLower ? kAtUpper : kAtLower;
      continue;
    }

    // pivot
    const double enter_value = tb.nonbasic_value(enter) + dir * limit;
    for (int r = 0; r < tb.m; ++r)
      if (r != leave_row) tb.xb[static_cast<size_t>(r)] -= dir * tb.at(r, enter) * limit;

    const int leaving = tb.basis[static_cast<size_t>(leave_row)];
    tb.stat[static_cast<size_t>(leaving)] = leave_at_upper ? kAtUpper : kAtLower;
    tb.stat[static_cast<size_t>(enter)] = kBasic;
    tb.basis[static_cast<size_t>(leave_row)] = enter;
    tb.xb[static_cast<size_t>(leave_row)] = enter_value;

    const double pivot = tb.at(leave_row, enter);
    const double inv = 1.0 / pivot;
    for (int j = 0; j < tb.ncols; ++j) tb.at(leave_row, j) *= inv;
    for (int r = 0; r < tb.m; ++r) {
      if (r == leave_row) continue;
      const double f = tb.at(r, enter);
      if (std::abs(f) < kPivotTol) {
        tb.at(r, enter) = 0.0;
        continue;
      }
      for (int j = 0; j < tb.ncols; ++j) tb.at(r, j) -= f * tb.at(leave_row, j);
      tb.at(r, enter) = 0.0;
    }
    const double zf = tb.z[static_cast<size_t>(enter)];
    if (std::abs(zf) > 0.0) {
      for (int j = 0; j < tb.ncols; ++j)
        tb.z[static_cast<size_t>(j)] -= zf * tb.at(leave_row, j);
      tb.z[static_cast<size_t>(enter)] = 0.0;
    }
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  LpSolution out;

  Tableau tb;
  tb.m = m;
  tb.ncols = n + 2 * m;  // structural, row activity, artificial
  tb.t.assign(static_cast<size_t>(m) * tb.ncols, 0.0);
  tb.lb.resize(static_cast<size_t>(tb.ncols));
  tb.ub.resize(static_cast<size_t>(tb.ncols));
  tb.stat.assign(static_cast<size_t>(tb.ncols), kAtLower);

  for (int j = 0; j < n; ++j) {
    tb.lb[static_cast<size_t>(j)] = lp.var_lower[static_cast<size_t>(j)];
    tb.ub[static_cast<size_t>(j)] = lp.var_upper[static_cast<size_t>(j)];
    if (std::isfinite(tb.lb[static_cast<size_t>(j)]))
      tb.stat[static_cast<size_t>(j)] = kAtLower;
    else if (std::isfinite(tb.ub[static_cast<size_t>(j)]))
      tb.stat[static_cast<size_t>(j)] = kAtUpper;
    else
      tb.stat[static_cast<size_t>(j)] = kAtZero;
  }
  for (int r = 0; r < m; ++r) {
    tb.lb[static_cast<size_t>(n + r)] = lp.row_lower[static_cast<size_t>(r)];
    tb.ub[static_cast<size_t>(n + r)] = lp.row_upper[static_cast<size_t>(r)];
  }

  // initial activity of each row with nonbasic structurals at their bounds
  std::vector<double> activity(static_cast<size_t>(m), 0.0);
  for (int r = 0; r < m; ++r) {
    double acc = 0.0;
    const auto& row = lp.rows[static_cast<size_t>(r)];
    for (int j = 0; j < n; ++j) acc += row[static_cast<size_t>(j)] * tb.nonbasic_value(j);
    activity[static_cast<size_t>(r)] = acc;
  }

  // rows: A.x - r + sigma*a = 0; rows that start within their bounds take the
  // activity variable straight into the basis, the rest get an artificial
  // absorbing the residual
  tb.basis.resize(static_cast<size_t>(m));
  tb.xb.resize(static_cast<size_t>(m));
  for (int r = 0; r < m; ++r) {
    const double lo = lp.row_lower[static_cast<size_t>(r)];
    const double hi = lp.row_upper[static_cast<size_t>(r)];
    const double act = activity[static_cast<size_t>(r)];
    const auto& row = lp.rows[static_cast<size_t>(r)];
    tb.lb[static_cast<size_t>(n + m + r)] = 0.0;
    tb.ub[static_cast<size_t>(n + m + r)] = kLpInfinity;

    if (act >= lo && act <= hi) {
      // activity variable basic at its current value
      for (int j = 0; j < n; ++j) tb.at(r, j) = -row[static_cast<size_t>(j)];
      tb.at(r, n + r) = 1.0;
      tb.at(r, n + m + r) = -1.0;
      tb.basis[static_cast<size_t>(r)] = n + r;
      tb.stat[static_cast<size_t>(n + r)] = kBasic;
      tb.stat[static_cast<size_t>(n + m + r)] = kAtLower;
      tb.xb[static_cast<size_t>(r)] = act;
      continue;
    }

    double clamped = act < lo ? lo : hi;
    const double residual = act - clamped;
    const double sigma = residual < 0 ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) tb.at(r, j) = sigma * row[static_cast<size_t>(j)];
    tb.at(r, n + r) = -sigma;
    tb.at(r, n + m + r) = 1.0;
    tb.stat[static_cast<size_t>(n + r)] = clamped == lo ? kAtLower : kAtUpper;
    tb.basis[static_cast<size_t>(r)] = n + m + r;
    tb.stat[static_cast<size_t>(n + m + r)] = kBasic;
    tb.xb[static_cast<size_t>(r)] = std::abs(residual);
  }

  // phase 1: drive artificials to zero
  std::vector<double> phase1_cost(static_cast<size_t>(tb.ncols), 0.0);
  for (int r = 0; r < m; ++r) phase1_cost[static_cast<size_t>(n + m + r)] = 1.0;
  compute_reduced_costs(tb, phase1_cost);
  LpStatus st = iterate(tb);
  out.iterations = tb.iterations;
  if (st == LpStatus::Unbounded) {
    out.status = LpStatus::Infeasible;  // phase 1 is bounded below; numerical guard
    return out;
  }
  double infeasibility = 0.0;
  for (int r = 0; r < m; ++r)
    if (tb.basis[static_cast<size_t>(r)] >= n + m)
      infeasibility += tb.xb[static_cast<size_t>(r)];
  if (infeasibility > kPhase1Tol) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // freeze artificials at zero for phase 2
  for (int r = 0; r < m; ++r) {
    tb.lb[static_cast<size_t>(n + m + r)] = 0.0;
    tb.ub[static_cast<size_t>(n + m + r)] = 0.0;
  }

  std::vector<double> phase2_cost(static_cast<size_t>(tb.ncols), 0.0);
  for (int j = 0; j < n; ++j) phase2_cost[static_cast<size_t>(j)] = lp.objective[static_cast<size_t>(j)];
  compute_reduced_costs(tb, phase2_cost);
  st = iterate(tb);
  out.iterations = tb.iterations;
  if (st == LpStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.x.assign(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) out.x[static_cast<size_t>(j)] = tb.nonbasic_value(j);
  for (int r = 0; r < m; ++r)
    if (tb.basis[static_cast<size_t>(r)] < n)
      out.x[static_cast<size_t>(tb.basis[static_cast<size_t>(r)])] = tb.xb[static_cast<size_t>(r)];
  out.objective = 0.0;
  for (int j = 0; j < n; ++j)
    out.objective += lp.objective[static_cast<size_t>(j)] * out.x[static_cast<size_t>(j)];
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace coevrp
