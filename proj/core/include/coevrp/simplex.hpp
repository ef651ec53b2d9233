#pragma once

#include <limits>
#include <vector>

namespace coevrp {

inline constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Dense LP in the form  minimize c.x  subject to  row_lower <= A.x <= row_upper,
/// var_lower <= x <= var_upper. Row bounds may coincide (equality) and any
/// bound may be infinite.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;                 // size num_vars
  std::vector<std::vector<double>> rows;         // each of size num_vars
  std::vector<double> row_lower, row_upper;
  std::vector<double> var_lower, var_upper;

  int add_variable(double cost, double lower, double upper) {
    objective.push_back(cost);
    var_lower.push_back(lower);
    var_upper.push_back(upper);
    return num_vars++;
  }
  void add_row(std::vector<double> coeffs, double lower, double upper) {
    rows.push_back(std::move(coeffs));
    row_lower.push_back(lower);
    row_upper.push_back(upper);
  }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

/// Two-phase dense simplex with bounded variables. Dantzig pricing with a
/// Bland's-rule fallback after a degenerate streak keeps it exact and
/// cycle-free. Feasibility tolerance 1e-9 on reduced costs and residuals.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace coevrp
