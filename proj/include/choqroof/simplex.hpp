#pragma once

#include <vector>

namespace choqroof {

enum class LpStatus { feasible, infeasible, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;  // filled when feasible
};

/// Decides whether {x >= 0 : Ax = b} is nonempty with a phase-1 simplex
/// using Bland's pivoting rule. A is dense, row-major, m rows by n columns.
/// Feasible means the artificial objective ends below tol. The iteration cap
/// is 10 * (n + m); hitting it yields LpStatus::iteration_limit.
LpResult solve_feasibility(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                           double tol);

}  // namespace choqroof
