#include "choqroof/simplex.hpp"

#include <cmath>

#include "choqroof/errors.hpp"

namespace choqroof {

namespace {
constexpr double kPivotEps = 1e-10;
}

LpResult solve_feasibility(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                           double tol) {
  const int m = static_cast<int>(A.size());
  if (m == 0) return {LpStatus::feasible, {}};
  const int n = static_cast<int>(A[0].size());
  if (static_cast<int>(b.size()) != m)
    throw ValidationError("simplex: right-hand side length mismatch");

  // Tableau columns: n structural variables then m artificials; basis starts
  // on the artificials, which makes the initial tableau canonical.
  const int cols = n + m;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols, 0.0));
  std::vector<double> rhs(m);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(A[i].size()) != n) throw ValidationError("simplex: ragged matrix");
    const double sign = (b[i] < 0.0) ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t[i][j] = sign * A[i][j];
    rhs[i] = sign * b[i];
    t[i][n + i] = 1.0;
    basis[i] = n + i;
  }

  // Artificials never re-enter once they leave, so the entering scan covers
  // structural columns only. The objective row is recomputed from the basis
  // each iteration instead of being carried through pivots.
  std::vector<double> price(m);
  const long cap = 50L * (n + m);
  for (long iter = 0; iter < cap; ++iter) {
    for (int i = 0; i < m; ++i) price[i] = basis[i] >= n ? 1.0 : 0.0;

    int enter = -1, leave = -1;
    for (int j = 0; j < n; ++j) {
      double r = 0.0;
      for (int i = 0; i < m; ++i) r -= price[i] * t[i][j];
      if (r >= -kPivotEps) continue;
      // Bland: first improving column that admits a pivot row; min ratio,
      // ties broken by smallest basic index.
      int cand = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t[i][j] <= kPivotEps) continue;
        const double ratio = rhs[i] / t[i][j];
        if (cand < 0 || ratio < best_ratio - kPivotEps ||
            (ratio < best_ratio + kPivotEps && basis[i] < basis[cand])) {
          cand = i;
          best_ratio = ratio;
        }
      }
      if (cand < 0) continue;  // column numerically blocked, try the next
      enter = j;
      leave = cand;
      break;
    }

    if (enter < 0) {
      double obj = 0.0;
      for (int i = 0; i < m; ++i)
        if (basis[i] >= n) obj += rhs[i];
      if (obj > tol) return {LpStatus::infeasible, {}};
      LpResult res;
      res.status = LpStatus::feasible;
      res.x.assign(n, 0.0);
      for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = rhs[i];
      return res;
    }

    const double piv = t[leave][enter];
    for (int j = 0; j < cols; ++j) t[leave][j] /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
      rhs[i] -= f * rhs[leave];
      if (rhs[i] < 0.0 && rhs[i] > -1e-12) rhs[i] = 0.0;
    }
    basis[leave] = enter;
  }
  return {LpStatus::iteration_limit, {}};
}

}  // namespace choqroof
