#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "choqroof/matrix.hpp"
#include "choqroof/states.hpp"

namespace choqroof {

/// Row-stochastic dilation certificate for mu > nu in the convex order.
/// Rows follow the atoms of nu, columns the atoms of mu.
struct TransitionPlan {
  std::vector<std::vector<double>> t;
};

enum class OrderStatus { dominates, not_dominates, ambiguous };

/// A sampled convex function f(rho) = max_j (Re tr(A_j rho) + b_j) whose
/// ensemble averages violate the order, together with those averages.
struct ConvexWitness {
  std::vector<Matrix> slopes;
  std::vector<double> offsets;
  double mu_average = 0.0;
  double nu_average = 0.0;
};

struct OrderVerdict {
  OrderStatus status = OrderStatus::ambiguous;
  std::optional<TransitionPlan> plan;       // present when status == dominates
  std::optional<ConvexWitness> violation;   // present for some not-dominates verdicts
};

/// Decides mu > nu (Choquet order) for finite ensembles. Barycenters are
/// prescreened for equality within 1e-7; the order itself is decided by
/// phase-1 simplex feasibility of the dilation constraints, expanded in a
/// fixed orthonormal Hermitian basis.
OrderVerdict check_dominates(const Ensemble& mu, const Ensemble& nu);

struct RankAtMost {
  int n;
};
struct SupportWithin {
  Matrix projector;
};
struct MemberOfPureList {
  std::vector<DensityMatrix> states;
};
using MassPredicate = std::variant<RankAtMost, SupportWithin, MemberOfPureList>;

/// Total weight of the atoms satisfying the predicate. Rank uses eigenvalue
/// threshold 1e-9; support containment means tr((I-P) rho) <= 1e-9; list
/// membership means trace-norm distance <= 1e-8 to some listed state.
double mass_on(const Ensemble& e, const MassPredicate& pred);

struct NecessaryTestResult {
  bool consistent = true;
  std::optional<ConvexWitness> witness;
};

/// Samples random convex piecewise-affine functions (at most 5 pieces) and
/// checks the defining inequality of the order on each; any violation is a
/// certificate that mu does not dominate nu.
NecessaryTestResult order_necessary_test(const Ensemble& mu, const Ensemble& nu, int trials,
                                         uint64_t seed);

/// Orthonormal Hermitian basis of d x d matrices in the fixed order: all
/// E_kk, then (E_kl+E_lk)/sqrt2 for k<l, then i(E_kl-E_lk)/sqrt2 for k<l.
std::vector<Matrix> hermitian_basis(int d);

/// Coordinates of a Hermitian matrix in hermitian_basis(d), as d*d reals.
std::vector<double> hermitian_coords(const Matrix& h);

}  // namespace choqroof
