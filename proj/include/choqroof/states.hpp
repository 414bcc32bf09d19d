#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "choqroof/linalg.hpp"
#include "choqroof/matrix.hpp"

namespace choqroof {

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Validates hermiticity, trace 1 within 1e-9 and positivity. Eigenvalues
  /// in (-1e-9, 0) are clipped to zero and the trace renormalized; anything
  /// more negative is rejected.
  static DensityMatrix from_matrix(const Matrix& m);

  /// Wraps a matrix known valid by construction (convex combinations,
  /// normalized projectors, ...). Symmetrizes but skips the eigensolve.
  static DensityMatrix unchecked(Matrix m);

  /// Normalized rank-1 state from an amplitude vector.
  static DensityMatrix pure(std::span<const Complex> amplitudes);

  int dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

/// Finitely supported probability measure on states.
struct Ensemble {
  std::vector<double> weights;
  std::vector<DensityMatrix> atoms;

  int size() const { return static_cast<int>(weights.size()); }
  int dim() const { return atoms.empty() ? 0 : atoms.front().dim(); }

  /// Throws ValidationError unless weights are positive, sum to 1 within
  /// 1e-10 and all atoms share one dimension.
  void validate() const;
};

/// True when every atom has second eigenvalue at most 1e-9.
bool is_pure_ensemble(const Ensemble& e);

DensityMatrix barycenter(const Ensemble& e);

/// Splits each atom into its eigen-decomposition, giving an ensemble of pure
/// states with the same barycenter. Weights below 1e-12 are dropped and the
/// rest renormalized.
Ensemble refine_to_pure(const Ensemble& e);

struct SteerResult {
  Ensemble ensemble;
  double epsilon;
};

/// Moves the barycenter of e exactly onto target by mixing every atom with a
/// single shared state tau = rho0 + (target - rho0)/eps, where eps is the
/// smallest mixing weight keeping tau positive (clamped to [1e-12, 1]).
/// Requires a full-rank barycenter (smallest eigenvalue > 1e-8).
SteerResult steer_barycenter(const Ensemble& e, const DensityMatrix& target);

/// Deterministic random state of the requested rank (Ginibre construction).
DensityMatrix sample_state(int dim, int rank, uint64_t seed);

/// Deterministic random ensemble with full-rank atoms.
Ensemble sample_ensemble(int dim, int atoms, uint64_t seed);

/// Minimum over padded atom matchings of
///   sum |pi_i - pi'_i| + sum min(pi_i, pi'_i) * ||rho_i - rho'_i||_1.
/// Zero exactly when the ensembles agree up to atom permutation.
double ensemble_distance(const Ensemble& e1, const Ensemble& e2);

}  // namespace choqroof
