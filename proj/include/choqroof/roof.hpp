#pragma once

#include <cstdint>
#include <vector>

#include "choqroof/functionals.hpp"
#include "choqroof/matrix.hpp"
#include "choqroof/states.hpp"

namespace choqroof {

struct RoofOptions {
  int members = 0;      // decomposition size, 0 picks rank^2
  int restarts = 32;    // random isometry restarts (restart 0 is the eigen-ensemble)
  double tol = 1e-9;    // stop a restart when a full sweep improves less
  uint64_t seed = 0;    // master seed; restart k draws the k-th derived seed
};

enum class BoundDirection { upper, lower };

struct RoofResult {
  double value = 0.0;
  Ensemble ensemble;                   // achieves value; barycenter is the query state
  BoundDirection bound = BoundDirection::upper;
  int restarts = 0;
  uint64_t seed = 0;
  std::vector<double> restart_values;  // best value found by each restart
  bool converged = false;              // winning restart stopped on tol, not on the sweep cap
};

/// Pure-state decomposition of rho induced by an m x r isometry applied to
/// its eigen-ensemble: atoms |psi_i> ~ sum_k V_ik sqrt(lambda_k) |e_k>,
/// weights the squared norms. Rows with weight below 1e-12 are dropped.
/// V must have exactly rank(rho) columns (eigenvalue threshold 1e-9).
Ensemble decomposition_from_isometry(const DensityMatrix& rho, const Matrix& v);

/// Minimizes the ensemble average of f over pure-state decompositions of rho
/// by seeded random isometry restarts plus cyclic two-column Givens descent
/// with golden-section line searches on rotation angle and phase. The value
/// is an upper bound on the true convex roof and never increases when
/// restarts are added under the same seed.
RoofResult convex_roof(const StateFunctional& f, const DensityMatrix& rho,
                       const RoofOptions& opts);

/// Maximizes the ensemble average of f over the family of decompositions
/// with atoms (1-lambda) psi_i + lambda rho, jointly in the decomposition
/// and lambda in [0, 1]. Every member of the family has barycenter rho. The
/// value is a lower bound on the true concave hull; lambda = 1 collapses to
/// the point mass at rho.
RoofResult concave_hull(const StateFunctional& f, const DensityMatrix& rho,
                        const RoofOptions& opts);

/// Entanglement of formation: convex roof of the reduced entropy.
RoofResult eof(const DensityMatrix& omega, int dA, int dB, double base, const RoofOptions& opts);

/// Convex roof of the truncated entropy H_n; n must be at least 2 (H_1 is
/// identically zero).
RoofResult efn(const DensityMatrix& omega, int dA, int dB, int n, double base,
               const RoofOptions& opts);

}  // namespace choqroof
