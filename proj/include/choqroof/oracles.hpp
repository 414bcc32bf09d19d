#pragma once

#include <string>

#include "choqroof/functionals.hpp"
#include "choqroof/states.hpp"

namespace choqroof {

/// Closed-form entanglement of formation for a two-qubit state, via the
/// concurrence. `base` sets the entropy logarithm base.
double wootters_eof(const DensityMatrix& omega, double base = 2.0);

/// Concurrence of a two-qubit state.
double concurrence(const DensityMatrix& omega);

struct OracleReport {
  double value = 0.0;
  std::string method;
  int resolution = 0;
  int members = 0;
};

/// Exhaustive-search upper bound on the convex roof of `f` at `rho`.
/// Scans a uniform grid over the isometry angles for decompositions with
/// `members` atoms, then polishes the best grid point by coordinate descent.
/// Only dim <= 2 states and members <= 3 are supported. Values are
/// nonincreasing when the resolution doubles, since the grids nest.
OracleReport brute_force_roof(const StateFunctional& f, const DensityMatrix& rho, int members,
                              int resolution);

}  // namespace choqroof
