#pragma once

#include <utility>
#include <vector>

#include "choqroof/matrix.hpp"

namespace choqroof {

/// Which tensor factor survives a partial trace.
enum class Side { A, B };

struct Spectrum {
  std::vector<double> eigenvalues;  // sorted descending
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations (off-diagonal tolerance 1e-12, at most 100 sweeps). Output is
/// deterministic: fixed sweep order, descending eigenvalues, and each
/// eigenvector phased so its largest-modulus entry is real nonnegative.
Spectrum eigh(const Matrix& H);

/// Descending eigenvalues without accumulating eigenvectors.
std::vector<double> eigenvalues_of(const Matrix& H);

/// Eigenvalues of [[a, b], [conj(b), d]] with a, d real, returned descending.
std::pair<double, double> eig2(double a, double d, Complex b);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& A);

/// Largest absolute eigenvalue of a Hermitian matrix.
double op_norm(const Matrix& A);

/// Traces out one tensor factor of a (dA*dB)x(dA*dB) matrix.
Matrix partial_trace(const Matrix& W, int dA, int dB, Side keep);

}  // namespace choqroof
