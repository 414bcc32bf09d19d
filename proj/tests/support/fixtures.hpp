#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "choqroof/linalg.hpp"
#include "choqroof/matrix.hpp"
#include "choqroof/rng.hpp"
#include "choqroof/states.hpp"

namespace fixtures {

using choqroof::Complex;
using choqroof::DensityMatrix;
using choqroof::Ensemble;
using choqroof::Matrix;
using choqroof::Rng;

inline DensityMatrix bell() {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> amp = {s, 0.0, 0.0, s};
  return DensityMatrix::pure(amp);
}

inline DensityMatrix werner(double p) {
  Matrix m = Matrix::identity(4);
  m *= (1.0 - p) / 4.0;
  Matrix phi = bell().matrix();
  phi *= p;
  m += phi;
  return DensityMatrix::from_matrix(m);
}

inline DensityMatrix diag_state(const std::vector<double>& lam) {
  const int d = static_cast<int>(lam.size());
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = lam[i];
  return DensityMatrix::from_matrix(m);
}

inline DensityMatrix basis_state(int d, int k) {
  std::vector<Complex> amp(d, Complex(0.0));
  amp[k] = 1.0;
  return DensityMatrix::pure(amp);
}

inline Matrix random_hermitian(int d, Rng& rng) {
  Matrix h(d, d);
  for (int i = 0; i < d; ++i) {
    h(i, i) = rng.gaussian();
    for (int j = i + 1; j < d; ++j) {
      const Complex z = rng.cgaussian() / std::sqrt(2.0);
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

inline Matrix random_unitary(int d, Rng& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgaussian();
  for (int j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) {
        Complex ip = 0.0;
        for (int i = 0; i < d; ++i) ip += std::conj(g(i, k)) * g(i, j);
        for (int i = 0; i < d; ++i) g(i, j) -= ip * g(i, k);
      }
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) n2 += std::norm(g(i, j));
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < d; ++i) g(i, j) *= inv;
  }
  return g;
}

inline std::vector<Complex> random_pure_amplitudes(int d, Rng& rng) {
  std::vector<Complex> amp(d);
  double n2 = 0.0;
  for (Complex& a : amp) {
    a = rng.cgaussian();
    n2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& a : amp) a *= inv;
  return amp;
}

inline DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::from_matrix(tensor(a.matrix(), b.matrix()));
}

/// Pure d x d bipartite state whose keep-A reduced state has the given
/// spectrum: sum_k sqrt(lam_k) |k>|k>.
inline DensityMatrix purification(const std::vector<double>& lam) {
  const int d = static_cast<int>(lam.size());
  std::vector<Complex> amp(static_cast<size_t>(d) * d, Complex(0.0));
  for (int k = 0; k < d; ++k) amp[k * d + k] = std::sqrt(lam[k]);
  return DensityMatrix::pure(amp);
}

inline DensityMatrix random_pure_bipartite(int dA, int dB, uint64_t seed) {
  Rng rng(seed);
  return DensityMatrix::pure(random_pure_amplitudes(dA * dB, rng));
}

/// Mixture of random product pure states on 2x2; separable by construction.
inline DensityMatrix separable_2x2(uint64_t seed, int terms = 4) {
  Rng rng(seed);
  Matrix m(4, 4);
  std::vector<double> w(terms);
  double sum = 0.0;
  for (double& x : w) {
    x = rng.uniform(0.2, 1.0);
    sum += x;
  }
  for (int t = 0; t < terms; ++t) {
    const std::vector<Complex> a = random_pure_amplitudes(2, rng);
    const std::vector<Complex> b = random_pure_amplitudes(2, rng);
    std::vector<Complex> amp(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) amp[2 * i + j] = a[i] * b[j];
    Matrix proj = choqroof::outer(amp);
    proj *= w[t] / sum;
    m += proj;
  }
  return DensityMatrix::from_matrix(m);
}

}  // namespace fixtures
