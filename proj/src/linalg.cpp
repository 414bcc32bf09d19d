#include "choqroof/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "choqroof/errors.hpp"

namespace choqroof {

namespace {

double offdiag_norm(const Matrix& a) {
  const int d = a.rows();
  double s = 0.0;
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      if (p != q) s += std::norm(a(p, q));
  return std::sqrt(s);
}

void check_hermitian(const Matrix& h, const char* who) {
  if (!h.square()) throw ValidationError(std::string(who) + ": matrix is not square");
  const double tol = 1e-12 * std::max(1.0, h.max_abs());
  if (!h.is_hermitian(tol))
    throw ValidationError(std::string(who) + ": matrix is not Hermitian within 1e-12");
}

/// One cyclic Jacobi pass over all (p, q) pivots of the Hermitian matrix a;
/// v, when present, accumulates the rotations.
void jacobi_sweep(Matrix& a, Matrix* v) {
  const int d = a.rows();
  for (int p = 0; p < d - 1; ++p) {
    for (int q = p + 1; q < d; ++q) {
      const Complex b = a(p, q);
      const double ab = std::abs(b);
      if (ab < 1e-300) {
        a(p, q) = a(q, p) = 0.0;
        continue;
      }
      const Complex u = b / ab;  // e^{i alpha}
      const double app = a(p, p).real();
      const double aqq = a(q, q).real();
      const double tau = (aqq - app) / (2.0 * ab);
      // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
      const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      const Complex su = s * u;
      const Complex suc = s * std::conj(u);

      for (int k = 0; k < d; ++k) {
        if (k == p || k == q) continue;
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp + suc * akq;
        a(k, q) = -su * akp + c * akq;
        a(p, k) = std::conj(a(k, p));
        a(q, k) = std::conj(a(k, q));
      }
      const double npp = c * c * app + 2.0 * s * c * ab + s * s * aqq;
      const double nqq = s * s * app + c * c * aqq - 2.0 * s * c * ab;
      a(p, p) = npp;
      a(q, q) = nqq;
      a(p, q) = a(q, p) = 0.0;

      if (v) {
        for (int k = 0; k < d; ++k) {
          const Complex vkp = (*v)(k, p);
          const Complex vkq = (*v)(k, q);
          (*v)(k, p) = c * vkp + suc * vkq;
          (*v)(k, q) = -su * vkp + c * vkq;
        }
      }
    }
  }
}

std::vector<double> sorted_diag(const Matrix& a, Matrix* vectors_out, const Matrix* v) {
  const int d = a.rows();
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  std::vector<double> vals(d);
  for (int j = 0; j < d; ++j) vals[j] = a(idx[j], idx[j]).real();
  if (vectors_out && v) {
    Matrix out(d, d);
    for (int j = 0; j < d; ++j) {
      int best = 0;
      double bestmod = -1.0;
      for (int k = 0; k < d; ++k) {
        const double m = std::abs((*v)(k, idx[j]));
        if (m > bestmod) {
          bestmod = m;
          best = k;
        }
      }
      Complex phase = (*v)(best, idx[j]);
      const double m = std::abs(phase);
      phase = (m > 0.0) ? std::conj(phase) / m : Complex(1.0, 0.0);
      for (int k = 0; k < d; ++k) out(k, j) = phase * (*v)(k, idx[j]);
    }
    *vectors_out = std::move(out);
  }
  return vals;
}

}  // namespace

Spectrum eigh(const Matrix& H) {
  check_hermitian(H, "eigh");
  const int d = H.rows();
  Matrix a = H.hermitized();
  Matrix v = Matrix::identity(d);
  const double thresh = 1e-12 * std::max(1.0, a.frobenius_norm());
  for (int sweep = 0; sweep < 100 && offdiag_norm(a) > thresh; ++sweep) jacobi_sweep(a, &v);
  Spectrum s;
  s.eigenvalues = sorted_diag(a, &s.eigenvectors, &v);
  return s;
}

std::vector<double> eigenvalues_of(const Matrix& H) {
  check_hermitian(H, "eigenvalues");
  const int d = H.rows();
  if (d == 1) return {H(0, 0).real()};
  if (d == 2) {
    const auto [hi, lo] = eig2(H(0, 0).real(), H(1, 1).real(), H(0, 1));
    return {hi, lo};
  }
  Matrix a = H.hermitized();
  const double thresh = 1e-12 * std::max(1.0, a.frobenius_norm());
  for (int sweep = 0; sweep < 100 && offdiag_norm(a) > thresh; ++sweep) jacobi_sweep(a, nullptr);
  return sorted_diag(a, nullptr, nullptr);
}

std::pair<double, double> eig2(double a, double d, Complex b) {
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(b));
  return {mean + r, mean - r};
}

double trace_norm(const Matrix& A) {
  double s = 0.0;
  for (double lam : eigenvalues_of(A)) s += std::abs(lam);
  return s;
}

double op_norm(const Matrix& A) {
  double s = 0.0;
  for (double lam : eigenvalues_of(A)) s = std::max(s, std::abs(lam));
  return s;
}

Matrix partial_trace(const Matrix& W, int dA, int dB, Side keep) {
  if (dA < 1 || dB < 1 || !W.square() || W.rows() != dA * dB)
    throw ValidationError("partial_trace: dimensions do not factor the matrix");
  if (keep == Side::A) {
    Matrix r(dA, dA);
    for (int a = 0; a < dA; ++a)
      for (int a2 = 0; a2 < dA; ++a2) {
        Complex s = 0.0;
        for (int b = 0; b < dB; ++b) s += W(a * dB + b, a2 * dB + b);
        r(a, a2) = s;
      }
    return r;
  }
  Matrix r(dB, dB);
  for (int b = 0; b < dB; ++b)
    for (int b2 = 0; b2 < dB; ++b2) {
      Complex s = 0.0;
      for (int a = 0; a < dA; ++a) s += W(a * dB + b, a * dB + b2);
      r(b, b2) = s;
    }
  return r;
}

}  // namespace choqroof
