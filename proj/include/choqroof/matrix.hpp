#pragma once

#include <complex>
#include <span>
#include <vector>

namespace choqroof {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage. The workhorse for everything in
/// this project; dimensions stay small (d <= 64) so all operations are plain
/// loops.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Matrix identity(int d);
  /// Builds a matrix from nested row data (convenient in tests).
  static Matrix from_rows(const std::vector<std::vector<Complex>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  Complex operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  std::span<Complex> data() { return a_; }
  std::span<const Complex> data() const { return a_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;
  Complex trace() const;

  double frobenius_norm() const;
  /// Largest entry modulus.
  double max_abs() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(Complex s);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

  bool is_hermitian(double tol) const;
  /// (A + A^dagger)/2; removes accumulated asymmetry before eigensolves.
  Matrix hermitized() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> a_;
};

/// Kronecker product a (x) b.
Matrix tensor(const Matrix& a, const Matrix& b);

/// Rank-1 projector v v^dagger from a column vector.
Matrix outer(std::span<const Complex> v);

/// max |a_ij - b_ij|.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace choqroof
