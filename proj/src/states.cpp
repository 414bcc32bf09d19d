#include "choqroof/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choqroof/errors.hpp"
#include "choqroof/rng.hpp"

namespace choqroof {

namespace {

/// Min-cost perfect matching on a square cost matrix (Hungarian algorithm
/// with row/column potentials).
double assignment_min_cost(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  double cost = 0.0;
  for (int j = 1; j <= n; ++j) cost += a[match[j] - 1][j - 1];
  return cost;
}

Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cgaussian();
  return g;
}

DensityMatrix state_from_ginibre(int dim, int rank, Rng& rng) {
  const Matrix g = ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= 1.0 / tr;
  return DensityMatrix::unchecked(std::move(rho));
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const Matrix& m) {
  if (!m.square()) throw ValidationError("state matrix is not square");
  const double scale = std::max(1.0, m.max_abs());
  if (!m.is_hermitian(1e-12 * scale))
    throw ValidationError("state matrix is not Hermitian within 1e-12");
  if (std::abs(m.trace().real() - 1.0) > 1e-9 || std::abs(m.trace().imag()) > 1e-9)
    throw ValidationError("state matrix trace differs from 1 by more than 1e-9");
  const Spectrum s = eigh(m);
  const double lam_min = s.eigenvalues.back();
  if (lam_min < -1e-9)
    throw ValidationError("state matrix has eigenvalue below -1e-9, not positive semidefinite");
  DensityMatrix rho;
  if (lam_min >= 0.0) {
    rho.m_ = m.hermitized();
    return rho;
  }
  const int d = m.rows();
  Matrix rebuilt(d, d);
  double tr = 0.0;
  for (int k = 0; k < d; ++k) {
    const double lam = std::max(0.0, s.eigenvalues[k]);
    if (lam == 0.0) continue;
    tr += lam;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        rebuilt(i, j) += lam * s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
  }
  rebuilt *= 1.0 / tr;
  rho.m_ = rebuilt.hermitized();
  return rho;
}

DensityMatrix DensityMatrix::unchecked(Matrix m) {
  DensityMatrix rho;
  rho.m_ = m.hermitized();
  return rho;
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> amplitudes) {
  double n2 = 0.0;
  for (const Complex& c : amplitudes) n2 += std::norm(c);
  if (n2 <= 0.0) throw ValidationError("pure state amplitudes are all zero");
  Matrix p = outer(amplitudes);
  p *= 1.0 / n2;
  return unchecked(std::move(p));
}

void Ensemble::validate() const {
  if (weights.empty() || weights.size() != atoms.size())
    throw ValidationError("ensemble needs matching, nonempty weight and atom lists");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ValidationError("ensemble weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw ValidationError("ensemble weights sum differs from 1 by more than 1e-10");
  const int d = atoms.front().dim();
  for (const DensityMatrix& rho : atoms)
    if (rho.dim() != d) throw ValidationError("ensemble atoms have mixed dimensions");
}

bool is_pure_ensemble(const Ensemble& e) {
  for (const DensityMatrix& rho : e.atoms) {
    const std::vector<double> lam = eigenvalues_of(rho.matrix());
    if (lam.size() > 1 && lam[1] > 1e-9) return false;
  }
  return true;
}

DensityMatrix barycenter(const Ensemble& e) {
  e.validate();
  const int d = e.dim();
  Matrix sum(d, d);
  for (int i = 0; i < e.size(); ++i) {
    Matrix term = e.atoms[i].matrix();
    term *= e.weights[i];
    sum += term;
  }
  return DensityMatrix::unchecked(std::move(sum));
}

Ensemble refine_to_pure(const Ensemble& e) {
  e.validate();
  const int d = e.dim();
  Ensemble out;
  for (int i = 0; i < e.size(); ++i) {
    const Spectrum s = eigh(e.atoms[i].matrix());
    for (int k = 0; k < d; ++k) {
      const double w = e.weights[i] * s.eigenvalues[k];
      if (w < 1e-12) continue;
      std::vector<Complex> col(d);
      for (int r = 0; r < d; ++r) col[r] = s.eigenvectors(r, k);
      out.weights.push_back(w);
      out.atoms.push_back(DensityMatrix::pure(col));
    }
  }
  double sum = 0.0;
  for (double w : out.weights) sum += w;
  for (double& w : out.weights) w /= sum;
  return out;
}

SteerResult steer_barycenter(const Ensemble& e, const DensityMatrix& target) {
  e.validate();
  const int d = e.dim();
  if (target.dim() != d) throw ValidationError("steering target dimension mismatch");
  const DensityMatrix rho0 = barycenter(e);
  const Spectrum s = eigh(rho0.matrix());
  if (s.eigenvalues.back() <= 1e-8)
    throw UnsupportedInputError(
        "steering requires a full-rank barycenter (smallest eigenvalue > 1e-8)");

  Matrix inv_sqrt(d, d);
  for (int k = 0; k < d; ++k) {
    const double f = 1.0 / std::sqrt(s.eigenvalues[k]);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        inv_sqrt(i, j) += f * s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
  }
  const Matrix delta = target.matrix() - rho0.matrix();
  Matrix m = inv_sqrt * delta * inv_sqrt;
  m *= -1.0;
  const double lam_max = eigenvalues_of(m.hermitized()).front();
  const double eps = std::clamp(lam_max, 1e-12, 1.0);

  Matrix tau = rho0.matrix();
  {
    Matrix step = delta;
    step *= 1.0 / eps;
    tau += step;
  }
  const DensityMatrix tau_state = DensityMatrix::unchecked(std::move(tau));

  SteerResult out;
  out.epsilon = eps;
  out.ensemble.weights = e.weights;
  for (const DensityMatrix& rho : e.atoms) {
    Matrix mixed = rho.matrix();
    mixed *= (1.0 - eps);
    Matrix part = tau_state.matrix();
    part *= eps;
    mixed += part;
    out.ensemble.atoms.push_back(DensityMatrix::unchecked(std::move(mixed)));
  }
  return out;
}

DensityMatrix sample_state(int dim, int rank, uint64_t seed) {
  if (dim < 1 || rank < 1 || rank > dim)
    throw ValidationError("sample_state needs 1 <= rank <= dim");
  Rng rng(seed);
  return state_from_ginibre(dim, rank, rng);
}

Ensemble sample_ensemble(int dim, int atoms, uint64_t seed) {
  if (dim < 1 || atoms < 1) throw ValidationError("sample_ensemble needs dim >= 1, atoms >= 1");
  Rng rng(seed);
  Ensemble e;
  double sum = 0.0;
  for (int i = 0; i < atoms; ++i) {
    e.weights.push_back(rng.uniform(0.2, 1.0));
    sum += e.weights.back();
  }
  for (double& w : e.weights) w /= sum;
  for (int i = 0; i < atoms; ++i) e.atoms.push_back(state_from_ginibre(dim, dim, rng));
  return e;
}

double ensemble_distance(const Ensemble& e1, const Ensemble& e2) {
  e1.validate();
  e2.validate();
  if (e1.dim() != e2.dim()) throw ValidationError("ensemble_distance dimension mismatch");
  const int n = e1.size();
  const int m = e2.size();
  const int s = std::max(n, m);
  std::vector<std::vector<double>> cost(s, std::vector<double>(s, 0.0));
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      if (i < n && j < m) {
        const double wi = e1.weights[i];
        const double wj = e2.weights[j];
        cost[i][j] = std::abs(wi - wj) +
                     std::min(wi, wj) * trace_norm(e1.atoms[i].matrix() - e2.atoms[j].matrix());
      } else if (i < n) {
        cost[i][j] = e1.weights[i];
      } else if (j < m) {
        cost[i][j] = e2.weights[j];
      }
    }
  }
  return assignment_min_cost(cost);
}

}  // namespace choqroof
