#include "choqroof/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "choqroof/errors.hpp"
#include "choqroof/linalg.hpp"

namespace choqroof {

namespace {

Matrix matrix_sqrt_psd(const Matrix& a) {
  const Spectrum s = eigh(a);
  const int d = a.rows();
  Matrix out(d, d);
  for (int k = 0; k < d; ++k) {
    const double lam = std::max(0.0, s.eigenvalues[k]);
    const double f = std::sqrt(lam);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out(i, j) += f * s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
  }
  return out;
}

Matrix spin_flip_pair() {
  Matrix y(2, 2);
  y(0, 1) = Complex(0.0, -1.0);
  y(1, 0) = Complex(0.0, 1.0);
  return tensor(y, y);
}

void golden_min(const std::function<double(double)>& h, double a, double b, int iters,
                double& best_x, double& best_v) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = h(x1);
  double f2 = h(x2);
  auto track = [&](double x, double v) {
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  };
  track(x1, f1);
  track(x2, f2);
  for (int it = 0; it < iters; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = h(x1);
      track(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = h(x2);
      track(x2, f2);
    }
  }
}

}  // namespace

double concurrence(const DensityMatrix& omega) {
  if (omega.dim() != 4) throw ValidationError("concurrence needs a two-qubit state");
  const Matrix& rho = omega.matrix();
  const Matrix yy = spin_flip_pair();
  const Matrix tilde = yy * rho.conjugate() * yy;
  const Matrix sq = matrix_sqrt_psd(rho);
  Matrix r = sq * tilde * sq;
  std::vector<double> mu = eigenvalues_of(r.hermitized());
  std::vector<double> lam(4);
  for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, mu[i]));
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double wootters_eof(const DensityMatrix& omega, double base) {
  const double c = concurrence(omega);
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  const double pair[2] = {x, 1.0 - x};
  return entropy_of_spectrum(pair, base);
}

OracleReport brute_force_roof(const StateFunctional& f, const DensityMatrix& rho, int members,
                              int resolution) {
  if (!f.eval_pure) throw ValidationError("roof oracle needs a pure-state evaluator");
  if (rho.dim() > 2) throw ValidationError("roof oracle supports dimension at most 2");
  if (members < 1 || members > 3) throw ValidationError("roof oracle supports 1 to 3 members");
  if (resolution < 2) throw ValidationError("roof oracle needs resolution at least 2");

  const Spectrum s = eigh(rho.matrix());
  const int d = rho.dim();
  int r = 0;
  for (double lam : s.eigenvalues)
    if (lam > 1e-9) ++r;
  if (r == 0) throw ValidationError("state has no eigenvalue above the rank threshold");
  if (members < r) throw ValidationError("members below the state rank");

  OracleReport report;
  report.resolution = resolution;
  report.members = members;

  std::vector<Complex> unit(d);
  auto pure_eval = [&](const Complex* c, double w) -> double {
    const double inv = 1.0 / std::sqrt(w);
    for (int i = 0; i < d; ++i) unit[i] = inv * c[i];
    const double v = f.eval_pure(unit);
    if (std::isnan(v)) throw UnsupportedInputError("functional returned NaN on a pure state");
    return v;
  };

  if (r == 1) {
    std::vector<Complex> psi(d);
    for (int i = 0; i < d; ++i) psi[i] = s.eigenvectors(i, 0);
    report.value = pure_eval(psi.data(), 1.0);
    report.method = "point-mass";
    return report;
  }

  // r == 2, d == 2 from here on.
  Matrix b(2, 2);
  for (int k = 0; k < 2; ++k) {
    const double fac = std::sqrt(s.eigenvalues[k]);
    for (int i = 0; i < 2; ++i) b(i, k) = fac * s.eigenvectors(i, k);
  }

  std::vector<std::pair<int, int>> planes;
  planes.emplace_back(0, 1);
  if (members == 3) {
    planes.emplace_back(0, 2);
    planes.emplace_back(1, 2);
  }
  const int n_angles = 2 * static_cast<int>(planes.size());

  double steps_total = 1.0;
  for (int a = 0; a < n_angles; ++a) steps_total *= resolution;
  if (steps_total > 1e8) throw ValidationError("grid too large for the member count");

  std::vector<std::vector<Complex>> v(members, std::vector<Complex>(2));
  auto objective = [&](const std::vector<double>& angles) -> double {
    for (int i = 0; i < members; ++i) {
      v[i][0] = (i == 0) ? 1.0 : 0.0;
      v[i][1] = (i == 1) ? 1.0 : 0.0;
    }
    for (size_t pl = 0; pl < planes.size(); ++pl) {
      const auto [p, q] = planes[pl];
      const double ct = std::cos(angles[2 * pl]);
      const double st = std::sin(angles[2 * pl]);
      const double ph = angles[2 * pl + 1];
      const Complex a = st * Complex(std::cos(ph), std::sin(ph));
      for (int col = 0; col < 2; ++col) {
        const Complex xp = v[p][col];
        const Complex xq = v[q][col];
        v[p][col] = ct * xp + a * xq;
        v[q][col] = -std::conj(a) * xp + ct * xq;
      }
    }
    double total = 0.0;
    Complex psi[2];
    for (int i = 0; i < members; ++i) {
      psi[0] = v[i][0] * b(0, 0) + v[i][1] * b(0, 1);
      psi[1] = v[i][0] * b(1, 0) + v[i][1] * b(1, 1);
      const double w = std::norm(psi[0]) + std::norm(psi[1]);
      if (w < 1e-14) continue;
      total += w * pure_eval(psi, w);
    }
    return total;
  };

  const double theta_step = (std::numbers::pi / 2) / resolution;
  const double delta_step = (2 * std::numbers::pi) / resolution;
  std::vector<double> angles(n_angles, 0.0);
  std::vector<double> best_angles(n_angles, 0.0);
  double best = std::numeric_limits<double>::infinity();

  std::function<void(int)> scan = [&](int idx) {
    if (idx == n_angles) {
      const double val = objective(angles);
      if (val < best) {
        best = val;
        best_angles = angles;
      }
      return;
    }
    const double step = (idx % 2 == 0) ? theta_step : delta_step;
    for (int k = 0; k < resolution; ++k) {
      angles[idx] = k * step;
      scan(idx + 1);
    }
  };
  scan(0);

  // Coordinate descent from the best grid point tightens the bound to
  // line-search precision while never rising above the grid value.
  double span_theta = theta_step;
  double span_delta = delta_step;
  for (int round = 0; round < 3; ++round) {
    for (int idx = 0; idx < n_angles; ++idx) {
      const double span = (idx % 2 == 0) ? span_theta : span_delta;
      auto line = [&](double x) {
        std::vector<double> probe = best_angles;
        probe[idx] = x;
        return objective(probe);
      };
      double bx = best_angles[idx];
      golden_min(line, bx - span, bx + span, 36, bx, best);
      best_angles[idx] = bx;
    }
    span_theta *= 1e-3;
    span_delta *= 1e-3;
  }
  best = objective(best_angles);

  report.value = best;
  report.method = "grid+polish";
  return report;
}

}  // namespace choqroof
