#include "choqroof/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choqroof/errors.hpp"
#include "choqroof/rng.hpp"
#include "choqroof/simplex.hpp"

namespace choqroof {

namespace {

constexpr double kBarycenterTol = 1e-7;
// total L1 infeasibility allowed at the phase-1 optimum; roundoff parks
// about 1e-9 on each zero-level artificial and these LPs carry dozens
constexpr double kLpTol = 1e-7;

Matrix random_hermitian(int d, Rng& rng) {
  Matrix h(d, d);
  for (int k = 0; k < d; ++k) h(k, k) = rng.gaussian();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      const Complex z = rng.cgaussian() * inv_sqrt2;
      h(k, l) = z;
      h(l, k) = std::conj(z);
    }
  return h;
}

double affine_eval(const Matrix& slope, double offset, const Matrix& rho) {
  return (slope * rho).trace().real() + offset;
}

double ensemble_average(const ConvexWitness& w, const Ensemble& e) {
  double total = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < w.slopes.size(); ++j)
      best = std::max(best, affine_eval(w.slopes[j], w.offsets[j], e.atoms[i].matrix()));
    total += e.weights[i] * best;
  }
  return total;
}

}  // namespace

std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(d) * d);
  for (int k = 0; k < d; ++k) {
    Matrix b(d, d);
    b(k, k) = 1.0;
    basis.push_back(std::move(b));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      Matrix b(d, d);
      b(k, l) = inv_sqrt2;
      b(l, k) = inv_sqrt2;
      basis.push_back(std::move(b));
    }
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      Matrix b(d, d);
      b(k, l) = Complex(0.0, inv_sqrt2);
      b(l, k) = Complex(0.0, -inv_sqrt2);
      basis.push_back(std::move(b));
    }
  return basis;
}

std::vector<double> hermitian_coords(const Matrix& h) {
  const int d = h.rows();
  std::vector<double> c;
  c.reserve(static_cast<size_t>(d) * d);
  for (int k = 0; k < d; ++k) c.push_back(h(k, k).real());
  const double sqrt2 = std::sqrt(2.0);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) c.push_back(sqrt2 * h(k, l).real());
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) c.push_back(sqrt2 * h(k, l).imag());
  return c;
}

OrderVerdict check_dominates(const Ensemble& mu, const Ensemble& nu) {
  mu.validate();
  nu.validate();
  if (mu.dim() != nu.dim()) throw ValidationError("check_dominates dimension mismatch");
  const int d = mu.dim();

  const Matrix bary_mu = barycenter(mu).matrix();
  const Matrix bary_nu = barycenter(nu).matrix();
  if (max_abs_diff(bary_mu, bary_nu) > kBarycenterTol) {
    // Unequal barycenters: some affine function already separates them.
    OrderVerdict v;
    v.status = OrderStatus::not_dominates;
    ConvexWitness w;
    Matrix diff = bary_nu - bary_mu;
    w.slopes.push_back(std::move(diff));
    w.offsets.push_back(0.0);
    w.mu_average = ensemble_average(w, mu);
    w.nu_average = ensemble_average(w, nu);
    v.violation = std::move(w);
    return v;
  }

  const int nm = mu.size();
  const int nn = nu.size();
  const int nvars = nn * nm;
  auto var = [nm](int i, int j) { return i * nm + j; };

  std::vector<std::vector<double>> mu_coords(nm);
  for (int j = 0; j < nm; ++j) mu_coords[j] = hermitian_coords(mu.atoms[j].matrix());

  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (int i = 0; i < nn; ++i) {  // each nu atom is a mu-barycenter
    std::vector<double> row(nvars, 0.0);
    for (int j = 0; j < nm; ++j) row[var(i, j)] = 1.0;
    A.push_back(std::move(row));
    b.push_back(1.0);

    const std::vector<double> target = hermitian_coords(nu.atoms[i].matrix());
    for (int k = 0; k < d * d; ++k) {
      std::vector<double> crow(nvars, 0.0);
      for (int j = 0; j < nm; ++j) crow[var(i, j)] = mu_coords[j][k];
      A.push_back(std::move(crow));
      b.push_back(target[k]);
    }
  }
  for (int j = 0; j < nm; ++j) {  // marginal of the joint weights is mu
    std::vector<double> row(nvars, 0.0);
    for (int i = 0; i < nn; ++i) row[var(i, j)] = nu.weights[i];
    A.push_back(std::move(row));
    b.push_back(mu.weights[j]);
  }

  const LpResult lp = solve_feasibility(A, b, kLpTol);
  OrderVerdict v;
  if (lp.status == LpStatus::iteration_limit) {
    v.status = OrderStatus::ambiguous;
    return v;
  }
  if (lp.status == LpStatus::infeasible) {
    v.status = OrderStatus::not_dominates;
    return v;
  }
  TransitionPlan plan;
  plan.t.assign(nn, std::vector<double>(nm, 0.0));
  for (int i = 0; i < nn; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < nm; ++j) {
      plan.t[i][j] = std::max(0.0, lp.x[var(i, j)]);
      row_sum += plan.t[i][j];
    }
    if (row_sum > 0.0)
      for (int j = 0; j < nm; ++j) plan.t[i][j] /= row_sum;
  }
  v.status = OrderStatus::dominates;
  v.plan = std::move(plan);
  return v;
}

double mass_on(const Ensemble& e, const MassPredicate& pred) {
  e.validate();
  const int d = e.dim();
  if (const auto* sup = std::get_if<SupportWithin>(&pred)) {
    if (!sup->projector.square() || sup->projector.rows() != d)
      throw ValidationError("mass_on projector dimension mismatch");
  } else if (const auto* mem = std::get_if<MemberOfPureList>(&pred)) {
    for (const DensityMatrix& s : mem->states)
      if (s.dim() != d) throw ValidationError("mass_on pure list dimension mismatch");
  }

  double total = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    const Matrix& rho = e.atoms[i].matrix();
    bool hit = false;
    if (const auto* rank = std::get_if<RankAtMost>(&pred)) {
      int r = 0;
      for (double lam : eigenvalues_of(rho))
        if (lam > 1e-9) ++r;
      hit = r <= rank->n;
    } else if (const auto* sup = std::get_if<SupportWithin>(&pred)) {
      const Matrix complement = Matrix::identity(d) - sup->projector;
      hit = (complement * rho).trace().real() <= 1e-9;
    } else if (const auto* mem = std::get_if<MemberOfPureList>(&pred)) {
      for (const DensityMatrix& s : mem->states) {
        if (trace_norm(rho - s.matrix()) <= 1e-8) {
          hit = true;
          break;
        }
      }
    }
    if (hit) total += e.weights[i];
  }
  return total;
}

NecessaryTestResult order_necessary_test(const Ensemble& mu, const Ensemble& nu, int trials,
                                         uint64_t seed) {
  mu.validate();
  nu.validate();
  if (mu.dim() != nu.dim()) throw ValidationError("order_necessary_test dimension mismatch");
  const int d = mu.dim();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    ConvexWitness w;
    const int pieces = 1 + static_cast<int>(rng.below(5));
    for (int j = 0; j < pieces; ++j) {
      w.slopes.push_back(random_hermitian(d, rng));
      w.offsets.push_back(rng.gaussian());
    }
    w.mu_average = ensemble_average(w, mu);
    w.nu_average = ensemble_average(w, nu);
    if (w.mu_average < w.nu_average - 1e-9) {
      NecessaryTestResult res;
      res.consistent = false;
      res.witness = std::move(w);
      return res;
    }
  }
  return {};
}

}  // namespace choqroof
