#include "choqroof/roof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "choqroof/errors.hpp"
#include "choqroof/linalg.hpp"
#include "choqroof/rng.hpp"

namespace choqroof {

namespace {

constexpr double kRankTol = 1e-9;
constexpr double kWeightFloor = 1e-14;
constexpr double kDropTol = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr double kPi = std::numbers::pi;

struct EigenBase {
  int d = 0;
  int r = 0;                   // rank of the query state
  std::vector<double> lambda;  // r leading eigenvalues
  Matrix columns;              // d x r, column k = sqrt(lambda_k) |e_k>
};

EigenBase eigen_base(const DensityMatrix& rho) {
  const Spectrum s = eigh(rho.matrix());
  EigenBase base;
  base.d = rho.dim();
  int r = 0;
  for (double lam : s.eigenvalues)
    if (lam > kRankTol) ++r;
  if (r == 0) throw ValidationError("state has no eigenvalue above the rank threshold");
  base.r = r;
  base.lambda.assign(s.eigenvalues.begin(), s.eigenvalues.begin() + r);
  base.columns = Matrix(base.d, r);
  for (int k = 0; k < r; ++k) {
    const double f = std::sqrt(base.lambda[k]);
    for (int i = 0; i < base.d; ++i) base.columns(i, k) = f * s.eigenvectors(i, k);
  }
  return base;
}

/// Unnormalized atom columns psi_i = sum_k V_ik sqrt(lambda_k) |e_k>,
/// stored column-major, one column per decomposition member.
std::vector<Complex> columns_from_isometry(const EigenBase& base, const Matrix& v) {
  const int m = v.rows();
  std::vector<Complex> psi(static_cast<size_t>(base.d) * m, Complex(0.0));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < base.r; ++k) {
      const Complex c = v(i, k);
      if (c == Complex(0.0)) continue;
      Complex* col = psi.data() + static_cast<size_t>(i) * base.d;
      for (int row = 0; row < base.d; ++row) col[row] += c * base.columns(row, k);
    }
  return psi;
}

std::vector<Complex> eigen_columns(const EigenBase& base, int m) {
  std::vector<Complex> psi(static_cast<size_t>(base.d) * m, Complex(0.0));
  for (int k = 0; k < base.r; ++k) {
    Complex* col = psi.data() + static_cast<size_t>(k) * base.d;
    for (int row = 0; row < base.d; ++row) col[row] = base.columns(row, k);
  }
  return psi;
}

Matrix random_isometry(int m, int r, Rng& rng) {
  while (true) {
    Matrix g(m, r);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < r; ++j) g(i, j) = rng.cgaussian();
    bool ok = true;
    for (int j = 0; j < r && ok; ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k < j; ++k) {
          Complex ip = 0.0;
          for (int i = 0; i < m; ++i) ip += std::conj(g(i, k)) * g(i, j);
          for (int i = 0; i < m; ++i) g(i, j) -= ip * g(i, k);
        }
      double n2 = 0.0;
      for (int i = 0; i < m; ++i) n2 += std::norm(g(i, j));
      if (n2 < 1e-20) {
        ok = false;
        break;
      }
      const double inv = 1.0 / std::sqrt(n2);
      for (int i = 0; i < m; ++i) g(i, j) *= inv;
    }
    if (ok) return g;
  }
}

/// Tracks best point of a 1d function over golden-section probes.
template <class F>
void golden_min(F&& h, double a, double b, int iters, double& best_x, double& best_v) {
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

/// Coordinate descent over pairs of atom columns. Minimizes the sum of
/// colval over columns; colval maps an unnormalized column to its weighted,
/// sign-adjusted objective contribution.
class ColumnProblem {
 public:
  ColumnProblem(int d, int m, std::function<double(std::span<const Complex>)> colval)
      : d_(d), m_(m), colval_(std::move(colval)), w_(m), val_(m), c1_(d), c2_(d) {}

  void reset(std::vector<Complex> psi) {
    psi_ = std::move(psi);
    refresh();
  }

  void refresh() {
    for (int i = 0; i < m_; ++i) recompute(i);
  }

  double total() const {
    double s = 0.0;
    for (double v : val_) s += v;
    return s;
  }

  /// One cyclic pass over all column pairs; returns the total improvement.
  double sweep() {
    double improvement = 0.0;
    for (int i = 0; i < m_ - 1; ++i)
      for (int j = i + 1; j < m_; ++j) improvement += pair_move(i, j);
    return improvement;
  }

  std::vector<Complex> take_columns() { return std::move(psi_); }

 private:
  void recompute(int i) {
    const Complex* c = col(i);
    double w = 0.0;
    for (int k = 0; k < d_; ++k) w += std::norm(c[k]);
    w_[i] = w;
    val_[i] = (w < kWeightFloor) ? 0.0 : colval_({c, static_cast<size_t>(d_)});
  }

  Complex* col(int i) { return psi_.data() + static_cast<size_t>(i) * d_; }
  const Complex* col(int i) const { return psi_.data() + static_cast<size_t>(i) * d_; }

  /// Candidate columns after the unitary pair mix with angle theta, phase phi.
  void mix(const Complex* ci, const Complex* cj, double theta, double phi) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const Complex a = st * Complex(std::cos(phi), std::sin(phi));
    const Complex ac = std::conj(a);
    for (int k = 0; k < d_; ++k) {
      c1_[k] = ct * ci[k] + a * cj[k];
      c2_[k] = -ac * ci[k] + ct * cj[k];
    }
  }

  double eval_scratch() {
    double w1 = 0.0, w2 = 0.0;
    for (int k = 0; k < d_; ++k) {
      w1 += std::norm(c1_[k]);
      w2 += std::norm(c2_[k]);
    }
    double v = 0.0;
    if (w1 >= kWeightFloor) v += colval_({c1_.data(), static_cast<size_t>(d_)});
    if (w2 >= kWeightFloor) v += colval_({c2_.data(), static_cast<size_t>(d_)});
    return v;
  }

  double pair_move(int i, int j) {
    if (w_[i] + w_[j] < 1e-13) return 0.0;
    const Complex* ci = col(i);
    const Complex* cj = col(j);
    const double base = val_[i] + val_[j];

    double best_v = base;
    double best_t = 0.0;
    double best_p = 0.0;
    auto probe = [&](double theta, double phi) -> double {
      mix(ci, cj, theta, phi);
      const double v = eval_scratch();
      if (v < best_v) {
        best_v = v;
        best_t = theta;
        best_p = phi;
      }
      return v;
    };

    static constexpr double kThetas[] = {kPi / 256, kPi / 64,      kPi / 16,
                                         kPi / 8,   3 * kPi / 16,  kPi / 4,
                                         5 * kPi / 16, 3 * kPi / 8, 7 * kPi / 16};
    static constexpr double kPhis[] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
    double grid_v = std::numeric_limits<double>::infinity();
    double grid_t = kThetas[0];
    double grid_p = 0.0;
    for (double phi : kPhis)
      for (double theta : kThetas) {
        const double v = probe(theta, phi);
        if (v < grid_v) {
          grid_v = v;
          grid_t = theta;
          grid_p = phi;
        }
      }

    // Alternating golden refinements around the best grid probe. Negative
    // angles are valid mixes, so brackets may cross zero.
    double t = grid_t, p = grid_p;
    double refine_v = grid_v;
    auto refine_theta = [&](double halfwidth, int iters) {
      golden_min([&](double th) { return probe(th, p); }, t - halfwidth, t + halfwidth, iters,
                 t, refine_v);
    };
    auto refine_phi = [&](double halfwidth, int iters) {
      golden_min([&](double ph) { return probe(t, ph); }, p - halfwidth, p + halfwidth, iters,
                 p, refine_v);
    };
    refine_theta(kPi / 12, 20);
    refine_phi(kPi / 2, 20);
    refine_theta(1e-3, 14);
    refine_phi(5e-3, 14);
    refine_theta(1e-5, 12);

    if (best_v >= base) return 0.0;
    mix(ci, cj, best_t, best_p);
    Complex* wi = col(i);
    Complex* wj = col(j);
    for (int k = 0; k < d_; ++k) {
      wi[k] = c1_[k];
      wj[k] = c2_[k];
    }
    recompute(i);
    recompute(j);
    return base - (val_[i] + val_[j]);
  }

  int d_;
  int m_;
  std::function<double(std::span<const Complex>)> colval_;
  std::vector<Complex> psi_;
  std::vector<double> w_;
  std::vector<double> val_;
  std::vector<Complex> c1_, c2_;
};

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();  // minimized objective
  std::vector<Complex> psi;
  double lambda = 0.0;  // hull mixing parameter
  bool converged = false;
};

int thread_count(int restarts) {
  int cap = 0;
  if (const char* s = std::getenv("CHOQUET_ROOF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 1)
      throw ValidationError("CHOQUET_ROOF_THREADS must be a positive integer");
    cap = static_cast<int>(std::min<long>(v, 256));
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return std::clamp(cap, 1, restarts);
}

/// Runs one job per restart index, possibly across threads. Results and
/// rethrown errors are merged in index order, so scheduling cannot change
/// the outcome.
std::vector<RestartOutcome> run_restarts(int restarts,
                                         const std::function<RestartOutcome(int)>& job) {
  std::vector<RestartOutcome> out(restarts);
  const int threads = thread_count(restarts);
  if (threads <= 1) {
    for (int k = 0; k < restarts; ++k) out[k] = job(k);
    return out;
  }
  std::vector<std::exception_ptr> errors(restarts);
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int k = next.fetch_add(1);
      if (k >= restarts) return;
      try {
        out[k] = job(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (int k = 0; k < restarts; ++k)
    if (errors[k]) std::rethrow_exception(errors[k]);
  return out;
}

void check_options(const RoofOptions& opts) {
  if (opts.restarts < 1) throw ValidationError("restarts must be at least 1");
  if (!(opts.tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (opts.members < 0) throw ValidationError("members must be nonnegative");
}

int pick_members(const RoofOptions& opts, const EigenBase& base) {
  const int m = (opts.members == 0) ? base.r * base.r : opts.members;
  if (m < base.r) throw ValidationError("decomposition members below the state rank");
  return m;
}

int best_index(const std::vector<RestartOutcome>& outs) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(outs.size()); ++k)
    if (outs[k].value < outs[best].value) best = k;
  return best;
}

double checked_pure_eval(const StateFunctional& f, std::span<const Complex> unit) {
  const double v = f.eval_pure(unit);
  if (std::isnan(v)) throw UnsupportedInputError("functional returned NaN on a pure state");
  return v;
}

double checked_state_eval(const StateFunctional& f, const DensityMatrix& rho) {
  const double v = f.eval_state(rho);
  if (std::isnan(v)) throw UnsupportedInputError("functional returned NaN on a state");
  return v;
}

}  // namespace

Ensemble decomposition_from_isometry(const DensityMatrix& rho, const Matrix& v) {
  const EigenBase base = eigen_base(rho);
  if (v.cols() != base.r)
    throw ValidationError("isometry must have exactly rank-of-state columns");
  if (v.rows() < v.cols()) throw ValidationError("isometry needs at least as many rows as columns");
  if (max_abs_diff(v.adjoint() * v, Matrix::identity(base.r)) > 1e-9)
    throw ValidationError("matrix is not an isometry within 1e-9");
  const std::vector<Complex> psi = columns_from_isometry(base, v);
  Ensemble e;
  const int m = v.rows();
  for (int i = 0; i < m; ++i) {
    const std::span<const Complex> col(psi.data() + static_cast<size_t>(i) * base.d,
                                       static_cast<size_t>(base.d));
    double w = 0.0;
    for (const Complex& c : col) w += std::norm(c);
    if (w < kDropTol) continue;
    e.weights.push_back(w);
    e.atoms.push_back(DensityMatrix::pure(col));
  }
  return e;
}

RoofResult convex_roof(const StateFunctional& f, const DensityMatrix& rho,
                       const RoofOptions& opts) {
  if (!f.eval_pure) throw ValidationError("convex roof needs a pure-state evaluator");
  check_options(opts);
  const EigenBase base = eigen_base(rho);
  const int m = pick_members(opts, base);
  const int d = base.d;

  auto colval = [&f, d](std::span<const Complex> c) -> double {
    double w = 0.0;
    for (const Complex& z : c) w += std::norm(z);
    if (w < kWeightFloor) return 0.0;
    static thread_local std::vector<Complex> unit;
    unit.resize(c.size());
    const double inv = 1.0 / std::sqrt(w);
    for (size_t k = 0; k < c.size(); ++k) unit[k] = inv * c[k];
    return w * checked_pure_eval(f, unit);
  };

  std::vector<uint64_t> seeds(opts.restarts);
  SplitMix64 sm(opts.seed);
  for (uint64_t& s : seeds) s = sm.next();

  auto job = [&](int k) -> RestartOutcome {
    std::vector<Complex> psi0;
    if (k == 0) {
      psi0 = eigen_columns(base, m);
    } else {
      Rng rng(seeds[k]);
      psi0 = columns_from_isometry(base, random_isometry(m, base.r, rng));
    }
    ColumnProblem prob(d, m, colval);
    prob.reset(std::move(psi0));
    RestartOutcome out;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      if (prob.sweep() < opts.tol) {
        out.converged = true;
        break;
      }
    }
    out.value = prob.total();
    out.psi = prob.take_columns();
    return out;
  };

  const std::vector<RestartOutcome> outs = run_restarts(opts.restarts, job);
  const int best = best_index(outs);

  RoofResult res;
  res.bound = BoundDirection::upper;
  res.restarts = opts.restarts;
  res.seed = opts.seed;
  res.converged = outs[best].converged;
  for (const RestartOutcome& o : outs) res.restart_values.push_back(o.value);

  std::vector<Complex> unit(d);
  double value = 0.0;
  const std::vector<Complex>& psi = outs[best].psi;
  for (int i = 0; i < m; ++i) {
    const Complex* c = psi.data() + static_cast<size_t>(i) * d;
    double w = 0.0;
    for (int k = 0; k < d; ++k) w += std::norm(c[k]);
    if (w < kDropTol) continue;
    const double inv = 1.0 / std::sqrt(w);
    for (int k = 0; k < d; ++k) unit[k] = inv * c[k];
    value += w * checked_pure_eval(f, unit);
    res.ensemble.weights.push_back(w);
    res.ensemble.atoms.push_back(DensityMatrix::pure(unit));
  }
  res.value = value;
  return res;
}

RoofResult concave_hull(const StateFunctional& f, const DensityMatrix& rho,
                        const RoofOptions& opts) {
  if (!f.eval_state)
    throw ValidationError("concave hull needs a functional defined on mixed states");
  check_options(opts);
  const EigenBase base = eigen_base(rho);
  const int m = pick_members(opts, base);
  const int d = base.d;
  const Matrix& rho_m = rho.matrix();

  std::vector<uint64_t> seeds(opts.restarts);
  SplitMix64 sm(opts.seed);
  for (uint64_t& s : seeds) s = sm.next();

  auto job = [&](int k) -> RestartOutcome {
    double lambda = 0.0;
    std::vector<Complex> unit(d);
    // Maximization runs through the shared minimizer with flipped sign.
    auto colval = [&](std::span<const Complex> c) -> double {
      double w = 0.0;
      for (const Complex& z : c) w += std::norm(z);
      if (w < kWeightFloor) return 0.0;
      const double inv = 1.0 / std::sqrt(w);
      for (int i = 0; i < d; ++i) unit[i] = inv * c[i];
      Matrix mixed = outer(unit);
      mixed *= (1.0 - lambda);
      Matrix part = rho_m;
      part *= lambda;
      mixed += part;
      return -w * checked_state_eval(f, DensityMatrix::unchecked(std::move(mixed)));
    };

    std::vector<Complex> psi0;
    if (k == 0) {
      psi0 = eigen_columns(base, m);
    } else {
      Rng rng(seeds[k]);
      psi0 = columns_from_isometry(base, random_isometry(m, base.r, rng));
    }
    ColumnProblem prob(d, m, colval);
    prob.reset(std::move(psi0));

    auto lambda_improve = [&]() -> double {
      const double before = prob.total();
      static constexpr double kGrid[] = {0.0,  1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.03, 0.1,
                                         0.2,  0.35, 0.5,  0.65, 0.8,  0.9,  1.0};
      auto at = [&](double lam) {
        lambda = lam;
        prob.refresh();
        return prob.total();
      };
      double best_l = lambda;
      double best_v = before;
      for (double lam : kGrid) {
        const double v = at(lam);
        if (v < best_v) {
          best_v = v;
          best_l = lam;
        }
      }
      double lo = 0.0, hi = 1.0;
      for (double lam : kGrid) {
        if (lam < best_l) lo = std::max(lo, lam);
        if (lam > best_l) hi = std::min(hi, lam);
      }
      golden_min(at, lo, hi, 30, best_l, best_v);
      at(best_l);
      return before - prob.total();
    };

    RestartOutcome out;
    for (int outer = 0; outer < kMaxSweeps; ++outer) {
      double imp = lambda_improve();
      imp += prob.sweep();
      if (imp < opts.tol) {
        out.converged = true;
        break;
      }
    }
    out.value = prob.total();
    out.lambda = lambda;
    out.psi = prob.take_columns();
    return out;
  };

  const std::vector<RestartOutcome> outs = run_restarts(opts.restarts, job);
  const int best = best_index(outs);

  RoofResult res;
  res.bound = BoundDirection::lower;
  res.restarts = opts.restarts;
  res.seed = opts.seed;
  res.converged = outs[best].converged;
  for (const RestartOutcome& o : outs) res.restart_values.push_back(-o.value);

  const double lambda = outs[best].lambda;
  if (lambda >= 1.0 - 1e-12) {
    res.ensemble.weights.push_back(1.0);
    res.ensemble.atoms.push_back(rho);
    res.value = checked_state_eval(f, rho);
    return res;
  }

  std::vector<Complex> unit(d);
  double value = 0.0;
  const std::vector<Complex>& psi = outs[best].psi;
  for (int i = 0; i < m; ++i) {
    const Complex* c = psi.data() + static_cast<size_t>(i) * d;
    double w = 0.0;
    for (int k = 0; k < d; ++k) w += std::norm(c[k]);
    if (w < kDropTol) continue;
    const double inv = 1.0 / std::sqrt(w);
    for (int k = 0; k < d; ++k) unit[k] = inv * c[k];
    Matrix mixed = outer(unit);
    mixed *= (1.0 - lambda);
    Matrix part = rho_m;
    part *= lambda;
    mixed += part;
    const DensityMatrix atom = DensityMatrix::unchecked(std::move(mixed));
    value += w * checked_state_eval(f, atom);
    res.ensemble.weights.push_back(w);
    res.ensemble.atoms.push_back(atom);
  }
  res.value = value;
  return res;
}

RoofResult eof(const DensityMatrix& omega, int dA, int dB, double base, const RoofOptions& opts) {
  if (dA < 1 || dB < 1 || omega.dim() != dA * dB)
    throw ValidationError("bipartite dims do not factor the state dimension");
  return convex_roof(make_entropy_a(dA, dB, base), omega, opts);
}

RoofResult efn(const DensityMatrix& omega, int dA, int dB, int n, double base,
               const RoofOptions& opts) {
  if (n < 2) throw ValidationError("truncated-entropy roof needs n >= 2");
  if (dA < 1 || dB < 1 || omega.dim() != dA * dB)
    throw ValidationError("bipartite dims do not factor the state dimension");
  return convex_roof(make_truncated_entropy(dA, dB, n, base), omega, opts);
}

}  // namespace choqroof
