#include "choqroof/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "choqroof/errors.hpp"
#include "choqroof/linalg.hpp"

namespace choqroof {

namespace {

double inv_log(double base) {
  if (!(base > 1.0)) throw ValidationError("log base must exceed 1");
  return 1.0 / std::log(base);
}

double plogp(double lam, double il) { return (lam > 0.0) ? lam * std::log(lam) * il : 0.0; }

/// H_n from a descending spectrum: -sum_{i<n} lam log lam + s log s.
double hn_value(const double* lam, int len, int n, double il) {
  double s = 0.0;
  double h = 0.0;
  const int top = std::min(n, len);
  for (int i = 0; i < top; ++i) {
    if (lam[i] <= 0.0) break;
    s += lam[i];
    h -= plogp(lam[i], il);
  }
  if (s > 0.0) h += s * std::log(s) * il;
  return h;
}

struct Gram2 {
  double a = 0.0, d = 0.0;
  Complex b = 0.0;
};

/// 2x2 Gram matrix of the dimension-2 tensor side of a bipartite vector.
Gram2 gram2(std::span<const Complex> c, int dA, int dB) {
  Gram2 g;
  if (dA == 2) {
    for (int bb = 0; bb < dB; ++bb) {
      const Complex c0 = c[bb];
      const Complex c1 = c[dB + bb];
      g.a += std::norm(c0);
      g.d += std::norm(c1);
      g.b += c0 * std::conj(c1);
    }
  } else {
    for (int aa = 0; aa < dA; ++aa) {
      const Complex c0 = c[2 * aa];
      const Complex c1 = c[2 * aa + 1];
      g.a += std::norm(c0);
      g.d += std::norm(c1);
      g.b += std::conj(c0) * c1;
    }
  }
  return g;
}

/// Eigenvalues of the smaller-side Gram matrix of a bipartite vector,
/// descending. Both reduced states of a pure state share this spectrum.
std::vector<double> small_side_spectrum(std::span<const Complex> c, int dA, int dB) {
  const int k = std::min(dA, dB);
  if (k == 1) return {1.0};
  if (k == 2) {
    const Gram2 g = gram2(c, dA, dB);
    const auto [l0, l1] = eig2(g.a, g.d, g.b);
    return {l0, l1};
  }
  Matrix g(k, k);
  if (dA <= dB) {
    for (int a1 = 0; a1 < dA; ++a1)
      for (int a2 = 0; a2 < dA; ++a2) {
        Complex s = 0.0;
        for (int bb = 0; bb < dB; ++bb) s += c[a1 * dB + bb] * std::conj(c[a2 * dB + bb]);
        g(a1, a2) = s;
      }
  } else {
    for (int b1 = 0; b1 < dB; ++b1)
      for (int b2 = 0; b2 < dB; ++b2) {
        Complex s = 0.0;
        for (int aa = 0; aa < dA; ++aa) s += std::conj(c[aa * dB + b1]) * c[aa * dB + b2];
        g(b1, b2) = s;
      }
  }
  return eigenvalues_of(g.hermitized());
}

void check_bipartite(int dA, int dB, const char* who) {
  if (dA < 1 || dB < 1) throw ValidationError(std::string(who) + ": tensor dims must be >= 1");
}

double char_fn_g(const CharFnParams& params, const DensityMatrix& rho) {
  switch (params.kind) {
    case CharFnCase::pure_set: {
      if (params.pure_set.empty())
        throw ValidationError("characteristic-set approximator needs a nonempty state list");
      double best = 0.0;
      for (const DensityMatrix& phi : params.pure_set) {
        if (phi.dim() != rho.dim())
          throw ValidationError("characteristic-set state dimension mismatch");
        best = std::max(best, (phi.matrix() * rho.matrix()).trace().real());
      }
      return best;
    }
    case CharFnCase::face: {
      if (!params.projector.square() || params.projector.rows() != rho.dim())
        throw ValidationError("face projector dimension mismatch");
      return (params.projector * rho.matrix()).trace().real();
    }
    case CharFnCase::rank:
      return ky_fan(rho, params.k);
  }
  throw ValidationError("unknown approximator case");
}

}  // namespace

double entropy_of_spectrum(std::span<const double> lambda, double base) {
  const double il = inv_log(base);
  double h = 0.0;
  for (double l : lambda) h -= plogp(l, il);
  return h;
}

double entropy(const DensityMatrix& rho, double base) {
  const std::vector<double> lam = eigenvalues_of(rho.matrix());
  return entropy_of_spectrum(lam, base);
}

double truncated_entropy(const DensityMatrix& omega, int dA, int dB, int n, double base) {
  check_bipartite(dA, dB, "truncated_entropy");
  if (n < 1) throw ValidationError("truncated_entropy needs n >= 1");
  if (omega.dim() != dA * dB) throw ValidationError("truncated_entropy dimension mismatch");
  const Matrix reduced = partial_trace(omega.matrix(), dA, dB, Side::A);
  const std::vector<double> lam = eigenvalues_of(reduced.hermitized());
  return hn_value(lam.data(), static_cast<int>(lam.size()), n, inv_log(base));
}

double ky_fan(const DensityMatrix& rho, int n) {
  if (n < 1 || n > rho.dim()) throw ValidationError("ky_fan needs 1 <= n <= dim");
  const std::vector<double> lam = eigenvalues_of(rho.matrix());
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += lam[i];
  return s;
}

double purity_gap(const DensityMatrix& rho) {
  const std::vector<double> lam = eigenvalues_of(rho.matrix());
  if (lam.size() < 2 || lam[1] <= 1e-9) return 0.0;
  double s = 0.0;
  for (double l : lam) s += l * l;
  return s;
}

double approx_char_fn(const CharFnParams& params, int n, const DensityMatrix& rho) {
  if (n < 1) throw ValidationError("approximator index n must be >= 1");
  double g = std::clamp(char_fn_g(params, rho), 0.0, 1.0);
  if (g >= 1.0 - 1e-12) return 1.0;
  return 1.0 - std::pow(1.0 - g, 1.0 / n);
}

void KrausChannel::validate() const {
  if (input_dim < 1 || output_dim < 1) throw ValidationError("channel dims must be >= 1");
  if (kraus.empty()) throw ValidationError("channel needs at least one Kraus operator");
  Matrix sum(input_dim, input_dim);
  for (const Matrix& k : kraus) {
    if (k.rows() != output_dim || k.cols() != input_dim)
      throw ValidationError("Kraus operator has wrong shape");
    sum += k.adjoint() * k;
  }
  if (max_abs_diff(sum, Matrix::identity(input_dim)) > 1e-9)
    throw ValidationError("Kraus operators are not trace preserving within 1e-9");
}

DensityMatrix apply_channel(const KrausChannel& chan, const DensityMatrix& rho) {
  chan.validate();
  if (rho.dim() != chan.input_dim) throw ValidationError("channel input dimension mismatch");
  Matrix out(chan.output_dim, chan.output_dim);
  for (const Matrix& k : chan.kraus) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix::unchecked(std::move(out));
}

double output_entropy(const KrausChannel& chan, const DensityMatrix& rho, double base) {
  return entropy(apply_channel(chan, rho), base);
}

StateFunctional make_entropy_a(int dA, int dB, double base) {
  check_bipartite(dA, dB, "make_entropy_a");
  const double il = inv_log(base);
  StateFunctional f;
  f.domain = Domain::all_states;
  f.convexity = Convexity::concave;
  f.bounded = true;
  f.eval_pure = [dA, dB, il](std::span<const Complex> c) -> double {
    const int k = std::min(dA, dB);
    if (k == 1) return 0.0;
    if (k == 2) {
      const Gram2 g = gram2(c, dA, dB);
      const auto [l0, l1] = eig2(g.a, g.d, g.b);
      return -plogp(l0, il) - plogp(l1, il);
    }
    const std::vector<double> lam = small_side_spectrum(c, dA, dB);
    double h = 0.0;
    for (double l : lam) h -= plogp(l, il);
    return h;
  };
  f.eval_state = [dA, dB, il](const DensityMatrix& rho) -> double {
    if (rho.dim() != dA * dB) throw ValidationError("entropy_a dimension mismatch");
    const Matrix reduced = partial_trace(rho.matrix(), dA, dB, Side::A);
    const std::vector<double> lam = eigenvalues_of(reduced.hermitized());
    double h = 0.0;
    for (double l : lam) h -= plogp(l, il);
    return h;
  };
  return f;
}

StateFunctional make_truncated_entropy(int dA, int dB, int n, double base) {
  check_bipartite(dA, dB, "make_truncated_entropy");
  if (n < 1) throw ValidationError("truncated entropy needs n >= 1");
  const double il = inv_log(base);
  const double b = base;
  StateFunctional f;
  f.domain = Domain::all_states;
  f.convexity = Convexity::neither;
  f.bounded = true;
  f.eval_pure = [dA, dB, n, il](std::span<const Complex> c) -> double {
    const int k = std::min(dA, dB);
    if (k == 1) return 0.0;
    if (k == 2) {
      const Gram2 g = gram2(c, dA, dB);
      const auto [l0, l1] = eig2(g.a, g.d, g.b);
      const double lam[2] = {l0, l1};
      return hn_value(lam, 2, n, il);
    }
    const std::vector<double> lam = small_side_spectrum(c, dA, dB);
    return hn_value(lam.data(), static_cast<int>(lam.size()), n, il);
  };
  f.eval_state = [dA, dB, n, b](const DensityMatrix& rho) -> double {
    return truncated_entropy(rho, dA, dB, n, b);
  };
  return f;
}

StateFunctional make_ky_fan(int n) {
  if (n < 1) throw ValidationError("ky_fan needs n >= 1");
  StateFunctional f;
  f.domain = Domain::all_states;
  f.convexity = Convexity::convex;
  f.bounded = true;
  f.eval_pure = [n](std::span<const Complex> c) -> double {
    if (n > static_cast<int>(c.size())) throw ValidationError("ky_fan needs 1 <= n <= dim");
    return 1.0;
  };
  f.eval_state = [n](const DensityMatrix& rho) -> double { return ky_fan(rho, n); };
  return f;
}

StateFunctional make_purity_gap() {
  StateFunctional f;
  f.domain = Domain::all_states;
  f.convexity = Convexity::neither;
  f.bounded = true;
  f.eval_pure = [](std::span<const Complex>) -> double { return 0.0; };
  f.eval_state = [](const DensityMatrix& rho) -> double { return purity_gap(rho); };
  return f;
}

StateFunctional make_char_fn(CharFnParams params, int n) {
  if (n < 1) throw ValidationError("approximator index n must be >= 1");
  StateFunctional f;
  f.domain = Domain::all_states;
  f.convexity = Convexity::neither;
  f.bounded = true;
  auto shared = std::make_shared<CharFnParams>(std::move(params));
  f.eval_state = [shared, n](const DensityMatrix& rho) -> double {
    return approx_char_fn(*shared, n, rho);
  };
  f.eval_pure = [shared, n](std::span<const Complex> c) -> double {
    return approx_char_fn(*shared, n, DensityMatrix::pure(c));
  };
  return f;
}

StateFunctional make_channel_entropy(KrausChannel chan, double base) {
  chan.validate();
  const double il = inv_log(base);
  auto shared = std::make_shared<KrausChannel>(std::move(chan));
  StateFunctional f;
  f.domain = Domain::all_states;
  f.convexity = Convexity::concave;
  f.bounded = true;
  f.eval_state = [shared, il](const DensityMatrix& rho) -> double {
    const DensityMatrix out = apply_channel(*shared, rho);
    const std::vector<double> lam = eigenvalues_of(out.matrix());
    double h = 0.0;
    for (double l : lam) h -= plogp(l, il);
    return h;
  };
  f.eval_pure = [f_state = f.eval_state](std::span<const Complex> c) -> double {
    return f_state(DensityMatrix::pure(c));
  };
  return f;
}

StateFunctional make_affine(Matrix a) {
  if (!a.square()) throw ValidationError("affine functional needs a square matrix");
  auto shared = std::make_shared<Matrix>(std::move(a));
  StateFunctional f;
  f.domain = Domain::all_states;
  f.convexity = Convexity::neither;
  f.bounded = true;
  f.eval_pure = [shared](std::span<const Complex> c) -> double {
    const Matrix& m = *shared;
    const int d = m.rows();
    Complex s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += std::conj(c[i]) * m(i, j) * c[j];
    return s.real();
  };
  f.eval_state = [shared](const DensityMatrix& rho) -> double {
    return (*shared * rho.matrix()).trace().real();
  };
  return f;
}

StateFunctional make_quartic(Matrix a) {
  if (!a.square()) throw ValidationError("quartic functional needs a square matrix");
  auto shared = std::make_shared<Matrix>(std::move(a));
  StateFunctional f;
  f.domain = Domain::pure_only;
  f.convexity = Convexity::neither;
  f.bounded = true;
  f.eval_pure = [shared](std::span<const Complex> c) -> double {
    const Matrix& m = *shared;
    const int d = m.rows();
    Complex s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += std::conj(c[i]) * m(i, j) * c[j];
    return s.real() * s.real();
  };
  f.eval_state = nullptr;
  return f;
}

}  // namespace choqroof
