#pragma once

#include <functional>
#include <span>
#include <vector>

#include "choqroof/matrix.hpp"
#include "choqroof/states.hpp"

namespace choqroof {

enum class Convexity { convex, concave, neither };
enum class Domain { all_states, pure_only };

/// A scalar function on states. eval_pure takes a unit amplitude vector and
/// is the path the roof optimizer hammers; eval_state covers mixed states
/// and is absent for functionals defined on pure states only.
struct StateFunctional {
  Domain domain = Domain::all_states;
  Convexity convexity = Convexity::neither;
  bool bounded = true;
  std::function<double(std::span<const Complex>)> eval_pure;
  std::function<double(const DensityMatrix&)> eval_state;
};

/// Von Neumann entropy, -sum lambda log lambda with 0 log 0 = 0.
double entropy(const DensityMatrix& rho, double base);
double entropy_of_spectrum(std::span<const double> lambda, double base);

/// Truncated entropy of a bipartite state: with lambda the descending
/// eigenvalues of the keep-A reduced state and s their partial sum over the
/// top n, the value is -sum_{i<=n} lambda_i log lambda_i + s log s.
double truncated_entropy(const DensityMatrix& omega, int dA, int dB, int n, double base);

/// Sum of the n largest eigenvalues.
double ky_fan(const DensityMatrix& rho, int n);

/// tr rho^2 for mixed states, 0 for pure (second eigenvalue <= 1e-9).
double purity_gap(const DensityMatrix& rho);

enum class CharFnCase { pure_set, face, rank };

struct CharFnParams {
  CharFnCase kind = CharFnCase::rank;
  std::vector<DensityMatrix> pure_set;  // pure_set: g = max_i tr(rho phi_i)
  Matrix projector;                     // face: g = tr(P0 rho)
  int k = 1;                            // rank: g = Ky Fan k-sum
};

/// Approximator f_n(rho) = 1 - (1 - g(rho))^(1/n) of the characteristic
/// function of the set where g = 1. Values of g within 1e-12 of 1 are
/// treated as exactly 1 so the fixed point survives roundoff.
double approx_char_fn(const CharFnParams& params, int n, const DensityMatrix& rho);

struct KrausChannel {
  int input_dim = 0;
  int output_dim = 0;
  std::vector<Matrix> kraus;

  /// Throws unless every operator is output_dim x input_dim and
  /// sum K^dagger K = identity within 1e-9.
  void validate() const;
};

DensityMatrix apply_channel(const KrausChannel& chan, const DensityMatrix& rho);
double output_entropy(const KrausChannel& chan, const DensityMatrix& rho, double base);

/// Entropy of the keep-A partial trace (the entanglement measure on pure
/// bipartite states). For pure inputs the Gram matrix of the smaller tensor
/// factor is used, with a closed form at dimension 2.
StateFunctional make_entropy_a(int dA, int dB, double base);

StateFunctional make_truncated_entropy(int dA, int dB, int n, double base);
StateFunctional make_ky_fan(int n);
StateFunctional make_purity_gap();
StateFunctional make_char_fn(CharFnParams params, int n);
StateFunctional make_channel_entropy(KrausChannel chan, double base);

/// f(rho) = Re tr(A rho); its own convex roof and concave hull.
StateFunctional make_affine(Matrix a);

/// f(psi) = <psi|A|psi>^2 on pure states only.
StateFunctional make_quartic(Matrix a);

}  // namespace choqroof
