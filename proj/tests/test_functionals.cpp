#include <cmath>
#include <vector>

#include "doctest.h"

#include "choqroof/errors.hpp"
#include "choqroof/functionals.hpp"
#include "choqroof/linalg.hpp"
#include "choqroof/states.hpp"
#include "support/fixtures.hpp"

using namespace choqroof;

namespace {

double g_of(const CharFnParams& p, const DensityMatrix& rho) {
  switch (p.kind) {
    case CharFnCase::pure_set: {
      double best = 0.0;
      for (const DensityMatrix& phi : p.pure_set)
        best = std::max(best, (phi.matrix() * rho.matrix()).trace().real());
      return best;
    }
    case CharFnCase::face:
      return (p.projector * rho.matrix()).trace().real();
    case CharFnCase::rank:
      return ky_fan(rho, p.k);
  }
  return 0.0;
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("entropy basics") {
  CHECK(entropy(fixtures::basis_state(3, 1), 2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy(fixtures::diag_state({0.5, 0.5}), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  const double expected =
      -(0.5 * std::log2(0.5) + 0.3 * std::log2(0.3) + 0.2 * std::log2(0.2));
  CHECK(entropy(fixtures::diag_state({0.5, 0.3, 0.2}), 2.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  const double nats =
      -(0.5 * std::log(0.5) + 0.3 * std::log(0.3) + 0.2 * std::log(0.2));
  CHECK(entropy(fixtures::diag_state({0.5, 0.3, 0.2}), std::exp(1.0)) ==
        doctest::Approx(nats).epsilon(1e-12));
}

TEST_CASE("truncated entropy collapses at n = 1 and on the Bell state") {
  const DensityMatrix omega = fixtures::random_pure_bipartite(2, 3, 5);
  CHECK(truncated_entropy(omega, 2, 3, 1, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(truncated_entropy(fixtures::bell(), 2, 2, 2, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("truncated entropy matches scalar arithmetic on spectrum (0.5, 0.3, 0.2)") {
  const DensityMatrix omega = fixtures::purification({0.5, 0.3, 0.2});
  // top-two terms plus the reweighting term s log s with s = 0.8
  const double expected = -(0.5 * std::log2(0.5) + 0.3 * std::log2(0.3)) + 0.8 * std::log2(0.8);
  CHECK(expected == doctest::Approx(0.763547202).epsilon(1e-9));
  CHECK(truncated_entropy(omega, 3, 3, 2, 2.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("truncated entropy stays within [0, log n] and grows with n") {
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    const int dA = 2 + static_cast<int>(seed % 2);
    const int dB = 2 + static_cast<int>(seed % 3);
    const DensityMatrix omega = sample_state(dA * dB, dA * dB, seed);
    const Matrix reduced = partial_trace(omega.matrix(), dA, dB, Side::A);
    const double full = entropy(DensityMatrix::unchecked(reduced), 2.0);
    double prev = 0.0;
    for (int n = 1; n <= dA; ++n) {
      const double hn = truncated_entropy(omega, dA, dB, n, 2.0);
      CHECK(hn >= -1e-12);
      CHECK(hn <= std::log2(double(n)) + 1e-12);
      CHECK(hn >= prev - 1e-12);
      prev = hn;
    }
    // full-rank reduced state: equality exactly at n >= rank = dA
    CHECK(truncated_entropy(omega, dA, dB, dA, 2.0) == doctest::Approx(full).epsilon(1e-10));
    CHECK(truncated_entropy(omega, dA, dB, dA + 2, 2.0) == doctest::Approx(full).epsilon(1e-10));
  }
}

TEST_CASE("truncated entropy rejects n < 1") {
  CHECK_THROWS_AS(truncated_entropy(fixtures::bell(), 2, 2, 0, 2.0), ValidationError);
}

TEST_CASE("pure-state evaluators agree with the mixed-state path") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    const int dA = 2 + static_cast<int>(seed % 2);
    const int dB = 2 + static_cast<int>(seed % 3);
    Rng rng(seed);
    const std::vector<Complex> amp = fixtures::random_pure_amplitudes(dA * dB, rng);
    const DensityMatrix omega = DensityMatrix::pure(amp);

    const StateFunctional ent = make_entropy_a(dA, dB, 2.0);
    CHECK(ent.eval_pure(amp) == doctest::Approx(ent.eval_state(omega)).epsilon(1e-10));

    for (int n = 1; n <= 3; ++n) {
      const StateFunctional hn = make_truncated_entropy(dA, dB, n, 2.0);
      CHECK(hn.eval_pure(amp) == doctest::Approx(hn.eval_state(omega)).epsilon(1e-10));
    }
  }
}

TEST_CASE("ky_fan partial sums") {
  CHECK(ky_fan(fixtures::diag_state({0.5, 0.3, 0.2}), 2) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ky_fan(fixtures::diag_state({0.5, 0.3, 0.2}), 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ky_fan(fixtures::basis_state(2, 0), 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(ky_fan(fixtures::diag_state({1.0, 0.0}), 0), ValidationError);
  CHECK_THROWS_AS(ky_fan(fixtures::diag_state({1.0, 0.0}), 3), ValidationError);
}

TEST_CASE("ky_fan dominates the trace against sampled projectors") {
  Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 3;
    const int n = 1 + static_cast<int>(rng.below(3));
    const DensityMatrix rho = sample_state(d, d, 1000 + static_cast<uint64_t>(trial));
    const Matrix u = fixtures::random_unitary(d, rng);
    Matrix p(d, d);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p(i, j) += u(i, k) * std::conj(u(j, k));
    CHECK((p * rho.matrix()).trace().real() <= ky_fan(rho, n) + 1e-12);
  }
  // the eigenbasis projector attains the bound
  const DensityMatrix rho = sample_state(3, 3, 4242);
  const Spectrum s = eigh(rho.matrix());
  Matrix top(3, 3);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) top(i, j) += s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
  CHECK((top * rho.matrix()).trace().real() == doctest::Approx(ky_fan(rho, 2)).epsilon(1e-10));
}

TEST_CASE("purity_gap basics") {
  CHECK(purity_gap(fixtures::basis_state(2, 0)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(purity_gap(fixtures::diag_state({0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-12));
  const double delta = 0.01;
  const DensityMatrix mix = fixtures::diag_state({1.0 - delta / 2.0, delta / 2.0});
  CHECK(purity_gap(mix) == doctest::Approx(0.99005).epsilon(1e-12));
}

TEST_CASE("approx_char_fn closed forms") {
  CharFnParams face;
  face.kind = CharFnCase::face;
  face.projector = Matrix::identity(3);
  const DensityMatrix rho = sample_state(3, 3, 9);
  for (int n : {1, 2, 10}) CHECK(approx_char_fn(face, n, rho) == 1.0);

  CharFnParams rank1;
  rank1.kind = CharFnCase::rank;
  rank1.k = 1;
  CHECK(approx_char_fn(rank1, 3, fixtures::basis_state(2, 1)) == 1.0);
  const DensityMatrix half = fixtures::diag_state({0.5, 0.5});
  CHECK(approx_char_fn(rank1, 1, half) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(approx_char_fn(rank1, 2, half) ==
        doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("approx_char_fn is monotone in n for all three cases") {
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const int d = 2 + static_cast<int>(seed % 2);
    const DensityMatrix rho = sample_state(d, 1 + static_cast<int>(seed % d), seed);

    std::vector<CharFnParams> cases(3);
    cases[0].kind = CharFnCase::pure_set;
    cases[0].pure_set = {DensityMatrix::pure(fixtures::random_pure_amplitudes(d, rng)),
                         fixtures::basis_state(d, 0)};
    cases[1].kind = CharFnCase::face;
    Matrix p(d, d);
    p(0, 0) = 1.0;
    cases[1].projector = p;
    cases[2].kind = CharFnCase::rank;
    cases[2].k = 1 + static_cast<int>(seed % d);

    for (const CharFnParams& c : cases) {
      const double g = g_of(c, rho);
      double prev = 2.0;
      for (int n = 1; n <= 50; ++n) {
        const double fn = approx_char_fn(c, n, rho);
        CHECK(fn >= -1e-15);
        CHECK(fn <= 1.0);
        CHECK(fn <= prev + 1e-12);
        prev = fn;
        if (g >= 1.0 - 1e-12) CHECK(fn == 1.0);
      }
      if (g < 1.0 - 1e-12)
        CHECK(approx_char_fn(c, 50, rho) <= approx_char_fn(c, 1, rho) + 1e-15);
    }
  }
}

TEST_CASE("channels: identity, partial trace, depolarizing") {
  const DensityMatrix rho = sample_state(2, 2, 12);

  KrausChannel id;
  id.input_dim = 2;
  id.output_dim = 2;
  id.kraus = {Matrix::identity(2)};
  CHECK(max_abs_diff(apply_channel(id, rho).matrix(), rho.matrix()) <= 1e-12);
  CHECK(output_entropy(id, rho, 2.0) == doctest::Approx(entropy(rho, 2.0)).epsilon(1e-12));

  // keep-A partial trace as a channel on a product state
  const DensityMatrix sigma = sample_state(3, 3, 13);
  KrausChannel pt;
  pt.input_dim = 6;
  pt.output_dim = 2;
  for (int b = 0; b < 3; ++b) {
    Matrix k(2, 6);
    for (int a = 0; a < 2; ++a) k(a, a * 3 + b) = 1.0;
    pt.kraus.push_back(k);
  }
  const DensityMatrix prod = fixtures::product_state(rho, sigma);
  CHECK(max_abs_diff(apply_channel(pt, prod).matrix(), rho.matrix()) <= 1e-12);

  KrausChannel depol;
  depol.input_dim = 2;
  depol.output_dim = 2;
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  y(0, 1) = Complex(0.0, -1.0);
  y(1, 0) = Complex(0.0, 1.0);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  for (Matrix m : {Matrix::identity(2), x, y, z}) {
    m *= 0.5;
    depol.kraus.push_back(m);
  }
  Matrix half = Matrix::identity(2);
  half *= 0.5;
  CHECK(max_abs_diff(apply_channel(depol, rho).matrix(), half) <= 1e-12);
  CHECK(output_entropy(depol, rho, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-trace-preserving Kraus sets are rejected") {
  KrausChannel bad;
  bad.input_dim = 2;
  bad.output_dim = 2;
  Matrix k = Matrix::identity(2);
  k *= 0.9;
  bad.kraus = {k};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(apply_channel(bad, sample_state(2, 2, 1)), ValidationError);
}

TEST_CASE("functional factories never produce NaN on sampled states") {
  const std::vector<StateFunctional> fns = {
      make_entropy_a(2, 2, 2.0), make_truncated_entropy(2, 2, 2, 2.0), make_ky_fan(1),
      make_purity_gap()};
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const std::vector<Complex> amp = fixtures::random_pure_amplitudes(4, rng);
    const DensityMatrix rho = sample_state(4, 2 + static_cast<int>(seed % 3), seed);
    for (const StateFunctional& f : fns) {
      CHECK(std::isfinite(f.eval_pure(amp)));
      if (f.eval_state) CHECK(std::isfinite(f.eval_state(rho)));
    }
  }
}

TEST_CASE("affine and quartic factories") {
  Rng rng(3);
  const Matrix a = fixtures::random_hermitian(2, rng);
  const StateFunctional affine = make_affine(a);
  const StateFunctional quartic = make_quartic(a);
  const DensityMatrix rho = sample_state(2, 2, 30);
  const double tr = (a * rho.matrix()).trace().real();
  CHECK(affine.eval_state(rho) == doctest::Approx(tr).epsilon(1e-12));
  const std::vector<Complex> amp = fixtures::random_pure_amplitudes(2, rng);
  const DensityMatrix proj = DensityMatrix::pure(amp);
  const double pure_tr = (a * proj.matrix()).trace().real();
  CHECK(affine.eval_pure(amp) == doctest::Approx(pure_tr).epsilon(1e-12));
  CHECK(quartic.eval_pure(amp) == doctest::Approx(pure_tr * pure_tr).epsilon(1e-12));
  CHECK_FALSE(quartic.eval_state);
  CHECK(quartic.domain == Domain::pure_only);
}

}  // TEST_SUITE
