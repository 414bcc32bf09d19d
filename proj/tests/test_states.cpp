#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "choqroof/choquet.hpp"
#include "choqroof/errors.hpp"
#include "choqroof/linalg.hpp"
#include "choqroof/states.hpp"
#include "support/fixtures.hpp"

using namespace choqroof;

namespace {

Ensemble two_basis_qubit() {
  Ensemble e;
  e.weights = {0.5, 0.5};
  e.atoms = {fixtures::basis_state(2, 0), fixtures::basis_state(2, 1)};
  return e;
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("from_matrix accepts valid states and rejects bad ones") {
  CHECK_NOTHROW(DensityMatrix::from_matrix(fixtures::diag_state({0.5, 0.5}).matrix()));

  Matrix bad_trace(2, 2);
  bad_trace(0, 0) = 0.9;
  bad_trace(1, 1) = 0.9;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad_trace), ValidationError);

  Matrix non_herm(2, 2);
  non_herm(0, 0) = 1.0;
  non_herm(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(non_herm), ValidationError);

  Matrix negative(2, 2);
  negative(0, 0) = 1.0 + 1e-8;
  negative(1, 1) = -1e-8;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(negative), ValidationError);
}

TEST_CASE("from_matrix clips tiny negative eigenvalues and renormalizes") {
  Matrix m(2, 2);
  m(0, 0) = 1.0 + 4e-10;
  m(1, 1) = -4e-10;
  const DensityMatrix rho = DensityMatrix::from_matrix(m);
  CHECK(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12);
  CHECK(eigenvalues_of(rho.matrix()).back() >= 0.0);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pure builds a normalized rank-1 projector") {
  const std::vector<Complex> amp = {2.0, Complex(0.0, 2.0)};
  const DensityMatrix rho = DensityMatrix::pure(amp);
  CHECK(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12);
  const std::vector<double> lam = eigenvalues_of(rho.matrix());
  CHECK(lam[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(lam[1]) <= 1e-12);
}

TEST_CASE("ensemble validation") {
  Ensemble e = two_basis_qubit();
  CHECK_NOTHROW(e.validate());
  CHECK(is_pure_ensemble(e));

  Ensemble bad_sum = e;
  bad_sum.weights = {0.5, 0.6};
  CHECK_THROWS_AS(bad_sum.validate(), ValidationError);

  Ensemble bad_weight = e;
  bad_weight.weights = {1.0, 0.0};
  CHECK_THROWS_AS(bad_weight.validate(), ValidationError);

  Ensemble bad_dim = e;
  bad_dim.atoms[1] = fixtures::basis_state(3, 0);
  CHECK_THROWS_AS(bad_dim.validate(), ValidationError);
}

TEST_CASE("barycenter point mass and basis mixture") {
  const DensityMatrix rho = sample_state(3, 3, 5);
  Ensemble point;
  point.weights = {1.0};
  point.atoms = {rho};
  CHECK(max_abs_diff(barycenter(point).matrix(), rho.matrix()) <= 1e-15);

  Matrix half = Matrix::identity(2);
  half *= 0.5;
  CHECK(max_abs_diff(barycenter(two_basis_qubit()).matrix(), half) <= 1e-15);
}

TEST_CASE("barycenter matches direct weighted summation") {
  const Ensemble e = sample_ensemble(3, 5, 42);
  Matrix direct(3, 3);
  for (int i = 0; i < e.size(); ++i) {
    Matrix term = e.atoms[i].matrix();
    term *= e.weights[i];
    direct += term;
  }
  CHECK(max_abs_diff(barycenter(e).matrix(), direct) <= 1e-12);
}

TEST_CASE("refine_to_pure on pure input is the identity up to phase") {
  Ensemble e = two_basis_qubit();
  const Ensemble refined = refine_to_pure(e);
  CHECK(ensemble_distance(refined, e) <= 1e-9);
}

TEST_CASE("refine_to_pure splits the maximally mixed qubit") {
  Ensemble e;
  e.weights = {1.0};
  e.atoms = {fixtures::diag_state({0.5, 0.5})};
  const Ensemble refined = refine_to_pure(e);
  REQUIRE(refined.size() == 2);
  CHECK(ensemble_distance(refined, two_basis_qubit()) <= 1e-9);
}

TEST_CASE("refine_to_pure preserves the barycenter on 500 random ensembles") {
  for (uint64_t seed = 1; seed <= 500; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 3);
    const int atoms = 1 + static_cast<int>(seed % 4);
    const Ensemble e = sample_ensemble(dim, atoms, seed);
    const Ensemble refined = refine_to_pure(e);
    CHECK(is_pure_ensemble(refined));
    CHECK(max_abs_diff(barycenter(refined).matrix(), barycenter(e).matrix()) <= 1e-10);
  }
}

TEST_CASE("refined ensembles dominate their originals") {
  const Ensemble e = sample_ensemble(2, 3, 9);
  const OrderVerdict v = check_dominates(refine_to_pure(e), e);
  CHECK(v.status == OrderStatus::dominates);
}

TEST_CASE("steer_barycenter closed-form example") {
  Ensemble e = two_basis_qubit();
  const DensityMatrix target = fixtures::diag_state({0.6, 0.4});
  const SteerResult sr = steer_barycenter(e, target);
  CHECK(sr.epsilon == doctest::Approx(0.2).epsilon(1e-10));
  REQUIRE(sr.ensemble.size() == 2);
  CHECK(max_abs_diff(sr.ensemble.atoms[0].matrix(), fixtures::diag_state({1.0, 0.0}).matrix()) <=
        1e-9);
  CHECK(max_abs_diff(sr.ensemble.atoms[1].matrix(), fixtures::diag_state({0.2, 0.8}).matrix()) <=
        1e-9);
  CHECK(max_abs_diff(barycenter(sr.ensemble).matrix(), target.matrix()) <= 1e-9);
}

TEST_CASE("steer_barycenter with target equal to the barycenter is a no-op") {
  const Ensemble e = sample_ensemble(2, 3, 11);
  const SteerResult sr = steer_barycenter(e, barycenter(e));
  CHECK(sr.epsilon <= 1e-11);
  for (int i = 0; i < e.size(); ++i)
    CHECK(max_abs_diff(sr.ensemble.atoms[i].matrix(), e.atoms[i].matrix()) <= 1e-9);
}

TEST_CASE("steer_barycenter hits perturbed qutrit targets exactly") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const Ensemble e = sample_ensemble(3, 3, seed);
    const DensityMatrix rho0 = barycenter(e);
    Rng rng(seed + 1000);
    Matrix h = fixtures::random_hermitian(3, rng);
    const Complex tr = h.trace();
    for (int i = 0; i < 3; ++i) h(i, i) -= tr / 3.0;
    h *= 0.01 / std::max(1.0, op_norm(h));
    const DensityMatrix target = DensityMatrix::from_matrix(rho0.matrix() + h);
    const SteerResult sr = steer_barycenter(e, target);
    CHECK(max_abs_diff(barycenter(sr.ensemble).matrix(), target.matrix()) <= 1e-9);
    for (int i = 0; i < e.size(); ++i)
      CHECK(trace_norm(sr.ensemble.atoms[i].matrix() - e.atoms[i].matrix()) <=
            2.0 * sr.epsilon + 1e-9);
  }
}

TEST_CASE("steer_barycenter rejects rank-deficient barycenters") {
  Ensemble e;
  e.weights = {1.0};
  e.atoms = {fixtures::basis_state(2, 0)};
  CHECK_THROWS_AS(steer_barycenter(e, fixtures::diag_state({0.5, 0.5})), UnsupportedInputError);
}

TEST_CASE("steering distance shrinks monotonically with the target deformation") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const Ensemble e = sample_ensemble(2, 3, seed);
    const DensityMatrix rho0 = barycenter(e);
    const DensityMatrix rho1 = sample_state(2, 2, seed + 500);
    double prev = 1e100;
    for (double t : {0.1, 0.01, 0.001}) {
      Matrix mix = rho0.matrix();
      mix *= (1.0 - t);
      Matrix other = rho1.matrix();
      other *= t;
      mix += other;
      const SteerResult sr = steer_barycenter(e, DensityMatrix::from_matrix(mix));
      const double dist = ensemble_distance(sr.ensemble, e);
      CHECK(dist <= prev);
      prev = dist;
    }
  }
}

TEST_CASE("sample_state honors rank, trace and determinism") {
  const DensityMatrix pure = sample_state(2, 1, 3);
  CHECK(eigenvalues_of(pure.matrix())[1] <= 1e-9);

  const DensityMatrix full = sample_state(4, 4, 3);
  CHECK(std::abs(full.matrix().trace().real() - 1.0) <= 1e-12);
  CHECK(eigenvalues_of(full.matrix()).back() > 1e-9);

  const DensityMatrix again = sample_state(4, 4, 3);
  CHECK(max_abs_diff(full.matrix(), again.matrix()) == 0.0);

  CHECK_THROWS_AS(sample_state(2, 3, 1), ValidationError);
}

TEST_CASE("sample_ensemble is valid and deterministic") {
  const Ensemble a = sample_ensemble(3, 4, 77);
  CHECK_NOTHROW(a.validate());
  const Ensemble b = sample_ensemble(3, 4, 77);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.weights[i] == b.weights[i]);
    CHECK(max_abs_diff(a.atoms[i].matrix(), b.atoms[i].matrix()) == 0.0);
  }
}

TEST_CASE("ensemble_distance basics") {
  const Ensemble e = sample_ensemble(2, 3, 21);
  CHECK(ensemble_distance(e, e) == doctest::Approx(0.0).epsilon(1e-12));

  Ensemble p1, p2;
  p1.weights = {1.0};
  p1.atoms = {sample_state(2, 2, 31)};
  p2.weights = {1.0};
  p2.atoms = {sample_state(2, 2, 32)};
  const double expected = trace_norm(p1.atoms[0].matrix() - p2.atoms[0].matrix());
  CHECK(ensemble_distance(p1, p2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ensemble_distance matches exhaustive permutation matching") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const Ensemble a = sample_ensemble(2, 3, seed);
    const Ensemble b = sample_ensemble(2, 3, seed + 100);
    double best = 1e100;
    std::vector<int> idx = {0, 1, 2};
    do {
      double cost = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double wa = a.weights[i];
        const double wb = b.weights[idx[i]];
        cost += std::abs(wa - wb) +
                std::min(wa, wb) * trace_norm(a.atoms[i].matrix() - b.atoms[idx[i]].matrix());
      }
      best = std::min(best, cost);
    } while (std::next_permutation(idx.begin(), idx.end()));
    CHECK(ensemble_distance(a, b) == doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("ensemble_distance is symmetric and rejects dim mismatch") {
  const Ensemble a = sample_ensemble(2, 2, 1);
  const Ensemble b = sample_ensemble(2, 4, 2);
  CHECK(std::abs(ensemble_distance(a, b) - ensemble_distance(b, a)) <= 1e-12);
  const Ensemble c = sample_ensemble(3, 2, 3);
  CHECK_THROWS_AS(ensemble_distance(a, c), ValidationError);
}

}  // TEST_SUITE
