#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace susyjc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Fock states are basis vectors") {
  const auto vac = make_fock_state(0, 5);
  REQUIRE(vac.n_trunc() == 5);
  CHECK(vac[0] == Complex(1.0));
  for (int n = 1; n <= 5; ++n) CHECK(vac[n] == Complex(0.0));
  CHECK(mean_photon_number(make_fock_state(3, 5)) == 3.0);
  CHECK_THROWS_AS(make_fock_state(6, 5), std::out_of_range);
  CHECK_THROWS_AS(make_fock_state(-1, 5), std::out_of_range);
}

TEST_CASE("coherent state amplitudes and tail guard") {
  const auto vac = make_coherent_state(0.0, 10);
  CHECK(std::abs(vac[0] - 1.0) < 1e-15);
  CHECK(vac.amplitudes().tail(10).norm() == 0.0);

  const auto big = make_coherent_state(4.0, 250);
  CHECK_THAT(mean_photon_number(big), WithinAbs(16.0, 1e-8));

  const auto mid = make_coherent_state(2.0, 60);
  CHECK_THAT(mid.amplitudes().squaredNorm(), WithinAbs(1.0, 1e-12));
  const CVector ref = oracle::coherent(2.0, 60);
  CHECK((mid.amplitudes() - ref / ref.norm()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(make_coherent_state(4.0, 30), TruncationError);
}

TEST_CASE("coherent recurrence holds for complex alpha") {
  const Complex alpha(1.3, -0.7);
  const auto s = make_coherent_state(alpha, 60);
  for (int n = 0; n < 60; ++n) {
    if (std::abs(s[n]) > 1e-300) {
      CHECK(std::abs(s[n + 1] / s[n] - alpha / std::sqrt(n + 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("cat states: mean photon number and parity") {
  const double a2 = 16.0;
  CHECK_THAT(mean_photon_number(make_cat_state(4.0, 0.0, 250)), WithinRel(a2 * std::tanh(a2), 1e-12));
  CHECK_THAT(mean_photon_number(make_cat_state(4.0, kPi, 250)), WithinRel(a2 / std::tanh(a2), 1e-12));
  CHECK_THAT(mean_photon_number(make_cat_state(4.0, kPi / 2, 250)), WithinRel(a2, 1e-12));

  const auto even = make_cat_state(1.5, 0.0, 60);
  const auto odd = make_cat_state(1.5, kPi, 60);
  for (int n = 0; n <= 60; ++n) {
    if (n % 2) {
      CHECK(even[n] == Complex(0.0));
    } else {
      CHECK(odd[n] == Complex(0.0));
    }
  }
  CHECK_THAT(even.amplitudes().squaredNorm(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(odd.amplitudes().squaredNorm(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("even cat matches the superposition of coherent states") {
  const Complex alpha(0.8, 0.3);
  const CVector plus = oracle::coherent(alpha, 40);
  const CVector minus = oracle::coherent(-alpha, 40);
  for (double vartheta : {0.0, 0.4, kPi / 2, kPi}) {
    CVector ref = plus + std::polar(1.0, vartheta) * minus;
    ref /= ref.norm();
    const auto cat = make_cat_state(alpha, vartheta, 40);
    CHECK((cat.amplitudes() - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("odd cat with vanishing amplitude is degenerate") {
  CHECK_THROWS_AS(make_cat_state(0.0, kPi, 10), DegenerateError);
  CHECK_THROWS_AS(make_cat_state(1e-9, kPi, 10), DegenerateError);
  CHECK_NOTHROW(make_cat_state(0.0, 0.0, 10));
}

TEST_CASE("ladder matrices") {
  const int n_trunc = 7;
  const auto ops = ladder_matrices(n_trunc);
  CHECK((ops.a_dag.matrix - ops.a.matrix.adjoint()).norm() == 0.0);
  for (int k = 0; k <= n_trunc; ++k) CHECK(ops.n.matrix(k, k) == Complex(k));
  CHECK((ops.n.matrix - ops.n.matrix.diagonal().asDiagonal().toDenseMatrix()).norm() == 0.0);

  const CVector one = make_fock_state(1, n_trunc).amplitudes();
  CHECK((ops.a.matrix * one - make_fock_state(0, n_trunc).amplitudes()).norm() < 1e-15);

  const CVector three = make_fock_state(3, n_trunc).amplitudes();
  CHECK((ops.a.matrix * ops.a_dag.matrix * three - 4.0 * three).norm() < 1e-14);

  const CMatrix comm = ops.a.matrix * ops.a_dag.matrix - ops.a_dag.matrix * ops.a.matrix;
  CHECK((comm.topRows(n_trunc) - CMatrix::Identity(n_trunc + 1, n_trunc + 1).topRows(n_trunc))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK(std::abs(comm(n_trunc, n_trunc) - Complex(-n_trunc)) < 1e-14);

  const CMatrix ada = ops.a_dag.matrix * ops.a.matrix;
  CHECK((ada - ops.n.matrix).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS(ladder_matrices(0));
}

TEST_CASE("from_amplitudes renormalizes and rejects zero vectors") {
  CVector c(3);
  c << 3.0, 4.0, 0.0;
  const auto s = FieldState::from_amplitudes(c);
  CHECK_THAT(std::abs(s[0]), WithinAbs(0.6, 1e-15));
  CHECK(s[-1] == Complex(0.0));
  CHECK(s[3] == Complex(0.0));
  CHECK_THROWS_AS(FieldState::from_amplitudes(CVector::Zero(3)), DegenerateError);
  CHECK_THROWS(FieldState::from_amplitudes(CVector::Ones(1)));
}
