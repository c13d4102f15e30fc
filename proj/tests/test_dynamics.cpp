#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace susyjc;
using Catch::Matchers::WithinAbs;

namespace {

double max_dev(const CVector& a, const CVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("model parameters validate and derive detuning") {
  const ModelParams p(2.5, 0.1);
  CHECK(p.delta() == 1.5);
  CHECK(p.ajc_partner().omega_a() == 0.5);
  CHECK_THROWS(ModelParams(1.0, -0.1));
  CHECK_THROWS(ModelParams(1.0, 0.1, 0.0));
  CHECK_THROWS(ModelParams(NAN, 0.1));
}

TEST_CASE("initial product states") {
  const auto vac = make_fock_state(0, 4);
  const JointState g0 = make_initial_state(0.0, 1.0, vac);
  CHECK(g0.ground(0) == Complex(1.0));
  CHECK_THAT(g0.norm(), WithinAbs(1.0, 1e-15));

  const auto cat = make_cat_state(2.0, 0.0, 60);
  const double theta = 0.7, phi = kPi / 4;
  const JointState s = make_initial_state(std::polar(std::sin(theta), phi), std::cos(theta), cat);
  CHECK_THAT(s.norm(), WithinAbs(1.0, 1e-14));
  CHECK(max_dev(s.vector(), oracle::product_state(std::polar(std::sin(theta), phi), std::cos(theta),
                                                  cat.amplitudes())) < 1e-15);

  const JointState eq = make_initial_state(1.0, 1.0, make_fock_state(2, 4));
  CHECK_THAT(std::abs(eq.excited(2)), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK_THAT(std::abs(eq.ground(2)), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK_THROWS(make_initial_state(0.0, 0.0, vac));
}

TEST_CASE("Hamiltonian builders match Kronecker-product construction") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const double wa = rng.uniform(-3, 3), lam = rng.uniform(0, 1), wc = rng.uniform(0.2, 2);
    const int n_trunc = rng.integer(1, 20);
    const ModelParams p(wa, lam, wc);
    const CMatrix hjc = build_jc_hamiltonian(p, n_trunc).matrix;
    const CMatrix hajc = build_ajc_hamiltonian(p, n_trunc).matrix;
    CHECK((hjc - oracle::jc_hamiltonian(wa, lam, wc, n_trunc)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((hajc - oracle::ajc_hamiltonian(wa, lam, wc, n_trunc)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(hermiticity_residual(hjc) < 1e-14);
    CHECK(hermiticity_residual(hajc) < 1e-14);
  }
}

TEST_CASE("decoupled and single-excitation spectra") {
  const ModelParams p(1.7, 0.0);
  const int n_trunc = 5;
  Eigen::SelfAdjointEigenSolver<CMatrix> jc(build_jc_hamiltonian(p, n_trunc).matrix);
  Eigen::SelfAdjointEigenSolver<CMatrix> ajc(build_ajc_hamiltonian(p, n_trunc).matrix);
  std::vector<double> expected;
  for (int n = 0; n <= n_trunc; ++n) {
    expected.push_back(n + 0.85);
    expected.push_back(n - 0.85);
  }
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < 12; ++k) {
    CHECK_THAT(jc.eigenvalues()[k], WithinAbs(expected[k], 1e-13));
    CHECK_THAT(ajc.eigenvalues()[k], WithinAbs(expected[k], 1e-13));
  }

  // N = 1 at resonance: the {|e,0>, |g,1>} doublet sits at wc/2 +- lambda.
  const ModelParams res(1.0, 0.1);
  Eigen::SelfAdjointEigenSolver<CMatrix> small(build_jc_hamiltonian(res, 1).matrix);
  std::vector<double> ev(small.eigenvalues().data(), small.eigenvalues().data() + 4);
  CHECK(std::count_if(ev.begin(), ev.end(), [](double e) { return std::abs(e - 0.6) < 1e-14; }) == 1);
  CHECK(std::count_if(ev.begin(), ev.end(), [](double e) { return std::abs(e - 0.4) < 1e-14; }) == 1);
}

TEST_CASE("AJC at the shifted frequency equals the partner built from the JC frequency") {
  const double wa = 2.3, lam = 0.2, wc = 1.1;
  const int n_trunc = 12;
  const ModelParams jc(wa, lam, wc);
  // Partner matrix written out from the JC frequency: diagonal wc n +- (wa/2 - wc).
  const CMatrix a = oracle::annihilation(n_trunc);
  const CMatrix n = a.adjoint() * a;
  const CMatrix id = oracle::identity(n_trunc);
  CMatrix expected(2 * (n_trunc + 1), 2 * (n_trunc + 1));
  expected << wc * n + (0.5 * wa - wc) * id, lam * a.adjoint(), lam * a, wc * n - (0.5 * wa - wc) * id;
  CHECK((build_ajc_hamiltonian(jc.ajc_partner(), n_trunc).matrix - expected).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("Rabi frequency and doublet coefficients") {
  const ModelParams off(1.0 + 1.0, 0.1);  // Delta = 1
  CHECK_THAT(rabi_frequency(0, off), WithinAbs(0.5, 1e-15));
  CHECK_THAT(rabi_frequency(9, off), WithinAbs(std::sqrt(0.25 + 0.09), 1e-15));
  const ModelParams res(1.0, 0.1);
  CHECK_THAT(rabi_frequency(4, res), WithinAbs(0.2, 1e-15));
  CHECK_THROWS(rabi_frequency(-1, res));

  CHECK(f_coeff(3, 0.0, off) == Complex(1.0));
  CHECK(g_coeff(3, 0.0, off) == Complex(0.0));
  for (double t : {0.0, 1.0, 37.5, 1e3}) {
    CHECK(f_coeff(0, t, res) == Complex(1.0));
    CHECK_THAT(g_coeff(0, t, res).imag(), WithinAbs(-0.1 * t, 1e-12 * (1 + t)));
    CHECK(g_coeff(0, t, res).real() == 0.0);
    for (int m = 1; m < 6; ++m) {
      const double x = 0.1 * std::sqrt(m) * t;
      CHECK_THAT(f_coeff(m, t, res).real(), WithinAbs(std::cos(x), 1e-15 * (1 + t)));
      CHECK(f_coeff(m, t, res).imag() == 0.0);
      CHECK_THAT(g_coeff(m, t, res).imag(), WithinAbs(-std::sin(x) / std::sqrt(m), 1e-15 * (1 + t)));
    }
  }
}

TEST_CASE("block unitarity on random parameters") {
  oracle::Rng rng(3);
  double worst = 0.0;
  for (int s = 0; s < 30; ++s) {
    const ModelParams p(1.0 + rng.uniform(-3, 3), rng.uniform(0, 1));
    const double t = rng.uniform(0, 500);
    const RabiTable tab(p, t, 250);
    for (int m = 0; m <= 250; ++m) {
      worst = std::max(worst, std::abs(std::norm(tab.f(m)) + m * std::norm(tab.g(m)) - 1.0));
      CHECK(tab.g(m).real() == 0.0);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("analytic propagator agrees with the Pade exponential") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const int n_trunc = rng.integer(2, 30);
    const ModelParams p(1.0 + rng.uniform(-1.5, 1.5), rng.uniform(0.01, 0.5), rng.uniform(0.5, 1.5));
    const double t = rng.uniform(0, 60);
    const JointState psi(rng.joint(n_trunc, n_trunc));
    const CVector ref = oracle::propagator(oracle::jc_hamiltonian(p.omega_a(), p.lambda(), p.omega_c(), n_trunc), t) *
                        psi.vector();
    const JointState out = analytic_jc_propagate(psi, t, p);
    CHECK(max_dev(out.vector(), ref) < 1e-9);
    CHECK_THAT(out.norm(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("analytic and dense propagation agree up to N = 80 and t = 200") {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const int n_trunc = rng.integer(40, 80);
    const ModelParams p(1.0 + rng.uniform(-1, 1), 0.1);
    const DensePropagator dense(build_jc_hamiltonian(p, n_trunc));
    const JointState psi(rng.joint(n_trunc, n_trunc / 2));
    for (int k = 0; k < 5; ++k) {
      const double t = rng.uniform(0, 200);
      const JointState a = analytic_jc_propagate(psi, t, p);
      const JointState d = dense.propagate(psi, t);
      CHECK(max_dev(a.vector(), d.vector()) < 1e-8);
      CHECK_THAT(d.norm(), WithinAbs(1.0, 1e-10));
    }
  }
}

TEST_CASE("propagator special cases") {
  const ModelParams p(1.3, 0.1);
  const int n_trunc = 16;
  const JointState psi = make_initial_state(0.6, 0.8, make_cat_state(0.7, 0.3, n_trunc));
  CHECK(max_dev(analytic_jc_propagate(psi, 0.0, p).vector(), psi.vector()) < 1e-15);
  CHECK(max_dev(dense_propagate(build_jc_hamiltonian(p, n_trunc), psi, 0.0).vector(), psi.vector()) < 1e-13);

  const JointState g0 = make_initial_state(0.0, 1.0, make_fock_state(0, n_trunc));
  for (double t : {0.5, 13.0, 250.0}) {
    const JointState out = analytic_jc_propagate(g0, t, p);
    CHECK(std::abs(out.ground(0) - std::polar(1.0, 0.5 * 1.3 * t)) < 1e-14);
    CHECK_THAT(out.norm(), WithinAbs(1.0, 1e-15));
  }

  const ModelParams res(1.0, 0.1);
  const JointState e0 = make_initial_state(1.0, 0.0, make_fock_state(0, n_trunc));
  const DensePropagator dense(build_jc_hamiltonian(res, n_trunc));
  for (double t : {1.0, 7.0, 31.0}) {
    const double pe = std::norm(analytic_jc_propagate(e0, t, res).excited(0));
    CHECK_THAT(pe, WithinAbs(std::pow(std::cos(0.1 * t), 2), 1e-13));
    CHECK_THAT(std::norm(dense.propagate(e0, t).excited(0)), WithinAbs(pe, 1e-9));
  }
}

TEST_CASE("dense propagator on diagonal and non-Hermitian input") {
  CMatrix h = CMatrix::Zero(4, 4);
  h.diagonal() << 0.3, -1.2, 2.0, 0.0;
  const DensePropagator prop(JointOperator{h});
  CVector v = CVector::Ones(4) / 2.0;
  const double t = 3.7;
  const CVector out = prop.propagate(JointState(v), t).vector();
  for (int k = 0; k < 4; ++k) CHECK(std::abs(out[k] - 0.5 * std::polar(1.0, -h(k, k).real() * t)) < 1e-15);

  CMatrix bad = h;
  bad(0, 1) = 1e-9;
  CHECK_THROWS_AS(DensePropagator(JointOperator{bad}), std::invalid_argument);
  CHECK_THROWS(prop.propagate(JointState(CVector::Ones(6)), 1.0));
}

TEST_CASE("group property and energy conservation") {
  oracle::Rng rng(13);
  const int n_trunc = 30;
  const ModelParams p(1.4, 0.15);
  const JointOperator h = build_jc_hamiltonian(p, n_trunc);
  const DensePropagator dense(h);
  const JointState psi(rng.joint(n_trunc, 15));
  const double e0 = expectation_via_state(psi, h).real();
  for (int k = 0; k < 5; ++k) {
    const double t1 = rng.uniform(0, 100), t2 = rng.uniform(0, 100);
    for (bool analytic : {true, false}) {
      auto step = [&](const JointState& s, double t) {
        return analytic ? analytic_jc_propagate(s, t, p) : dense.propagate(s, t);
      };
      CHECK(max_dev(step(step(psi, t1), t2).vector(), step(psi, t1 + t2).vector()) < 1e-9);
      CHECK_THAT(expectation_via_state(step(psi, t1), h).real(), WithinAbs(e0, 1e-9));
    }
  }
}

TEST_CASE("conjugated F on the excited diagonal is required") {
  // The unconjugated variant fails the oracle away from resonance.
  const ModelParams p(1.8, 0.2);
  const int n_trunc = 10;
  const JointState e3 = JointState::from_blocks(make_fock_state(3, n_trunc).amplitudes(), CVector::Zero(n_trunc + 1));
  const double t = 4.2;
  const Complex ref = (oracle::propagator(oracle::jc_hamiltonian(1.8, 0.2, 1.0, n_trunc), t) * e3.vector())[3];
  const Complex phase = std::polar(1.0, -3.5 * t);
  CHECK(std::abs(phase * std::conj(f_coeff(4, t, p)) - ref) < 1e-12);
  CHECK(std::abs(phase * f_coeff(4, t, p) - ref) > 1e-3);
}
