#pragma once

// JC and AJC Hamiltonians on the truncated joint space and two propagators:
// the closed-form JC evolution operator, applied per excitation doublet, and a
// dense eigendecomposition exponential for any Hermitian Hamiltonian.
//
// Joint basis ordering: |e,0>..|e,N>, then |g,0>..|g,N>. Units: hbar = 1,
// frequencies and times in units of omega_c.

#include "susyjc/fock_space.hpp"

#include <Eigen/Eigenvalues>

#include <utility>
#include <vector>

namespace susyjc {

class ModelParams {
 public:
  ModelParams(double omega_a, double lambda, double omega_c = 1.0)
      : omega_a_(omega_a), omega_c_(omega_c), lambda_(lambda) {
    if (!std::isfinite(omega_a) || !std::isfinite(lambda) || !std::isfinite(omega_c)) {
      throw std::invalid_argument("ModelParams must be finite");
    }
    if (!(omega_c > 0.0)) throw std::invalid_argument("omega_c must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  }

  double omega_a() const { return omega_a_; }
  double omega_c() const { return omega_c_; }
  double lambda() const { return lambda_; }
  double delta() const { return omega_a_ - omega_c_; }

  /// Atomic frequency of the AJC partner: A H_JC(w_a) = H_AJC(w_a - 2 w_c) A.
  ModelParams ajc_partner() const { return {omega_a_ - 2.0 * omega_c_, lambda_, omega_c_}; }

 private:
  double omega_a_;
  double omega_c_;
  double lambda_;
};

/// Light-matter wavefunction of dimension 2(N+1). Not forced to unit norm so
/// that unnormalized intertwiner images can be represented.
class JointState {
 public:
  explicit JointState(CVector v) : v_(std::move(v)) {
    if (v_.size() < 4 || v_.size() % 2 != 0) {
      throw std::invalid_argument("JointState dimension must be 2(N+1) with N >= 1");
    }
  }

  static JointState from_blocks(const CVector& excited, const CVector& ground) {
    if (excited.size() != ground.size()) {
      throw std::invalid_argument("JointState blocks differ in size");
    }
    CVector v(excited.size() + ground.size());
    v << excited, ground;
    return JointState(std::move(v));
  }

  int n_trunc() const { return static_cast<int>(v_.size() / 2) - 1; }
  Eigen::Index dim() const { return v_.size(); }
  const CVector& vector() const { return v_; }

  auto excited_block() const { return v_.head(v_.size() / 2); }
  auto ground_block() const { return v_.tail(v_.size() / 2); }

  Complex excited(int n) const { return (n < 0 || n > n_trunc()) ? Complex{} : v_[n]; }
  Complex ground(int n) const {
    return (n < 0 || n > n_trunc()) ? Complex{} : v_[n_trunc() + 1 + n];
  }

  double norm() const { return v_.norm(); }

 private:
  CVector v_;
};

/// Dense operator on the joint space, block layout [[ee, eg], [ge, gg]].
struct JointOperator {
  CMatrix matrix;
  int n_trunc() const { return static_cast<int>(matrix.rows() / 2) - 1; }
};

inline JointOperator joint_from_blocks(const CMatrix& ee, const CMatrix& eg, const CMatrix& ge,
                                       const CMatrix& gg) {
  const Eigen::Index d = ee.rows();
  CMatrix m(2 * d, 2 * d);
  m << ee, eg, ge, gg;
  return {std::move(m)};
}

/// q (x) I_field, with q in the {|e>, |g>} basis.
inline JointOperator qubit_operator(const Eigen::Matrix2cd& q, int n_trunc) {
  const CMatrix id = CMatrix::Identity(n_trunc + 1, n_trunc + 1);
  return joint_from_blocks(q(0, 0) * id, q(0, 1) * id, q(1, 0) * id, q(1, 1) * id);
}

/// I_qubit (x) O
inline JointOperator field_operator(const FieldOperator& op) {
  const CMatrix zero = CMatrix::Zero(op.matrix.rows(), op.matrix.cols());
  return joint_from_blocks(op.matrix, zero, zero, op.matrix);
}

inline JointOperator sigma_z_operator(int n_trunc) {
  Eigen::Matrix2cd q;
  q << 1, 0, 0, -1;
  return qubit_operator(q, n_trunc);
}

/// sigma_+ = |e><g|
inline JointOperator sigma_plus_operator(int n_trunc) {
  Eigen::Matrix2cd q;
  q << 0, 1, 0, 0;
  return qubit_operator(q, n_trunc);
}

/// (beta_e|e> + beta_g|g>)/N0 (x) field
inline JointState make_initial_state(Complex beta_e, Complex beta_g, const FieldState& field) {
  const double n0 = std::sqrt(std::norm(beta_e) + std::norm(beta_g));
  if (!(n0 > 0.0)) throw std::invalid_argument("qubit amplitudes are both zero");
  return JointState::from_blocks((beta_e / n0) * field.amplitudes(),
                                 (beta_g / n0) * field.amplitudes());
}

inline JointOperator build_jc_hamiltonian(const ModelParams& p, int n_trunc) {
  const auto ops = ladder_matrices(n_trunc);
  const CMatrix id = CMatrix::Identity(n_trunc + 1, n_trunc + 1);
  const CMatrix free = p.omega_c() * ops.n.matrix;
  return joint_from_blocks(free + 0.5 * p.omega_a() * id, p.lambda() * ops.a.matrix,
                           p.lambda() * ops.a_dag.matrix, free - 0.5 * p.omega_a() * id);
}

/// AJC Hamiltonian at the atomic frequency carried by `p`. The SUSY partner of
/// build_jc_hamiltonian(p) is build_ajc_hamiltonian(p.ajc_partner()).
inline JointOperator build_ajc_hamiltonian(const ModelParams& p, int n_trunc) {
  const auto ops = ladder_matrices(n_trunc);
  const CMatrix id = CMatrix::Identity(n_trunc + 1, n_trunc + 1);
  const CMatrix free = p.omega_c() * ops.n.matrix;
  return joint_from_blocks(free + 0.5 * p.omega_a() * id, p.lambda() * ops.a_dag.matrix,
                           p.lambda() * ops.a.matrix, free - 0.5 * p.omega_a() * id);
}

/// Omega_m = sqrt((Delta/2)^2 + lambda^2 m)
inline double rabi_frequency(int m, const ModelParams& p) {
  if (m < 0) throw std::invalid_argument("rabi_frequency: m must be >= 0");
  const double half_delta = 0.5 * p.delta();
  if (half_delta == 0.0) return p.lambda() * std::sqrt(static_cast<double>(m));
  return std::sqrt(half_delta * half_delta + p.lambda() * p.lambda() * m);
}

namespace detail {

// sin(omega t)/omega with the removable singularity at omega t -> 0.
inline double sin_over(double omega, double t) {
  const double x = omega * t;
  if (std::abs(x) < 1e-6) return t * (1.0 - x * x / 6.0);
  return std::sin(x) / omega;
}

}  // namespace detail

/// F_m(t) = cos(Omega_m t) + i (Delta/2) sin(Omega_m t)/Omega_m
inline Complex f_coeff(int m, double t, const ModelParams& p) {
  const double omega = rabi_frequency(m, p);
  return {std::cos(omega * t), 0.5 * p.delta() * detail::sin_over(omega, t)};
}

/// G_m(t) = -i lambda sin(Omega_m t)/Omega_m
inline Complex g_coeff(int m, double t, const ModelParams& p) {
  const double omega = rabi_frequency(m, p);
  return {0.0, -p.lambda() * detail::sin_over(omega, t)};
}

/// F_m, G_m for m = 0..max_m at one instant.
class RabiTable {
 public:
  RabiTable(const ModelParams& p, double t, int max_m) : t_(t) {
    if (max_m < 0) throw std::invalid_argument("RabiTable: max_m must be >= 0");
    f_.resize(max_m + 1);
    g_.resize(max_m + 1);
    for (int m = 0; m <= max_m; ++m) {
      f_[m] = f_coeff(m, t, p);
      g_[m] = g_coeff(m, t, p);
    }
  }

  double t() const { return t_; }
  int max_m() const { return static_cast<int>(f_.size()) - 1; }
  Complex f(int m) const { return f_.at(m); }
  Complex g(int m) const { return g_.at(m); }

 private:
  double t_;
  std::vector<Complex> f_;
  std::vector<Complex> g_;
};

/// exp(-i t H_JC) psi from the closed-form doublet blocks. On the doublet
/// {|e,n>, |g,n+1>} the evolution is
///   e^{-i w_c (n + 1/2) t} [[conj F_{n+1}, sqrt(n+1) G_{n+1}],
///                           [sqrt(n+1) G_{n+1}, F_{n+1}]],
/// |g,0> picks up e^{i w_a t/2}, and |e,N> (partner beyond the cutoff) evolves
/// uncoupled.
inline JointState analytic_jc_propagate(const JointState& state0, double t, const ModelParams& p) {
  const int n_trunc = state0.n_trunc();
  const double wc = p.omega_c();
  CVector e = CVector::Zero(n_trunc + 1);
  CVector g = CVector::Zero(n_trunc + 1);

  g[0] = std::polar(1.0, 0.5 * p.omega_a() * t) * state0.ground(0);
  for (int n = 0; n < n_trunc; ++n) {
    const int m = n + 1;
    const Complex f = f_coeff(m, t, p);
    const Complex gm = g_coeff(m, t, p);
    const double root = std::sqrt(static_cast<double>(m));
    const Complex phase = std::polar(1.0, -wc * (n + 0.5) * t);
    const Complex en = state0.excited(n);
    const Complex gn1 = state0.ground(m);
    e[n] = phase * (std::conj(f) * en + root * gm * gn1);
    g[m] = phase * (root * gm * en + f * gn1);
  }
  e[n_trunc] =
      std::polar(1.0, -(wc * n_trunc + 0.5 * p.omega_a()) * t) * state0.excited(n_trunc);
  return JointState::from_blocks(e, g);
}

/// exp(-i t H) through a cached Hermitian eigendecomposition; a single
/// application for any t, no time slicing.
class DensePropagator {
 public:
  explicit DensePropagator(const JointOperator& h) {
    if (hermiticity_residual(h.matrix) > 1e-12) {
      throw std::invalid_argument("DensePropagator: Hamiltonian is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("DensePropagator: eigendecomposition failed");
    }
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  JointState propagate(const JointState& state0, double t) const {
    if (state0.dim() != vectors_.rows()) {
      throw std::invalid_argument("DensePropagator: state dimension mismatch");
    }
    CVector c = vectors_.adjoint() * state0.vector();
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -energies_[k] * t);
    return JointState(vectors_ * c);
  }

  CMatrix unitary(double t) const {
    CVector phases(energies_.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, -energies_[k] * t);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  Eigen::VectorXd energies_;
  CMatrix vectors_;
};

inline JointState dense_propagate(const JointOperator& h, const JointState& state0, double t) {
  return DensePropagator(h).propagate(state0, t);
}

}  // namespace susyjc
