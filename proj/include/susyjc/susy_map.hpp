#pragma once

// The intertwiner A = diag(a^dag, a) between H_JC(w_a) and H_AJC(w_a - 2 w_c),
// the JC -> AJC state map, transformed observables A^dag O A, and the
// singlet/doublet structure of the symmetries A^dag A and A A^dag.
//
// Exact identities are asserted on the interior: Fock indices 0..N-2 on both
// qubit blocks, away from the hard cutoff.

#include "susyjc/dynamics.hpp"

#include <algorithm>
#include <vector>

namespace susyjc {

/// Squared image norm below which A psi is treated as the zero vector.
inline constexpr double kSingletThreshold = 1e-14;

inline JointOperator intertwiner(int n_trunc) {
  const auto ops = ladder_matrices(n_trunc);
  const CMatrix zero = CMatrix::Zero(n_trunc + 1, n_trunc + 1);
  return joint_from_blocks(ops.a_dag.matrix, zero, zero, ops.a.matrix);
}

/// A psi, applied without forming the matrix.
inline JointState apply_intertwiner(const JointState& psi) {
  const int n_trunc = psi.n_trunc();
  CVector e = CVector::Zero(n_trunc + 1);
  CVector g = CVector::Zero(n_trunc + 1);
  for (int m = 1; m <= n_trunc; ++m) e[m] = std::sqrt(static_cast<double>(m)) * psi.excited(m - 1);
  for (int m = 0; m < n_trunc; ++m) {
    g[m] = std::sqrt(static_cast<double>(m + 1)) * psi.ground(m + 1);
  }
  return JointState::from_blocks(e, g);
}

struct SusyMapResult {
  JointState mapped_state;  // A psi / |A psi|
  double norm_sq;           // |A psi|^2 before normalization
};

/// JC state -> normalized AJC state. Throws DegenerateError when psi lies in
/// the kernel of A (the singlet |g,0>).
inline SusyMapResult susy_map_state(const JointState& psi) {
  JointState image = apply_intertwiner(psi);
  const double norm_sq = image.vector().squaredNorm();
  if (norm_sq < kSingletThreshold) {
    throw DegenerateError("state is annihilated by the intertwiner (SUSY singlet)");
  }
  return {JointState(image.vector() / std::sqrt(norm_sq)), norm_sq};
}

/// A^dag O A
inline JointOperator transform_observable(const JointOperator& op) {
  const CMatrix a = intertwiner(op.n_trunc()).matrix;
  return {a.adjoint() * op.matrix * a};
}

namespace detail {

// Joint-space indices of |e,n> and |g,n> with n <= N-2.
inline std::vector<Eigen::Index> interior_indices(int n_trunc) {
  std::vector<Eigen::Index> idx;
  for (int n = 0; n <= n_trunc - 2; ++n) idx.push_back(n);
  for (int n = 0; n <= n_trunc - 2; ++n) idx.push_back(n_trunc + 1 + n);
  return idx;
}

inline CMatrix interior_block(const CMatrix& m, int n_trunc) {
  const auto idx = interior_indices(n_trunc);
  return m(idx, idx);
}

}  // namespace detail

/// Largest |element| of m restricted to the interior projector.
inline double interior_residual(const CMatrix& m, int n_trunc) {
  if (n_trunc < 2) throw std::invalid_argument("interior needs n_trunc >= 2");
  return detail::interior_block(m, n_trunc).cwiseAbs().maxCoeff();
}

/// Interior max |A H_JC(jc) - H_AJC(ajc) A|. Pass jc.ajc_partner() as `ajc`
/// for the true partner; anything else is a negative control.
inline double intertwining_residual(const ModelParams& jc, const ModelParams& ajc, int n_trunc) {
  const CMatrix a = intertwiner(n_trunc).matrix;
  const CMatrix h_jc = build_jc_hamiltonian(jc, n_trunc).matrix;
  const CMatrix h_ajc = build_ajc_hamiltonian(ajc, n_trunc).matrix;
  return interior_residual(a * h_jc - h_ajc * a, n_trunc);
}

inline double intertwining_residual(const ModelParams& jc, int n_trunc) {
  return intertwining_residual(jc, jc.ajc_partner(), n_trunc);
}

/// Interior max |H_JC(jc) A^dag - A^dag H_AJC(ajc)|.
inline double reverse_intertwining_residual(const ModelParams& jc, const ModelParams& ajc,
                                            int n_trunc) {
  const CMatrix a_dag = intertwiner(n_trunc).matrix.adjoint();
  const CMatrix h_jc = build_jc_hamiltonian(jc, n_trunc).matrix;
  const CMatrix h_ajc = build_ajc_hamiltonian(ajc, n_trunc).matrix;
  return interior_residual(h_jc * a_dag - a_dag * h_ajc, n_trunc);
}

inline double reverse_intertwining_residual(const ModelParams& jc, int n_trunc) {
  return reverse_intertwining_residual(jc, jc.ajc_partner(), n_trunc);
}

/// A^dag A is the symmetry of H_JC, A A^dag that of H_AJC.
enum class SymmetrySide { jc, ajc };

struct SymmetryLevel {
  double value;
  int multiplicity;
  CMatrix eigenvectors;  // columns, embedded in the full joint space
};

inline CMatrix symmetry_operator(int n_trunc, SymmetrySide side) {
  const CMatrix a = intertwiner(n_trunc).matrix;
  return side == SymmetrySide::jc ? CMatrix(a.adjoint() * a) : CMatrix(a * a.adjoint());
}

/// Eigenvalues of the symmetry on the interior, clustered into degenerate
/// levels. Levels above N-2 have a partner outside the interior and are
/// dropped.
inline std::vector<SymmetryLevel> symmetry_spectrum(int n_trunc,
                                                    SymmetrySide side = SymmetrySide::jc) {
  if (n_trunc < 2) throw std::invalid_argument("symmetry_spectrum needs n_trunc >= 2");
  const auto idx = detail::interior_indices(n_trunc);
  const CMatrix inner = symmetry_operator(n_trunc, side)(idx, idx);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(inner);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const CMatrix& vectors = solver.eigenvectors();
  const Eigen::Index full_dim = 2 * (n_trunc + 1);

  std::vector<SymmetryLevel> levels;
  Eigen::Index k = 0;
  while (k < values.size()) {
    Eigen::Index end = k + 1;
    while (end < values.size() && std::abs(values[end] - values[k]) < 1e-6) ++end;
    const double value = values.segment(k, end - k).mean();
    if (value <= n_trunc - 2 + 0.5) {
      CMatrix embedded = CMatrix::Zero(full_dim, end - k);
      for (Eigen::Index c = 0; c < end - k; ++c) {
        for (std::size_t r = 0; r < idx.size(); ++r) embedded(idx[r], c) = vectors(r, k + c);
      }
      levels.push_back({value, static_cast<int>(end - k), std::move(embedded)});
    }
    k = end;
  }
  return levels;
}

/// Interior max |[A^dag A, H_JC(w_a)]| (jc side) or |[A A^dag, H_AJC(w_a - 2w_c)]|.
inline double symmetry_commutator_residual(const ModelParams& jc, int n_trunc, SymmetrySide side) {
  const CMatrix s = symmetry_operator(n_trunc, side);
  const CMatrix h = side == SymmetrySide::jc ? build_jc_hamiltonian(jc, n_trunc).matrix
                                             : build_ajc_hamiltonian(jc.ajc_partner(), n_trunc).matrix;
  return interior_residual(s * h - h * s, n_trunc);
}

}  // namespace susyjc
