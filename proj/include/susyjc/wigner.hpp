#pragma once

// Reduced field density matrix and the displaced-parity Wigner function
//   W(alpha) = c * sum_k (-1)^k <k| D^dag(alpha) rho D(alpha) |k>,
// D(alpha) = exp(alpha a^dag - alpha^* a), with c = 1/pi (paper convention,
// the vacuum integrates to 1/2) or c = 2/pi (standard, integrates to 1).
//
// D(alpha) is exponentiated on the truncated space. With alpha = r e^{i phi},
// D(alpha) = R(phi) exp(r (a^dag - a)) R(phi)^dag where R(phi) = e^{i phi n};
// a single eigendecomposition of i(a^dag - a) then serves every point.

#include "susyjc/dynamics.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace susyjc {

enum class WignerConvention { paper, standard };

inline double wigner_prefactor(WignerConvention convention) {
  return convention == WignerConvention::paper ? 1.0 / kPi : 2.0 / kPi;
}

/// Trace-one Hermitian positive semidefinite field density matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 2) {
      throw std::invalid_argument("DensityMatrix must be square with N >= 1");
    }
    if (hermiticity_residual(m_) > 1e-12) throw std::invalid_argument("DensityMatrix not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > 1e-10) {
      throw std::invalid_argument("DensityMatrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m_);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
      throw std::invalid_argument("DensityMatrix has negative eigenvalues");
    }
    weights_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  static DensityMatrix pure(const FieldState& field) {
    return DensityMatrix(field.amplitudes() * field.amplitudes().adjoint());
  }

  const CMatrix& matrix() const { return m_; }
  int n_trunc() const { return static_cast<int>(m_.rows()) - 1; }
  double purity() const { return (m_ * m_).trace().real(); }

  /// Spectral decomposition rho = sum_j w_j |v_j><v_j|.
  const Eigen::VectorXd& weights() const { return weights_; }
  const CMatrix& vectors() const { return vectors_; }

 private:
  CMatrix m_;
  Eigen::VectorXd weights_;
  CMatrix vectors_;
};

/// Tr_qubit |psi><psi| = |e-block><e-block| + |g-block><g-block|, after
/// normalizing psi.
inline DensityMatrix reduced_field_density(const JointState& state) {
  const double norm_sq = state.vector().squaredNorm();
  const CVector e = state.excited_block();
  const CVector g = state.ground_block();
  CMatrix rho = (e * e.adjoint() + g * g.adjoint()) / norm_sq;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

/// Rectangular window in the complex alpha plane.
struct PhaseSpaceGrid {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
  int points_per_axis = 2;

  void validate() const {
    if (!(re_min < re_max) || !(im_min < im_max)) {
      throw std::invalid_argument("PhaseSpaceGrid bounds must be ordered");
    }
    if (points_per_axis < 2) throw std::invalid_argument("PhaseSpaceGrid needs >= 2 points per axis");
  }
  double re_step() const { return (re_max - re_min) / (points_per_axis - 1); }
  double im_step() const { return (im_max - im_min) / (points_per_axis - 1); }
  double re(int i) const { return re_min + i * re_step(); }
  double im(int j) const { return im_min + j * im_step(); }
};

/// Displacement-support guard: |alpha|^2 + 6|alpha| + 9 < N.
inline bool wigner_support_ok(Complex alpha, int n_trunc) {
  const double r = std::abs(alpha);
  return r * r + 6.0 * r + 9.0 < n_trunc;
}

/// W sampled on a grid, row-major with the real part as the row index.
struct WignerGrid {
  PhaseSpaceGrid grid;
  std::vector<double> values;
  double cell_area = 0.0;
  double integral = 0.0;  // trapezoidal quadrature of W over the window

  double at(int i_re, int j_im) const {
    return values[static_cast<std::size_t>(i_re) * grid.points_per_axis + j_im];
  }
  double min() const { return *std::min_element(values.begin(), values.end()); }
  double max() const { return *std::max_element(values.begin(), values.end()); }
  /// Grid point of the global maximum.
  Complex argmax() const {
    const auto k = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
    return {grid.re(k / grid.points_per_axis), grid.im(k % grid.points_per_axis)};
  }
};

class WignerFunction {
 public:
  explicit WignerFunction(const DensityMatrix& rho,
                          WignerConvention convention = WignerConvention::paper)
      : n_trunc_(rho.n_trunc()), prefactor_(wigner_prefactor(convention)) {
    for (Eigen::Index j = 0; j < rho.weights().size(); ++j) {
      if (std::abs(rho.weights()[j]) > 1e-15) {
        weights_.push_back(rho.weights()[j]);
        states_.push_back(rho.vectors().col(j));
      }
    }
    const auto ops = ladder_matrices(n_trunc_);
    const CMatrix k = Complex(0.0, 1.0) * (ops.a_dag.matrix - ops.a.matrix);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(k);
    generator_values_ = solver.eigenvalues();
    generator_vectors_ = solver.eigenvectors();
  }

  int n_trunc() const { return n_trunc_; }

  /// Throws TruncationError outside the displacement-support guard.
  double at(Complex alpha) const {
    if (!wigner_support_ok(alpha, n_trunc_)) {
      throw TruncationError("Wigner point |alpha| = " + std::to_string(std::abs(alpha)) +
                            " too close to the Fock cutoff N = " + std::to_string(n_trunc_));
    }
    const double r = std::abs(alpha);
    const double phi = std::arg(alpha);
    const int dim = n_trunc_ + 1;
    // exp(r (a^dag - a))^dag = V e^{i r Lambda} V^dag
    CVector phases(dim);
    for (int l = 0; l < dim; ++l) phases[l] = std::polar(1.0, r * generator_values_[l]);

    NeumaierSum w;
    CVector x(dim);
    for (std::size_t j = 0; j < states_.size(); ++j) {
      for (int k = 0; k < dim; ++k) x[k] = std::polar(1.0, -phi * k) * states_[j][k];
      const CVector y = phases.cwiseProduct(generator_vectors_.adjoint() * x);
      const CVector z = generator_vectors_ * y;
      NeumaierSum parity;
      for (int k = 0; k < dim; ++k) parity += (k % 2 == 0 ? 1.0 : -1.0) * std::norm(z[k]);
      w += weights_[j] * parity.value();
    }
    return prefactor_ * w.value();
  }

  /// Every grid point must pass the support guard. Points are split across
  /// `threads` workers; the result does not depend on the split.
  WignerGrid on_grid(const PhaseSpaceGrid& grid, int threads = 1) const {
    grid.validate();
    const int p = grid.points_per_axis;
    for (double re : {grid.re_min, grid.re_max}) {
      for (double im : {grid.im_min, grid.im_max}) {
        if (!wigner_support_ok({re, im}, n_trunc_)) {
          throw TruncationError("Wigner grid corner outside the Fock support guard");
        }
      }
    }
    WignerGrid out{grid, std::vector<double>(static_cast<std::size_t>(p) * p), 0.0, 0.0};
    auto work = [&](int row_begin, int row_end) {
      for (int i = row_begin; i < row_end; ++i) {
        for (int j = 0; j < p; ++j) out.values[static_cast<std::size_t>(i) * p + j] = at({grid.re(i), grid.im(j)});
      }
    };
    threads = std::clamp(threads, 1, p);
    if (threads == 1) {
      work(0, p);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(work, w * p / threads, (w + 1) * p / threads);
      for (auto& th : pool) th.join();
    }
    out.cell_area = grid.re_step() * grid.im_step();
    NeumaierSum integral;
    for (int i = 0; i < p; ++i) {
      const double wi = (i == 0 || i == p - 1) ? 0.5 : 1.0;
      for (int j = 0; j < p; ++j) {
        const double wj = (j == 0 || j == p - 1) ? 0.5 : 1.0;
        integral += wi * wj * out.at(i, j);
      }
    }
    out.integral = integral.value() * out.cell_area;
    return out;
  }

 private:
  int n_trunc_;
  double prefactor_;
  std::vector<double> weights_;
  std::vector<CVector> states_;
  Eigen::VectorXd generator_values_;
  CMatrix generator_vectors_;
};

inline double wigner_at(const DensityMatrix& rho, Complex alpha,
                        WignerConvention convention = WignerConvention::paper) {
  return WignerFunction(rho, convention).at(alpha);
}

inline WignerGrid wigner_grid(const DensityMatrix& rho, const PhaseSpaceGrid& grid,
                              WignerConvention convention = WignerConvention::paper,
                              int threads = 1) {
  return WignerFunction(rho, convention).on_grid(grid, threads);
}

}  // namespace susyjc
