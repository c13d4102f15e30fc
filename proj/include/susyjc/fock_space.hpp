#pragma once

// Single-mode truncated Fock space: ladder operators and field-state
// constructors. The basis is |0>, ..., |N> with a hard cutoff a^dag|N> = 0.

#include "susyjc/common.hpp"

#include <cstdio>
#include <string>
#include <utility>

namespace susyjc {

/// Largest tail mass sum_{n>N} |C_n|^2 a constructor accepts.
inline constexpr double kMaxTailMass = 1e-10;

/// Field amplitudes C_0..C_N, normalized over the truncated basis.
class FieldState {
 public:
  /// Renormalizes `amplitudes` (length N+1, N >= 1).
  static FieldState from_amplitudes(CVector amplitudes) {
    if (amplitudes.size() < 2) {
      throw std::invalid_argument("FieldState needs n_trunc >= 1");
    }
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DegenerateError("FieldState amplitudes have zero or non-finite norm");
    }
    amplitudes /= norm;
    return FieldState(std::move(amplitudes));
  }

  int n_trunc() const { return static_cast<int>(amplitudes_.size()) - 1; }
  const CVector& amplitudes() const { return amplitudes_; }

  /// C_n, or zero for n outside 0..N.
  Complex operator[](int n) const {
    return (n < 0 || n > n_trunc()) ? Complex{} : amplitudes_[n];
  }

 private:
  explicit FieldState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  CVector amplitudes_;
};

/// Dense (N+1)x(N+1) operator on the truncated Fock space.
struct FieldOperator {
  CMatrix matrix;
  int n_trunc() const { return static_cast<int>(matrix.rows()) - 1; }
};

struct LadderOperators {
  FieldOperator a;
  FieldOperator a_dag;
  FieldOperator n;
};

inline FieldState make_fock_state(int m, int n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("n_trunc must be >= 1");
  if (m < 0 || m > n_trunc) {
    throw std::out_of_range("Fock index " + std::to_string(m) + " outside 0.." +
                            std::to_string(n_trunc));
  }
  CVector c = CVector::Zero(n_trunc + 1);
  c[m] = 1.0;
  return FieldState::from_amplitudes(std::move(c));
}

namespace detail {

// Unnormalized coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..last,
// carried in log-magnitude so large |alpha| does not underflow C_0.
inline CVector coherent_amplitudes(Complex alpha, int last) {
  CVector c = CVector::Zero(last + 1);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double log_r = std::log(r);
  const double phase = std::arg(alpha);
  double log_mag = -0.5 * r * r;
  for (int n = 0; n <= last; ++n) {
    if (n > 0) log_mag += log_r - 0.5 * std::log(static_cast<double>(n));
    c[n] = std::polar(std::exp(log_mag), n * phase);
  }
  return c;
}

// sum_{n>N} weight(n) |C_n|^2 of the analytic coherent distribution, summed
// until terms are negligible past the Poisson peak.
template <typename Weight>
double coherent_tail_mass(Complex alpha, int n_trunc, Weight weight) {
  const double r2 = std::norm(alpha);
  if (r2 == 0.0) return 0.0;
  const double log_r2 = std::log(r2);
  // log of e^{-r2} r2^n / n! at n = N+1
  double log_p = -r2 + (n_trunc + 1) * log_r2 - std::lgamma(n_trunc + 2.0);
  NeumaierSum tail;
  for (int n = n_trunc + 1; n < n_trunc + 1 + 100000; ++n) {
    if (n > n_trunc + 1) log_p += log_r2 - std::log(static_cast<double>(n));
    const double p = std::exp(log_p);
    tail += weight(n) * p;
    if (n > r2 && p < 1e-30) break;
  }
  return tail.value();
}

// e^{i vartheta}, snapped to exactly +-1 at vartheta = 0, pi so even and odd
// cats carry exact parity zeros.
inline Complex cat_phase(double vartheta) {
  double reduced = std::remainder(vartheta, 2.0 * kPi);
  if (std::abs(reduced) < 1e-15) return 1.0;
  if (std::abs(std::abs(reduced) - kPi) < 1e-15) return -1.0;
  return std::polar(1.0, vartheta);
}

inline std::string tail_message(const char* what, double tail, int n_trunc) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s tail mass %.3e beyond N=%d exceeds %.0e", what, tail, n_trunc,
                kMaxTailMass);
  return buf;
}

}  // namespace detail

/// Coherent state |alpha>, renormalized over the truncated basis. Throws
/// TruncationError when the analytic tail mass beyond N exceeds kMaxTailMass.
inline FieldState make_coherent_state(Complex alpha, int n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("n_trunc must be >= 1");
  const double tail = detail::coherent_tail_mass(alpha, n_trunc, [](int) { return 1.0; });
  if (tail > kMaxTailMass) {
    throw TruncationError(detail::tail_message("coherent state", tail, n_trunc));
  }
  return FieldState::from_amplitudes(detail::coherent_amplitudes(alpha, n_trunc));
}

/// (|alpha> + e^{i vartheta}|-alpha>) / N_vartheta. Even cat at vartheta = 0,
/// odd cat at pi, Yurke-Stoler at pi/2.
inline FieldState make_cat_state(Complex alpha, double vartheta, int n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("n_trunc must be >= 1");
  const double norm_sq = 2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha)) * std::cos(vartheta));
  if (!(norm_sq > 1e-14)) {
    throw DegenerateError("cat state normalization vanishes (odd cat with alpha -> 0)");
  }
  const Complex phase = detail::cat_phase(vartheta);
  auto parity_factor = [&](int n) { return 1.0 + phase * ((n % 2 == 0) ? 1.0 : -1.0); };

  const double tail = detail::coherent_tail_mass(
      alpha, n_trunc, [&](int n) { return std::norm(parity_factor(n)) / norm_sq; });
  if (tail > kMaxTailMass) {
    throw TruncationError(detail::tail_message("cat state", tail, n_trunc));
  }
  CVector c = detail::coherent_amplitudes(alpha, n_trunc);
  for (int n = 0; n <= n_trunc; ++n) c[n] *= parity_factor(n);
  return FieldState::from_amplitudes(std::move(c));
}

inline LadderOperators ladder_matrices(int n_trunc) {
  if (n_trunc < 1) throw std::invalid_argument("n_trunc must be >= 1");
  const int dim = n_trunc + 1;
  CMatrix a = CMatrix::Zero(dim, dim);
  CMatrix n = CMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  for (int k = 0; k < dim; ++k) n(k, k) = k;
  CMatrix a_dag = a.adjoint();
  return {FieldOperator{std::move(a)}, FieldOperator{std::move(a_dag)}, FieldOperator{std::move(n)}};
}

/// <n0> = sum n |C_n|^2
inline double mean_photon_number(const FieldState& state) {
  NeumaierSum sum;
  const auto& c = state.amplitudes();
  for (int n = 1; n < c.size(); ++n) sum += n * std::norm(c[n]);
  return sum.value();
}

}  // namespace susyjc
