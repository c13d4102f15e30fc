#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace susyjc {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Base of the library's error hierarchy. Each subclass maps onto one CLI
/// exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Physically degenerate input: a state annihilated by the intertwiner (the
/// SUSY singlet), a vanishing normalization, an undefined ratio.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// The truncated Fock space is too small for the requested state or point.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A validation check did not meet its threshold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Neumaier compensated summation.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += (std::abs(sum_) >= std::abs(x)) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  NeumaierSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexNeumaierSum {
 public:
  ComplexNeumaierSum& operator+=(Complex x) {
    re_.add(x.real());
    im_.add(x.imag());
    return *this;
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  NeumaierSum re_, im_;
};

/// max_ij |M_ij - conj(M_ji)|
inline double hermiticity_residual(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace susyjc
