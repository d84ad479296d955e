#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace anv {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kLogPi = 1.1447298858494001741434273513530587;
inline constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A gamma-type factor was evaluated at (or too close to) a pole.
class PoleError : public Error {
 public:
  explicit PoleError(const std::string& what, cplx where = {})
      : Error(what), location(where) {}
  cplx location;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Truncated contour tail exceeds the requested tolerance.
class TailError : public Error {
 public:
  explicit TailError(const std::string& what, double tail_bound = 0.0)
      : Error(what), tail(tail_bound) {}
  double tail;
};

/// Series truncation error larger than the requested tolerance.
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& what, double tail_bound = 0.0)
      : Error(what), tail(tail_bound) {}
  double tail;
};

/// Caller violated a documented precondition (convergence regime, ordering, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// Neumaier compensated accumulator; fixed summation order keeps results
/// deterministic regardless of how callers schedule work.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanSumC {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

inline double sqr(double x) { return x * x; }

}  // namespace anv
