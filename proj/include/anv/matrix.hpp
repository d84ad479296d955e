#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "anv/common.hpp"

namespace anv {

/// Small dense real matrix (row-major). The congruence sets live in
/// GL(n) for n <= 4 or so; no linear-algebra library is warranted.
class MatrixD {
 public:
  MatrixD() = default;
  MatrixD(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

  static MatrixD identity(std::size_t n) {
    MatrixD m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  MatrixD operator*(const MatrixD& o) const {
    MatrixD r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  /// Determinant by partial-pivot LU.
  double det() const {
    MatrixD lu = *this;
    double d = 1.0;
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n_; ++r)
        if (std::abs(lu(r, c)) > std::abs(lu(p, c))) p = r;
      if (lu(p, c) == 0.0) return 0.0;
      if (p != c) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(lu(p, j), lu(c, j));
        d = -d;
      }
      d *= lu(c, c);
      for (std::size_t r = c + 1; r < n_; ++r) {
        double f = lu(r, c) / lu(c, c);
        for (std::size_t j = c; j < n_; ++j) lu(r, j) -= f * lu(c, j);
      }
    }
    return d;
  }

  /// Gauss-Jordan inverse; throws SingularMatrixError when |det| <= 1e-12.
  MatrixD inverse() const {
    if (std::abs(det()) <= 1e-12) throw SingularMatrixError("matrix is numerically singular");
    MatrixD aug = *this;
    MatrixD inv = identity(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n_; ++r)
        if (std::abs(aug(r, c)) > std::abs(aug(p, c))) p = r;
      if (p != c)
        for (std::size_t j = 0; j < n_; ++j) {
          std::swap(aug(p, j), aug(c, j));
          std::swap(inv(p, j), inv(c, j));
        }
      double piv = aug(c, c);
      for (std::size_t j = 0; j < n_; ++j) {
        aug(c, j) /= piv;
        inv(c, j) /= piv;
      }
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == c) continue;
        double f = aug(r, c);
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
          aug(r, j) -= f * aug(c, j);
          inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

}  // namespace anv
