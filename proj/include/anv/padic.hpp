#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "anv/common.hpp"

namespace anv {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class DominanceError : public Error {
 public:
  using Error::Error;
};

/// Exact multivariate Laurent polynomial: map from integer exponent vectors
/// to rational coefficients. All arithmetic is exact.
class LaurentPoly {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, Rational>;

  LaurentPoly() = default;
  explicit LaurentPoly(int nvars) : nvars_(nvars) {}

  static LaurentPoly constant(int nvars, const Rational& c) {
    LaurentPoly p(nvars);
    if (c != 0) p.terms_[Exponents(nvars, 0)] = c;
    return p;
  }
  static LaurentPoly monomial(int nvars, const Exponents& e, const Rational& c = 1) {
    LaurentPoly p(nvars);
    if (c != 0) p.terms_[e] = c;
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const Rational& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPoly operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  LaurentPoly operator-(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
  }
  LaurentPoly operator*(const LaurentPoly& o) const {
    LaurentPoly r(nvars_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) {
        Exponents e(nvars_);
        for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }

  Rational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return coefficient(Exponents(nvars_, 0)); }

  /// Exact division by (x_i - x_j); throws if the division leaves a remainder.
  LaurentPoly divide_by_difference(int i, int j) const {
    if (is_zero()) return LaurentPoly(nvars_);
    // Shift so the x_i-degrees are nonnegative, then do synthetic division by
    // the root x_i = x_j in the Laurent ring of the other variables.
    int dmin = 0, dmax = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      dmin = first ? e[i] : std::min(dmin, e[i]);
      dmax = first ? e[i] : std::max(dmax, e[i]);
      first = false;
    }
    // Coefficients of x_i^d, d = 0..dmax-dmin, as Laurent polys with e[i] = 0.
    std::vector<LaurentPoly> coef(dmax - dmin + 1, LaurentPoly(nvars_));
    for (const auto& [e, c] : terms_) {
      Exponents r = e;
      int d = e[i] - dmin;
      r[i] = 0;
      coef[d].add_term(r, c);
    }
    Exponents xj(nvars_, 0);
    xj[j] = 1;
    LaurentPoly mult = monomial(nvars_, xj);
    std::vector<LaurentPoly> q(coef.size() > 0 ? coef.size() - 1 : 0, LaurentPoly(nvars_));
    LaurentPoly carry(nvars_);
    for (int d = static_cast<int>(coef.size()) - 1; d >= 1; --d) {
      LaurentPoly cur = coef[d] + carry;
      q[d - 1] = cur;
      carry = cur * mult;
    }
    LaurentPoly rem = coef[0] + carry;
    if (!rem.is_zero())
      throw DomainError("LaurentPoly: division by (x_i - x_j) is not exact");
    LaurentPoly out(nvars_);
    for (std::size_t d = 0; d < q.size(); ++d) {
      Exponents sh(nvars_, 0);
      sh[i] = static_cast<int>(d) + dmin;
      out = out + q[d] * monomial(nvars_, sh);
    }
    return out;
  }

  /// Evaluate at a complex point (used for unit-circle Satake parameters).
  cplx eval(const std::vector<cplx>& x) const {
    cplx out = 0.0;
    for (const auto& [e, c] : terms_) {
      cplx m = static_cast<double>(c.convert_to<double>());
      for (int i = 0; i < nvars_; ++i) {
        if (e[i] >= 0)
          for (int k = 0; k < e[i]; ++k) m *= x[i];
        else
          for (int k = 0; k < -e[i]; ++k) m /= x[i];
      }
      out += m;
    }
    return out;
  }

  /// Sum of coefficients = evaluation at (1, ..., 1), exact.
  Rational eval_at_ones() const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

 private:
  int nvars_ = 0;
  Terms terms_;
};

/// Non-archimedean representation data: residue cardinality q, conductor
/// exponent c(Pi), and the unit-modulus central epsilon value.
struct PadicRepData {
  double q = 2.0;
  int conductor_exponent = 0;
  cplx epsilon_center{1.0, 0.0};

  void validate() const {
    if (!(q >= 2.0)) throw PreconditionError("PadicRepData: q must be >= 2");
    if (conductor_exponent < 0) throw PreconditionError("PadicRepData: c(Pi) >= 0");
    if (std::abs(std::abs(epsilon_center) - 1.0) > 1e-12)
      throw PreconditionError("PadicRepData: |epsilon(1/2)| must be 1");
  }
  double conductor() const { return std::pow(q, conductor_exponent); }
};

/// prod_{i<j} (alpha_i - alpha_j), exact.
inline LaurentPoly vandermonde(int n) {
  if (n < 1) throw PreconditionError("vandermonde: n >= 1");
  LaurentPoly p = LaurentPoly::constant(n, 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LaurentPoly::Exponents ei(n, 0), ej(n, 0);
      ei[i] = 1;
      ej[j] = 1;
      p = p * (LaurentPoly::monomial(n, ei) - LaurentPoly::monomial(n, ej));
    }
  return p;
}

namespace detail {

/// det( alpha_j ^ theta_i ), expanded over permutations (n <= 4 here).
inline LaurentPoly alternant(const std::vector<int>& theta, int n) {
  LaurentPoly out(n);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    int sgn = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) sgn = -sgn;
    LaurentPoly::Exponents e(n, 0);
    for (int i = 0; i < n; ++i) e[perm[i]] += theta[i];
    out.add_term(e, sgn);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline bool dominant(const std::vector<int>& m) {
  for (std::size_t i = 0; i + 1 < m.size(); ++i)
    if (m[i] < m[i + 1]) return false;
  return true;
}

}  // namespace detail

/// Schur Laurent polynomial s_m = det((alpha_j^{m_i + n - i})) / vandermonde,
/// exact bialternant quotient. Requires dominance m_1 >= ... >= m_n.
inline LaurentPoly schur(const std::vector<int>& m, int n) {
  if (static_cast<int>(m.size()) != n) throw PreconditionError("schur: m must have length n");
  if (!detail::dominant(m)) throw DominanceError("schur: m is not dominant");
  std::vector<int> theta(n);
  for (int i = 0; i < n; ++i) theta[i] = m[i] + n - (i + 1);
  LaurentPoly num = detail::alternant(theta, n);
  LaurentPoly out = num;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out = out.divide_by_difference(i, j);
  return out;
}

/// Shintani value of the spherical Whittaker function at diag(varpi^m):
/// delta^{1/2} * s_m(alpha) on dominant m and 0 otherwise, with
/// delta^{1/2} = prod_i q^{-m_i (n + 1 - 2i)/2}.
inline cplx shintani(const std::vector<int>& m, const std::vector<cplx>& alpha,
                     const PadicRepData& rep) {
  rep.validate();
  const int n = static_cast<int>(m.size());
  if (alpha.size() != m.size()) throw PreconditionError("shintani: dimension mismatch");
  for (cplx a : alpha)
    if (std::abs(std::abs(a) - 1.0) > 1e-9)
      throw PreconditionError("shintani: Satake parameters must have |alpha_i| = 1");
  if (!detail::dominant(m)) return 0.0;
  double half_power = 0.0;  // exponent of q^{1/2}
  for (int i = 1; i <= n; ++i) half_power -= m[i - 1] * (n + 1 - 2 * i);
  return std::pow(rep.q, 0.5 * half_power) * schur(m, n).eval(alpha);
}

/// Exact torus integral int_{(S^1)^n} det((alpha_j^{m_i+n-i-1})) *
/// prod_{i>j} (alpha_i - alpha_j) dalpha: the constant term of the expanded
/// Laurent product (each circle integral kills every nonzero exponent).
inline Rational torus_integral(const std::vector<int>& m, int n) {
  if (static_cast<int>(m.size()) != n)
    throw PreconditionError("torus_integral: m must have length n");
  if (!detail::dominant(m)) throw DominanceError("torus_integral: m is not dominant");
  std::vector<int> theta(n);
  for (int i = 0; i < n; ++i) theta[i] = m[i] + n - (i + 1) - 1;
  // prod_{i>j}(alpha_i - alpha_j) = (-1)^{n(n-1)/2} vandermonde
  LaurentPoly v = vandermonde(n);
  int sgn = ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1;
  LaurentPoly prod = detail::alternant(theta, n) * v;
  return prod.constant_term() * sgn;
}

/// Same value computed with the opposite fold order of the polynomial
/// product; exact arithmetic must make both routes bit-identical.
inline Rational torus_integral_alt(const std::vector<int>& m, int n) {
  if (static_cast<int>(m.size()) != n)
    throw PreconditionError("torus_integral: m must have length n");
  if (!detail::dominant(m)) throw DominanceError("torus_integral: m is not dominant");
  std::vector<int> theta(n);
  for (int i = 0; i < n; ++i) theta[i] = m[i] + n - (i + 1) - 1;
  LaurentPoly prod = detail::alternant(theta, n);
  for (int i = n - 1; i >= 0; --i)
    for (int j = n - 1; j > i; --j) {
      LaurentPoly::Exponents ei(n, 0), ej(n, 0);
      ei[i] = 1;
      ej[j] = 1;
      prod = prod * (LaurentPoly::monomial(n, ej) - LaurentPoly::monomial(n, ei));
    }
  return prod.constant_term();
}

struct ScanEntry {
  std::vector<int> m;
  Rational value;
  /// delta^{1/2}(diag(varpi^m)) = q^{qpower/2}
  int qpower = 0;
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  bool has_threshold = false;
  int threshold_m1 = 0;  // largest m_1 with a nonzero value in the window
};

/// Exhaustive exact scan of the torus integral over dominant m with
/// m_1 <= m1_max and m_n >= -12; reports the exact m_1 threshold beyond
/// which every value in the window vanishes.
inline ScanResult heart_vanishing_scan(int n, int m1_max) {
  if (n != 2 && n != 3) throw PreconditionError("heart_vanishing_scan: n must be 2 or 3");
  if (m1_max > 12) throw PreconditionError("heart_vanishing_scan: m1_max <= 12");
  const int lo = -12;
  ScanResult out;
  std::vector<int> m(n);
  auto record = [&](const std::vector<int>& mv) {
    ScanEntry e;
    e.m = mv;
    e.value = torus_integral(mv, n);
    for (int i = 1; i <= n; ++i) e.qpower -= mv[i - 1] * (n + 1 - 2 * i);
    if (e.value != 0) {
      if (!out.has_threshold || mv[0] > out.threshold_m1) out.threshold_m1 = mv[0];
      out.has_threshold = true;
    }
    out.entries.push_back(std::move(e));
  };
  if (n == 2) {
    for (int m1 = lo; m1 <= m1_max; ++m1)
      for (int m2 = lo; m2 <= m1; ++m2) record({m1, m2});
  } else {
    for (int m1 = lo; m1 <= m1_max; ++m1)
      for (int m2 = lo; m2 <= m1; ++m2)
        for (int m3 = lo; m3 <= m2; ++m3) record({m1, m2, m3});
  }
  return out;
}

/// epsilon(1/2 - beta, Pi) = C(Pi)^{beta} epsilon(1/2, Pi) = q^{c(Pi) beta} eps.
inline cplx epsilon_shift(const PadicRepData& rep, cplx beta) {
  rep.validate();
  return std::exp(beta * (static_cast<double>(rep.conductor_exponent) * std::log(rep.q))) *
         rep.epsilon_center;
}

}  // namespace anv
