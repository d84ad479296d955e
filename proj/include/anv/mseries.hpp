#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "anv/common.hpp"
#include "anv/gamma_factors.hpp"
#include "anv/whittaker.hpp"

namespace anv {

/// Data of the M-Whittaker power series at pivot s with parameter tuple tau
/// of dimension s + 1.
struct MSeriesSpec {
  LanglandsParams tau;  // dimension s + 1
  int s = 1;            // pivot, 1 or 2
  int k_max = 24;       // truncation order per coordinate

  void validate() const {
    if (s != 1 && s != 2) throw PreconditionError("MSeriesSpec: pivot s must be 1 or 2");
    if (tau.n() != static_cast<std::size_t>(s + 1))
      throw PreconditionError("MSeriesSpec: tau must have dimension s + 1");
    if (k_max < 8) throw PreconditionError("MSeriesSpec: k_max must be >= 8");
    for (cplx t : tau.mu)
      if (t.real() < -1e-12) throw PreconditionError("MSeriesSpec: requires Re(tau_i) >= 0");
  }
};

namespace detail {

// Holomorphic atoms of the expanded coefficient product. Both come from the
// Gamma_R functional equation
//   Gamma_R(s) Gamma_R(-s) = (-1)^{m-1} (2 pi / s) Gamma_R(s+2m) Gamma_R(2-s-2m),
// which turns each gamma-quotient into an entire expression evaluated through
// the reciprocal gamma function.
//
//   g1(x,k) = Gamma_R(x-2k) / (Gamma_R(x) Gamma_R(-x))
//           = (-1)^{k+1} x pi^{k-x/2} / (2 Gamma(1+k-x/2))
inline cplx mseries_g1(cplx x, int k) {
  double sign = (k % 2 == 0) ? -1.0 : 1.0;
  return sign * x * std::exp((static_cast<double>(k) - 0.5 * x) * kLogPi) *
         rgamma(1.0 + static_cast<double>(k) - 0.5 * x) * 0.5;
}

//   g2(x,ki,kj) = Gamma_R(x-2kj) / (Gamma_R(x+2(ki-kj)) Gamma_R(-x-2(ki-kj)))
//              = (-1)^{ki+1} (x + 2(ki-kj)) pi^{kj-x/2} / (2 Gamma(1+kj-x/2))
inline cplx mseries_g2(cplx x, int ki, int kj) {
  double sign = (ki % 2 == 0) ? -1.0 : 1.0;
  return sign * (x + 2.0 * (ki - kj)) *
         std::exp((static_cast<double>(kj) - 0.5 * x) * kLogPi) *
         rgamma(1.0 + static_cast<double>(kj) - 0.5 * x) * 0.5;
}

}  // namespace detail

/// Series coefficient P_k(tau) in the expanded holomorphic product form;
/// finite for every admissible argument (no 0/0 evaluation).
inline cplx p_coeff(const MSeriesSpec& spec, const std::vector<int>& k) {
  spec.validate();
  if (k.size() != static_cast<std::size_t>(spec.s))
    throw PreconditionError("p_coeff: k must have dimension s");
  for (int kj : k)
    if (kj < 0) throw PreconditionError("p_coeff: k must be nonnegative");
  const auto& tau = spec.tau.mu;
  const int s = spec.s;
  cplx out = 1.0;
  for (int j = 0; j < s; ++j) out *= gamma_R_residue(k[j]);
  for (int j = 0; j < s; ++j)
    for (int i = j + 1; i <= s; ++i) out *= detail::mseries_g1(tau[i] - tau[j], k[j]);
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) out *= detail::mseries_g2(tau[i] - tau[j], k[i], k[j]);
  return out;
}

/// Raw-quotient coefficient (regularized L over c-products); valid only at
/// regular tau where no denominator sits on a pole. This is the second route
/// of the coefficient two-path identity.
inline cplx p_coeff_raw(const MSeriesSpec& spec, const std::vector<int>& k) {
  spec.validate();
  LanglandsParams shifted;
  for (int j = 0; j < spec.s; ++j) shifted.mu.push_back(spec.tau.mu[j] + 2.0 * k[j]);
  cplx num = L_reg(spec.tau, shifted);
  cplx den = c_func(0.0, spec.tau) * c_func(0.0, spec.tau.negated()) *
             c_func(0.0, shifted) * c_func(0.0, shifted.negated());
  return num / den;
}

struct MSeriesValue {
  cplx value{};
  double tail = 0.0;      // boundary-shell bound on the dropped terms
  double max_term = 0.0;  // largest single |term|, for cancellation-aware residuals
};

/// M_tau(a) = sum_k P_k(tau) W'_{(tau)^s + 2k}(a^s / a_{s+1}).
/// The inner W' is the GL(1) power for s = 1 and the delta-normalized GL(2)
/// value for s = 2.
inline MSeriesValue m_series(const MSeriesSpec& spec, const DiagonalPoint& a,
                             double tol = 1e-10,
                             const WhittakerNormalization& norm = default_normalization()) {
  spec.validate();
  if (a.n() != static_cast<std::size_t>(spec.s + 1))
    throw PreconditionError("m_series: a must have dimension s + 1");
  MSeriesValue out;
  KahanSumC acc;
  double shell = 0.0;
  if (spec.s == 1) {
    const double ly = std::log(a.a[0] / a.a[1]);
    for (int k = 0; k <= spec.k_max; ++k) {
      cplx term = p_coeff(spec, {k}) * std::exp((spec.tau.mu[0] + 2.0 * k) * ly);
      if (k == spec.k_max) {
        shell += std::abs(term);
        break;
      }
      acc.add(term);
      out.max_term = std::max(out.max_term, std::abs(term));
    }
  } else {
    const double b1 = a.a[0] / a.a[2], b2 = a.a[1] / a.a[2];
    const double x = kTwoPi * b1 / b2;
    const double lb = std::log(b1 * b2);
    cplx half_sum = 0.5 * (spec.tau.mu[0] + spec.tau.mu[1]);
    cplx half_diff = 0.5 * (spec.tau.mu[0] - spec.tau.mu[1]);
    // K-order depends only on k1 - k2.
    std::vector<cplx> kbank(2 * spec.k_max + 1);
    for (int d = -spec.k_max; d <= spec.k_max; ++d)
      kbank[d + spec.k_max] = bessel_K(half_diff + static_cast<double>(d), x);
    for (int k1 = 0; k1 <= spec.k_max; ++k1)
      for (int k2 = 0; k2 <= spec.k_max; ++k2) {
        cplx wprime = norm.d2 * std::exp((half_sum + static_cast<double>(k1 + k2)) * lb) *
                      kbank[k1 - k2 + spec.k_max];
        cplx term = p_coeff(spec, {k1, k2}) * wprime;
        if (k1 == spec.k_max || k2 == spec.k_max) {
          shell += std::abs(term);
          continue;
        }
        acc.add(term);
        out.max_term = std::max(out.max_term, std::abs(term));
      }
  }
  out.value = acc.value();
  out.tail = 3.0 * shell;
  if (out.tail > tol * std::max(out.max_term, std::abs(out.value)))
    throw TruncationError("m_series: truncation insufficient for requested tolerance",
                          out.tail);
  return out;
}

/// Both sides of the GL(2) decomposition at pivot 1:
///   lhs = W'_mu(a) / (c(mu) c(-mu)),
///   rhs = kappa a_2^{mu1+mu2} (M_mu(a) + M_{swap mu}(a)).
struct DecomposeResult {
  cplx lhs{};
  cplx rhs{};
  double residual() const { return std::abs(lhs - rhs) / std::abs(lhs); }
};

inline DecomposeResult decompose_gl2(const LanglandsParams& mu, const DiagonalPoint& a,
                                     int k_max = 24,
                                     const WhittakerNormalization& norm = default_normalization()) {
  if (mu.n() != 2 || a.n() != 2) throw PreconditionError("decompose_gl2: needs GL(2) data");
  if (a.a[0] / a.a[1] > 1.0 + 1e-12)
    throw PreconditionError("decompose_gl2: decomposition regime needs a1/a2 <= 1");
  for (cplx t : mu.mu)
    if (t.real() <= 0.0 || t.real() > 0.05)
      throw PreconditionError("decompose_gl2: requires Re(mu_i) in (0, 0.05]");
  if (std::abs(mu.mu[0].real() - mu.mu[1].real()) < 5e-3)
    throw PreconditionError("decompose_gl2: real parts must be distinct by >= 5e-3");

  DecomposeResult r;
  r.lhs = whittaker_gl2_normalized(mu, a, norm) * detail::rgamma_r(mu.mu[0] - mu.mu[1]) *
          detail::rgamma_r(mu.mu[1] - mu.mu[0]);
  MSeriesSpec fwd{mu, 1, k_max};
  MSeriesSpec swp{LanglandsParams{{mu.mu[1], mu.mu[0]}}, 1, k_max};
  cplx msum = m_series(fwd, a, 1e-9, norm).value + m_series(swp, a, 1e-9, norm).value;
  r.rhs = norm.kappa2 * detail::pow_pos(a.a[1], mu.sum()) * msum;
  return r;
}

/// Cancellation-aware residual |M_tau(a)| / max |term| for the pivot-2 series.
/// Under the congruence hypothesis tau_1 = tau_2 mod 2Z the series vanishes
/// identically; off the hypothesis the residual stays O(1).
inline double m_vanishing(const LanglandsParams& tau, const DiagonalPoint& a, int k_max = 16,
                          const WhittakerNormalization& norm = default_normalization()) {
  if (tau.n() != 3 || a.n() != 3) throw PreconditionError("m_vanishing: needs s = 2 data");
  MSeriesSpec spec{tau, 2, k_max};
  MSeriesValue v = m_series(spec, a, 1e30, norm);  // tail reported, never throws here
  return std::abs(v.value) / std::max(v.max_term, 1e-280);
}

/// Partial Ordering at the Pivot: smallest s in [1, n] with
/// max(a_1..a_s) <= min(1, min(a_{s+1}..a_n)); s = n uses the empty-min
/// convention (condition max <= 1). Returns nullopt when no pivot exists.
inline std::optional<int> pop_classify(const DiagonalPoint& a) {
  const int n = static_cast<int>(a.n());
  double prefix_max = 0.0;
  std::vector<double> suffix_min(n + 1);
  suffix_min[n] = 1.0;
  for (int i = n - 1; i >= 0; --i) suffix_min[i] = std::min(suffix_min[i + 1], a.a[i]);
  for (int s = 1; s <= n; ++s) {
    prefix_max = std::max(prefix_max, a.a[s - 1]);
    if (prefix_max <= std::min(1.0, suffix_min[s])) return s;
  }
  return std::nullopt;
}

}  // namespace anv
