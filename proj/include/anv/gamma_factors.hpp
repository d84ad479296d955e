#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "anv/common.hpp"
#include "anv/numerics.hpp"

namespace anv {

/// Ordered tuple of complex spectral parameters of a spherical principal
/// series; the universal input to the gamma/conductor/Whittaker code.
struct LanglandsParams {
  std::vector<cplx> mu;

  LanglandsParams() = default;
  LanglandsParams(std::initializer_list<cplx> m) : mu(m) {}
  explicit LanglandsParams(std::vector<cplx> m) : mu(std::move(m)) {}

  std::size_t n() const { return mu.size(); }

  bool tempered(double tol = 1e-12) const {
    for (cplx m : mu)
      if (std::abs(m.real()) > tol) return false;
    return true;
  }
  /// max |Re mu_i|; the theta of theta-temperedness.
  double theta_bound() const {
    double t = 0.0;
    for (cplx m : mu) t = std::max(t, std::abs(m.real()));
    return t;
  }
  cplx sum() const {
    cplx s = 0.0;
    for (cplx m : mu) s += m;
    return s;
  }
  LanglandsParams negated() const {
    LanglandsParams r;
    r.mu.reserve(mu.size());
    for (cplx m : mu) r.mu.push_back(-m);
    return r;
  }
};

/// Differences nu_i - nu'_j split into the pole set A (nonpositive even
/// integers, contributing residues) and the regular set B.
struct RegularizedLSplit {
  std::vector<cplx> poles;
  std::vector<cplx> regular;
};

inline constexpr double kPoleDetectTol = 1e-9;

/// epsilon(1/2) of an even spherical principal series over R. The value 1 is
/// an assumption constant: only |gamma| and gamma-ratios feed the results
/// downstream, and a ramified/odd extension can replace it in one place.
inline constexpr cplx kEpsilonSpherical{1.0, 0.0};

namespace detail {

inline bool is_gamma_r_pole(cplx s, double tol = kPoleDetectTol) {
  if (std::abs(s.imag()) > tol) return false;
  double k = std::round(s.real() / 2.0);
  return k <= 0.25 && std::abs(s.real() - 2.0 * k) <= tol;
}

/// log Gamma_R(s) = log(pi^{-s/2} Gamma(s/2)).
inline cplx log_gamma_r(cplx s) {
  if (is_gamma_r_pole(s)) throw PoleError("Gamma_R pole at nonpositive even integer", s);
  return log_gamma(0.5 * s) - 0.5 * s * kLogPi;
}

/// Entire reciprocal of Gamma_R.
inline cplx rgamma_r(cplx s) { return rgamma(0.5 * s) * std::exp(0.5 * s * kLogPi); }

}  // namespace detail

/// Gamma_R(s) = pi^{-s/2} Gamma(s/2). Poles at s in {0, -2, -4, ...}.
inline cplx gamma_R(cplx s) { return std::exp(detail::log_gamma_r(s)); }

/// Residue of Gamma_R at s = -2k:  2 (-pi)^k / k!.
inline cplx gamma_R_residue(int k) {
  double v = 2.0;
  for (int j = 1; j <= k; ++j) v *= -kPi / j;
  return cplx(v, 0.0);
}

/// c(s, mu) = prod_{i<j} Gamma_R(s + mu_i - mu_j); empty product for n = 1.
inline cplx c_func(cplx s, const LanglandsParams& mu) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < mu.n(); ++i)
    for (std::size_t j = i + 1; j < mu.n(); ++j) {
      cplx arg = s + mu.mu[i] - mu.mu[j];
      if (detail::is_gamma_r_pole(arg))
        throw PoleError("c_func: Gamma_R pole at pair (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ")",
                        arg);
      out *= gamma_R(arg);
    }
  return out;
}

inline RegularizedLSplit classify_differences(const LanglandsParams& nu,
                                              const LanglandsParams& nu_prime) {
  RegularizedLSplit split;
  for (cplx a : nu.mu)
    for (cplx b : nu_prime.mu) {
      cplx d = a - b;
      if (detail::is_gamma_r_pole(d))
        split.poles.push_back(d);
      else
        split.regular.push_back(d);
    }
  return split;
}

/// Regularized product L(nu, nu'): residues over the pole set times Gamma_R
/// over the regular set.
inline cplx L_reg(const LanglandsParams& nu, const LanglandsParams& nu_prime) {
  if (nu.n() <= nu_prime.n())
    throw PreconditionError("L_reg: dim(nu) must exceed dim(nu')");
  RegularizedLSplit split = classify_differences(nu, nu_prime);
  cplx out = 1.0;
  for (cplx p : split.poles) {
    int k = static_cast<int>(std::llround(-p.real() / 2.0));
    out *= gamma_R_residue(k);
  }
  for (cplx b : split.regular) out *= gamma_R(b);
  return out;
}

/// C(pi) = prod_j (1 + |mu_j|) >= 1.
inline double analytic_conductor(const LanglandsParams& mu) {
  double c = 1.0;
  for (cplx m : mu.mu) c *= 1.0 + std::abs(m);
  return c;
}

/// L(s, pi_mu) = prod_i Gamma_R(s + mu_i).
inline cplx L_factor(cplx s, const LanglandsParams& mu) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < mu.n(); ++i) {
    cplx arg = s + mu.mu[i];
    if (detail::is_gamma_r_pole(arg))
      throw PoleError("L_factor: Gamma_R pole at index " + std::to_string(i + 1), arg);
    out *= gamma_R(arg);
  }
  return out;
}

namespace detail {

inline cplx log_L_factor(cplx s, const LanglandsParams& mu, const char* who) {
  cplx out = 0.0;
  for (std::size_t i = 0; i < mu.n(); ++i) {
    cplx arg = s + mu.mu[i];
    if (is_gamma_r_pole(arg))
      throw PoleError(std::string(who) + ": Gamma_R pole at index " + std::to_string(i + 1),
                      arg);
    out += log_gamma_r(arg);
  }
  return out;
}

}  // namespace detail

/// gamma(s, pi_mu) = eps * L(1-s, pi_{-mu}) / L(s, pi_mu), eps = 1 for the
/// spherical even principal series. Dual parameters are -mu.
inline cplx gamma_factor(cplx s, const LanglandsParams& mu) {
  cplx num = detail::log_L_factor(1.0 - s, mu.negated(), "gamma_factor numerator");
  cplx den = detail::log_L_factor(s, mu, "gamma_factor denominator (zero of gamma)");
  return kEpsilonSpherical * std::exp(num - den);
}

/// Rankin-Selberg parameter tuple {mu_Pi,i + mu_pi,j} (principal-series
/// tensor convention).
inline LanglandsParams rs_params(const LanglandsParams& mu_Pi, const LanglandsParams& mu_pi) {
  LanglandsParams out;
  out.mu.reserve(mu_Pi.n() * mu_pi.n());
  for (cplx a : mu_Pi.mu)
    for (cplx b : mu_pi.mu) out.mu.push_back(a + b);
  return out;
}

/// Theta(s, Pi) = C(Pi)^{-s} / gamma(1/2 + s, Pi); holomorphic on
/// Re(s) > -1/2 + theta(Pi).
inline cplx theta(cplx s, const LanglandsParams& mu_Pi) {
  double th = mu_Pi.theta_bound();
  if (th >= 0.5) throw PreconditionError("theta: representation is not theta-tempered");
  if (s.real() <= -0.5 + th)
    throw PoleError("theta: s outside the holomorphy half-plane", s);
  double logC = std::log(analytic_conductor(mu_Pi));
  cplx lgam = detail::log_L_factor(0.5 - s, mu_Pi.negated(), "theta numerator") -
              detail::log_L_factor(0.5 + s, mu_Pi, "theta denominator");
  return std::exp(-s * logC - lgam);
}

/// Theta(mu, Pi) = C(Pi)^{-sum mu} gamma(1/2, Pi x dual(pi_mu)).
inline cplx theta_tuple(const LanglandsParams& mu, const LanglandsParams& mu_Pi) {
  for (cplx m : mu.mu)
    if (m.real() < -1e-12)
      throw PreconditionError("theta_tuple: requires Re(mu_i) >= 0");
  if (mu_Pi.theta_bound() >= 0.5)
    throw PreconditionError("theta_tuple: Pi is not theta-tempered");
  LanglandsParams nu = rs_params(mu_Pi, mu.negated());
  cplx lgam = detail::log_L_factor(0.5, nu.negated(), "theta_tuple numerator") -
              detail::log_L_factor(0.5, nu, "theta_tuple denominator");
  double logC = std::log(analytic_conductor(mu_Pi));
  return std::exp(-mu.sum() * logC + lgam);
}

}  // namespace anv
