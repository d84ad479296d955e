#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "anv/common.hpp"
#include "anv/gamma_factors.hpp"
#include "anv/numerics.hpp"
#include "anv/quadrature.hpp"

namespace anv {

/// Positive diagonal torus element a = (a_1, ..., a_n).
struct DiagonalPoint {
  std::vector<double> a;

  DiagonalPoint() = default;
  DiagonalPoint(std::initializer_list<double> v) : a(v) { validate(); }
  explicit DiagonalPoint(std::vector<double> v) : a(std::move(v)) { validate(); }

  void validate() const {
    for (double x : a)
      if (!(x > 0.0)) throw DomainError("DiagonalPoint: entries must be positive");
  }
  std::size_t n() const { return a.size(); }
};

/// delta(a)^{1/2} with delta(a) = prod_{j<k} |a_j / a_k| (Borel modular character).
inline double delta_half(const DiagonalPoint& a) {
  double d = 1.0;
  for (std::size_t j = 0; j < a.n(); ++j)
    for (std::size_t k = j + 1; k < a.n(); ++k) d *= a.a[j] / a.a[k];
  return std::sqrt(d);
}

/// Calibrated normalization constants. d2 makes Stade's norm identity
/// ||W_mu||^2 = |c(1,mu)|^2 hold on GL(2); kappa2 is the decomposition
/// constant at pivot s = 1; d3 fixes the GL(3) recursion normalization.
struct WhittakerNormalization {
  double d2 = 1.5957691216057308;     // = sqrt(8/pi), frozen from calibrate_gl2_norm
  double d3 = 1.0;                    // GL(3) recursion value is used ratio-only
  double kappa2 = 0.3989422804014327; // = d2/4, frozen against the Bessel closed form
};

inline const WhittakerNormalization& default_normalization() {
  static const WhittakerNormalization n{};
  return n;
}

namespace detail {

inline cplx pow_pos(double base, cplx expo) {
  return std::exp(expo * std::log(base));  // base > 0, real logarithm
}

}  // namespace detail

/// GL(2) spherical Whittaker function in the Bessel closed form,
/// W_mu(a) = d2 (a1/a2)^{1/2} (a1 a2)^{(mu1+mu2)/2} K_{(mu1-mu2)/2}(2 pi a1/a2).
inline cplx whittaker_gl2(const LanglandsParams& mu, const DiagonalPoint& a,
                          const WhittakerNormalization& norm = default_normalization()) {
  if (mu.n() != 2 || a.n() != 2)
    throw PreconditionError("whittaker_gl2: needs GL(2) data");
  const double y = a.a[0] / a.a[1];
  cplx half_sum = 0.5 * (mu.mu[0] + mu.mu[1]);
  cplx order = 0.5 * (mu.mu[0] - mu.mu[1]);
  return norm.d2 * std::sqrt(y) * detail::pow_pos(a.a[0] * a.a[1], half_sum) *
         bessel_K(order, kTwoPi * y);
}

/// delta^{-1/2}-normalized value W'_mu(a).
inline cplx whittaker_gl2_normalized(const LanglandsParams& mu, const DiagonalPoint& a,
                                     const WhittakerNormalization& norm = default_normalization()) {
  return whittaker_gl2(mu, a, norm) / delta_half(a);
}

// ---------------------------------------------------------------------------
// Stade-norm calibration
// ---------------------------------------------------------------------------

/// ||W_{(it,-it)}||^2 reduced to the torus integral int_0^infty
/// |W(diag(y,1))|^2 dy/y, evaluated with the scaled kernel so the
/// exponentially small range keeps full relative accuracy.
inline double stade_norm_sq_gl2(double t, double d2) {
  // |W|^2 dy/y = d2^2 K_{it}(2 pi y)^2 dy = d2^2 e^{-pi t} khat(t, 2 pi y)^2 dy
  const double vlo = std::log(2.5e-10 * std::max(t, 1.0));
  const double vhi = std::log(8.5);
  const double h = std::min(0.25, kPi / (4.0 * std::max(1.0, 2.0 * t)));
  const int panels = static_cast<int>(std::ceil((vhi - vlo) / h));
  std::vector<double> xs, ws;
  gl_grid(vlo, vhi, panels, 16, xs, ws);
  KahanSum acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double y = std::exp(xs[i]);
    ScaledBesselKit kit(kTwoPi * y);
    double kh = kit(t);
    acc.add(ws[i] * kh * kh * y);
  }
  return d2 * d2 * std::exp(-kPi * t) * acc.value();
}

/// Fit the constant d2 enforcing ||W_mu||^2 = |c(1,mu)|^2 at mu = (it,-it)
/// across the grid; errors if the fitted constant drifts by more than 1e-5.
inline WhittakerNormalization calibrate_gl2_norm(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw PreconditionError("calibrate_gl2_norm: empty grid");
  for (double t : t_grid)
    if (!(t > 0.0)) throw PreconditionError("calibrate_gl2_norm: grid values must be positive");
  std::vector<double> fits;
  for (double t : t_grid) {
    double raw = stade_norm_sq_gl2(t, 1.0);
    double target = std::norm(gamma_R(cplx(1.0, 2.0 * t)));
    fits.push_back(std::sqrt(target / raw));
  }
  double lo = *std::min_element(fits.begin(), fits.end());
  double hi = *std::max_element(fits.begin(), fits.end());
  double mean = 0.0;
  for (double f : fits) mean += f;
  mean /= fits.size();
  if ((hi - lo) / mean > 1e-5)
    throw CalibrationError("calibrate_gl2_norm: fitted constant varies by > 1e-5 across grid");
  WhittakerNormalization out;
  out.d2 = mean;
  out.kappa2 = mean / 4.0;
  out.d3 = 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Jacquet integral (convergent-regime cross-check)
// ---------------------------------------------------------------------------

/// GL(2) Jacquet integral, absolutely convergent for Re(mu1 - mu2) > 0.
/// The unipotent line is bent into the lower half-plane
/// (u = theta - i|theta|/2) so the e(-v u) factor decays exponentially.
inline cplx jacquet_gl2(const LanglandsParams& mu, const DiagonalPoint& a,
                        double height = 0.0,
                        const WhittakerNormalization& norm = default_normalization()) {
  if (mu.n() != 2 || a.n() != 2) throw PreconditionError("jacquet_gl2: needs GL(2) data");
  cplx d = mu.mu[0] - mu.mu[1];
  if (!(d.real() > 0.0))
    throw PreconditionError("jacquet_gl2: requires Re(mu1 - mu2) > 0 (convergence regime)");
  const double v = a.a[0] / a.a[1];
  if (height <= 0.0) height = 50.0 / (kPi * v) + 8.0;
  cplx s_exp = 0.5 * (1.0 + d);
  auto reduced = [&](double theta, double slope) -> cplx {
    cplx u(theta, slope * std::abs(theta));
    cplx w = 1.0 + u * u;
    return std::exp(-s_exp * std::log(w)) * std::exp(cplx(0.0, -kTwoPi * v) * u);
  };
  const double hstep = std::min(0.5, 1.0 / (4.0 * v));
  const int panels = std::max(8, static_cast<int>(std::ceil(height / hstep)));
  cplx dzp(1.0, -0.5), dzm(1.0, 0.5);
  // theta > 0 leg (du = (1 - i/2) dtheta) and theta < 0 leg (du = (1 + i/2) dtheta).
  cplx pos = gl_composite([&](double th) { return reduced(th, -0.5); }, 0.0, height, panels, 16);
  cplx neg = gl_composite([&](double th) { return reduced(th, 0.5); }, -height, 0.0, panels, 16);
  cplx integral = dzp * pos + dzm * neg;
  cplx j = detail::pow_pos(a.a[0] * a.a[1], 0.5 * (mu.mu[0] + mu.mu[1])) *
           detail::pow_pos(v, 0.5 * (1.0 - d)) * integral;
  return gamma_R(1.0 + d) * (0.5 * norm.d2) * j;
}

// ---------------------------------------------------------------------------
// Mellin-Barnes routes
// ---------------------------------------------------------------------------

/// GL(2) Whittaker value from the one-line Mellin-Barnes integral
/// kappa a2^{nu1+nu2} int_(sigma) (a1/a2)^{s} Gamma_R(1/2+nu1-s)
/// Gamma_R(1/2+nu2-s) ds/(2 pi i).
inline cplx stade_gl2_mellin_barnes(const LanglandsParams& nu, const DiagonalPoint& a,
                                    const VerticalContour& contour,
                                    const WhittakerNormalization& norm = default_normalization()) {
  if (nu.n() != 2 || a.n() != 2)
    throw PreconditionError("stade_gl2_mellin_barnes: needs GL(2) data");
  for (cplx m : nu.mu)
    if (m.real() < -1e-12)
      throw PreconditionError("stade_gl2_mellin_barnes: requires Re(nu_i) >= 0");
  check_contour(contour);
  for (cplx m : nu.mu) {
    double re_arg = 0.5 + m.real() - contour.sigma;
    double k = std::round(re_arg / 2.0);
    if (k <= 0.25 && std::abs(re_arg - 2.0 * k) < 1e-3)
      throw PoleError("stade_gl2_mellin_barnes: contour passes within 1e-3 of a Gamma_R pole",
                      cplx(re_arg, 0.0));
  }
  const double ly = std::log(a.a[0] / a.a[1]);
  auto f = [&](cplx s) -> cplx {
    return std::exp(s * ly + detail::log_gamma_r(0.5 + nu.mu[0] - s) +
                    detail::log_gamma_r(0.5 + nu.mu[1] - s));
  };
  ContourResult r = contour_integral(f, contour);
  double scale = std::abs(r.value);
  if (r.tail > 1e-9 * std::max(scale, 1e-280))
    throw TailError("stade_gl2_mellin_barnes: contour tail not negligible", r.tail);
  return norm.kappa2 * detail::pow_pos(a.a[1], nu.mu[0] + nu.mu[1]) * r.value;
}

/// GL(3) spherical Whittaker value by the Kontorovich-Lebedev-type recursion
/// over the GL(2) spectral parameters. The two inner parameters are split
/// into the central one z = (nu'_1+nu'_2)/2 and the PGL(2) one
/// u = (nu'_1-nu'_2)/2; both run over vertical lines described by `contour`.
struct Gl3Value {
  cplx w{};            // recursion value, delta^{1/2}-dressed
  cplx w_normalized{}; // W' variant
  double tail = 0.0;
  bool pole_warning = false;
};

inline Gl3Value whittaker_gl3(const LanglandsParams& nu, const DiagonalPoint& a,
                              const VerticalContour& contour,
                              const WhittakerNormalization& norm = default_normalization()) {
  if (nu.n() != 3 || a.n() != 3) throw PreconditionError("whittaker_gl3: needs GL(3) data");
  for (cplx m : nu.mu)
    if (std::abs(m.real()) >= 0.5)
      throw PreconditionError("whittaker_gl3: requires |Re(nu_i)| < 1/2 (shifted regime)");
  check_contour(contour);

  Gl3Value out;
  const double b1 = a.a[0] / a.a[2], b2 = a.a[1] / a.a[2];
  const double y = b1 / b2;
  const double lnB = std::log(b1 * b2);
  const double sig = contour.sigma;
  for (cplx m : nu.mu) {
    for (double comb : {m.real() - 2.0 * sig, m.real()}) {
      double k = std::round(comb / 2.0);
      if (k <= 0.25 && std::abs(comb - 2.0 * k) < 1e-3) out.pole_warning = true;
    }
  }

  const int panels = std::max(2, contour.nodes / 16);
  std::vector<double> xs, ws;
  gl_grid(-contour.height, contour.height, panels, 16, xs, ws);

  // K_u(2 pi y) per u-node.
  std::vector<cplx> ku(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    ku[i] = bessel_K(cplx(sig, xs[i]), kTwoPi * y);

  const double cutoff = 0.9 * contour.height;
  KahanSumC acc;
  double edge = 0.0;
  for (std::size_t iz = 0; iz < xs.size(); ++iz) {
    cplx z(sig, xs[iz]);
    cplx zfac = std::exp(z * lnB);
    for (std::size_t iu = 0; iu < xs.size(); ++iu) {
      cplx u(sig, xs[iu]);
      cplx lg = 0.0;
      bool dead = false;
      for (cplx m : nu.mu) {
        cplx a1 = m - z - u, a2 = m - z + u;
        if (detail::is_gamma_r_pole(a1) || detail::is_gamma_r_pole(a2)) {
          dead = true;
          break;
        }
        lg += detail::log_gamma_r(a1) + detail::log_gamma_r(a2);
      }
      if (dead) continue;
      if (lg.real() < -720.0) continue;
      cplx term = ws[iz] * ws[iu] * zfac * ku[iu] * detail::rgamma_r(2.0 * u) *
                  detail::rgamma_r(-2.0 * u) * std::exp(lg);
      acc.add(term);
      if (std::abs(xs[iz]) >= cutoff || std::abs(xs[iu]) >= cutoff) edge += std::abs(term);
    }
  }
  const double measure = 2.0 / (kTwoPi * kTwoPi);  // Jacobian of (nu'_1,nu'_2) -> (z,u)
  cplx pref = norm.d3 * norm.d2 * measure * detail::pow_pos(a.a[2], nu.sum());
  out.w_normalized = pref * acc.value();
  out.tail = std::abs(pref) * 3.0 * edge;
  out.w = delta_half(a) * out.w_normalized;
  return out;
}

}  // namespace anv
