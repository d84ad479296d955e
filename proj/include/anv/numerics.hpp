#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "anv/common.hpp"
#include "anv/quadrature.hpp"

namespace anv {

// ---------------------------------------------------------------------------
// log-gamma and friends
// ---------------------------------------------------------------------------

namespace detail {

// Godfrey's 15-term Lanczos coefficients, g = 607/128.
inline constexpr double kLanczosG = 4.7421875;
inline constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5, 1.5808870322491248884e-4,
    -2.1026444172410488319e-4,  2.1743961811521264320e-4,  -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5, 3.6899182659531622704e-6};

inline cplx lanczos_sum(cplx z) {
  cplx s(kLanczos[0], 0.0);
  for (int k = 1; k < 15; ++k) s += kLanczos[k] / (z + static_cast<double>(k - 1));
  return s;
}

/// log(sin(pi z)) on the branch that keeps log_gamma's reflection continuous.
/// Large |Im z| is handled through the dominant exponential so nothing
/// overflows or wraps.
inline cplx logsin_pi(cplx z) {
  if (z.imag() < 0.0) return std::conj(logsin_pi(std::conj(z)));
  if (z.imag() < 8.0) {
    // Factor out the zero pattern explicitly: sin(pi z) = (-1)^k sin(pi(z-k)).
    double k = std::floor(z.real() + 0.5);
    cplx r = std::log(std::sin(kPi * (z - k)));
    return r - cplx(0.0, k * kPi);  // log((-1)^k) continued through the upper plane
  }
  // sin(pi z) = -e^{-i pi z} (1 - e^{2 pi i z}) / (2i), |e^{2 pi i z}| small.
  cplx w = std::exp(cplx(0.0, kTwoPi) * z);
  return cplx(0.0, -kPi) * z + std::log(1.0 - w) - cplx(std::log(2.0), 0.0) +
         cplx(0.0, kPi / 2.0);
}

}  // namespace detail

inline bool near_nonpositive_integer(cplx s, double tol = 1e-9) {
  if (std::abs(s.imag()) > tol) return false;
  double r = std::round(s.real());
  return r <= 0.5 && std::abs(s.real() - r) <= tol && r > -1e15;
}

/// Principal-branch log of Euler's gamma function. Relative accuracy is a
/// couple of ulps of the Lanczos fit (~1e-15) on |s| <= 100.
inline cplx log_gamma(cplx s) {
  if (near_nonpositive_integer(s, 1e-13))
    throw PoleError("log_gamma: pole at a nonpositive integer", s);
  if (s.real() < 0.5) {
    // Reflection, branch-matched to the continuous log_gamma.
    return cplx(kLogPi, 0.0) - detail::logsin_pi(s) - log_gamma(1.0 - s);
  }
  cplx t = s + (detail::kLanczosG - 0.5);
  return 0.5 * kLog2Pi + (s - 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(s));
}

inline cplx gamma_fn(cplx s) { return std::exp(log_gamma(s)); }

/// Entire reciprocal 1/Gamma; exactly zero at the poles of Gamma.
inline cplx rgamma(cplx s) {
  if (s.real() < 0.5) {
    if (near_nonpositive_integer(s, 0.0)) return 0.0;
    // 1/Gamma(s) = sin(pi s) Gamma(1-s) / pi
    return std::sin(kPi * s) * std::exp(log_gamma(1.0 - s)) / kPi;
  }
  return std::exp(-log_gamma(s));
}

// ---------------------------------------------------------------------------
// Vertical contours
// ---------------------------------------------------------------------------

/// Truncated vertical line Re(s) = sigma, |Im(s)| <= height, sampled with
/// `nodes` Gauss-Legendre points.
struct VerticalContour {
  double sigma = 0.0;
  double height = 30.0;
  int nodes = 320;
};

inline void check_contour(const VerticalContour& c) {
  if (c.nodes < 8) throw std::invalid_argument("VerticalContour: nodes must be >= 8");
  if (!(c.height > 0.0))
    throw TailError("VerticalContour: height is not positive, tail not negligible");
}

struct ContourResult {
  cplx value{};
  double tail = 0.0;  // crude bound from the outermost 10% of nodes
};

/// \int_{sigma - iT}^{sigma + iT} f(s) ds / (2 pi i) with the tail estimated
/// from the outermost decile of nodes.
template <typename F>
ContourResult contour_integral(F&& f, const VerticalContour& c) {
  check_contour(c);
  const int panels = std::max(1, c.nodes / 16);
  std::vector<double> xs, ws;
  gl_grid(-c.height, c.height, panels, 16, xs, ws);
  KahanSumC acc;
  double edge = 0.0;
  const double cutoff = 0.9 * c.height;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cplx v = f(cplx(c.sigma, xs[i]));
    acc.add(ws[i] * v);
    if (std::abs(xs[i]) >= cutoff) edge += ws[i] * std::abs(v);
  }
  ContourResult r;
  r.value = acc.value() / kTwoPi;
  r.tail = 3.0 * edge / kTwoPi;
  return r;
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind, complex order
// ---------------------------------------------------------------------------

namespace detail {

/// Direct integral representation K_nu(x) = int_0^infty e^{-x cosh u} cosh(nu u) du.
/// Relative accuracy degrades like e^{pi |Im nu|/2 - x} from cancellation, so
/// callers switch to the Mellin-Barnes route when that factor is large.
inline cplx bessel_k_cosh(cplx nu, double x) {
  const double rn = std::abs(nu.real()), in = std::abs(nu.imag());
  // Upper limit: e^{-x cosh u + rn u} below ~1e-21 relative to the peak.
  double umax = 1.0;
  for (int it = 0; it < 60; ++it) {
    double next = std::log(2.0 * (50.0 + rn * umax + std::abs(std::log(x)) + 5.0) / x + 2.0);
    if (std::abs(next - umax) < 1e-12) break;
    umax = next;
  }
  umax = std::max(umax, 1.0);
  // Peak of the integrand (for real-part-dominated orders).
  double lpeak = 0.0;
  if (rn > 0.0 && rn / x > std::sinh(1e-8)) {
    double ustar = std::asinh(rn / x);
    lpeak = std::max(0.0, -x * std::cosh(ustar) + rn * ustar);
  }
  if (lpeak - x > 600.0) throw DomainError("bessel_K: result overflows double range");
  const double h = std::min(0.5, 2.0 / (1.0 + in));
  const int panels = std::max(4, static_cast<int>(std::ceil(umax / h)));
  auto f = [&](double u) -> cplx {
    return std::exp(cplx(-x * std::cosh(u) - lpeak, 0.0)) * std::cosh(nu * u);
  };
  cplx v = gl_composite(f, 0.0, umax, panels, 16);
  return v * std::exp(lpeak);
}

/// Mellin-Barnes route: K_nu(x) = (1/2pi i) int 2^{s-2} Gamma((s+nu)/2)
/// Gamma((s-nu)/2) x^{-s} ds on Re s = sigma > |Re nu|. Evaluated in log
/// space so purely-imaginary orders keep full relative accuracy.
inline cplx bessel_k_mb(cplx nu, double x) {
  const double t = std::abs(nu.imag());
  const double sigma = std::abs(nu.real()) + 1.0;
  const double T = t + 34.0;
  const double lx = std::log(x);
  const double h = std::min(0.5, kTwoPi / (4.0 * (1.0 + std::abs(lx))));
  const int panels = std::max(8, static_cast<int>(std::ceil(2.0 * T / h)));
  const double logscale = -kPi * t / 4.0;  // coarse magnitude reference
  std::vector<double> xs, ws;
  gl_grid(-T, T, panels, 8, xs, ws);
  KahanSumC acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cplx s(sigma, xs[i]);
    cplx lg = (s - 2.0) * std::log(2.0) + log_gamma(0.5 * (s + nu)) +
              log_gamma(0.5 * (s - nu)) - s * lx - logscale;
    if (lg.real() < -720.0) continue;
    acc.add(ws[i] * std::exp(lg));
  }
  return acc.value() * std::exp(logscale) / kTwoPi;
}

inline bool bessel_use_mb(cplx nu, double x) {
  const double t = std::abs(nu.imag());
  return t >= 4.0 && x < kPi * t / 2.0 - 6.0;
}

}  // namespace detail

/// K_nu(x) for x > 0. Uses the defining cosh-integral; switches to a
/// Mellin-Barnes evaluation where the cosh-integral loses relative accuracy
/// (small x, large imaginary order).
inline cplx bessel_K(cplx order, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_K: requires x > 0");
  if (detail::bessel_use_mb(order, x)) return detail::bessel_k_mb(order, x);
  return detail::bessel_k_cosh(order, x);
}

/// e^{pi t / 2} K_{it}(x) for real t, evaluated without exponential
/// cancellation via the rotated contour u -> u + i(pi/2 - delta). Used by
/// the spectral-transform kernels where t runs far up the imaginary axis.
class ScaledBesselKit {
 public:
  explicit ScaledBesselKit(double x, double delta = 0.35) : x_(x), delta_(delta) {
    if (!(x > 0.0)) throw DomainError("ScaledBesselKit: requires x > 0");
    const double sd = std::sin(delta_), cd = std::cos(delta_);
    double vmax = std::acosh(std::max(3.0, 48.0 / (x * sd)));
    // Node density follows the local phase rate x cd cosh(v).
    std::vector<double> edges{0.0};
    while (edges.back() < vmax) {
      double v = edges.back();
      double freq = x * cd * std::cosh(v) + 1.0;
      edges.push_back(v + std::min(0.5, 4.5 / freq));
    }
    const auto& r = GaussLegendre::rule(16);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      double mid = 0.5 * (edges[p] + edges[p + 1]);
      double half = 0.5 * (edges[p + 1] - edges[p]);
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        double v = mid + half * r.nodes[i];
        vs_.push_back(v);
        cplx g = std::exp(cplx(-x * sd * std::cosh(v), -x * cd * std::sinh(v)));
        gw_.push_back((half * r.weights[i]) * g);
      }
    }
  }

  /// e^{pi t/2} K_{it}(x)
  double operator()(double t) const {
    KahanSumC acc;
    for (std::size_t i = 0; i < vs_.size(); ++i)
      acc.add(gw_[i] * std::exp(cplx(0.0, t * vs_[i])));
    return std::exp(t * delta_) * acc.value().real();
  }

  double x() const { return x_; }

 private:
  double x_, delta_;
  std::vector<double> vs_;
  std::vector<cplx> gw_;
};

// ---------------------------------------------------------------------------
// Smooth compactly supported bumps and their Mellin transforms
// ---------------------------------------------------------------------------

/// Mollifier-profile bump on the positive reals:
/// scale * exp(-1/(1-u^2)), u = (t - center)/radius, zero outside.
struct BumpFunction {
  double center = 1.0;
  double radius = 0.5;
  double scale = 1.0;

  double operator()(double t) const {
    double u = (t - center) / radius;
    if (std::abs(u) >= 1.0 || !(t > 0.0)) return 0.0;
    return scale * std::exp(-1.0 / (1.0 - u * u));
  }
  double support_lo() const { return center - radius; }
  double support_hi() const { return center + radius; }

  /// ||f||^2 with respect to d^x t.
  double l2_norm_sq() const {
    auto f = [&](double t) { return sqr((*this)(t)) / t; };
    return gl_composite(f, support_lo(), support_hi(), 64, 16);
  }

  /// Same profile rescaled to unit L^2(d^x t) norm.
  static BumpFunction unit_l2(double center = 1.0, double radius = 0.5) {
    if (!(center - radius > 0.0)) throw DomainError("bump support must stay positive");
    BumpFunction b{center, radius, 1.0};
    b.scale = 1.0 / std::sqrt(b.l2_norm_sq());
    return b;
  }
};

/// Repeated evaluation of the bump Mellin transform along one vertical line
/// Re(s) = sigma. Nodes live on tiered composite grids of the support; a
/// denser tier is built on demand once the requested |Im s| outruns the
/// resolution of the current one.
class MellinLine {
 public:
  MellinLine(const BumpFunction& f, double sigma) : f_(f), sigma_(sigma) {}

  cplx eval(double tau) const {
    if (f_.scale == 0.0) return 0.0;
    const Tier& tier = tier_for(std::abs(tau));
    KahanSumC acc;
    for (std::size_t i = 0; i < tier.vs.size(); ++i)
      acc.add(tier.wg[i] * std::exp(cplx(0.0, -tau * tier.vs[i])));
    return acc.value();
  }
  double sigma() const { return sigma_; }

 private:
  struct Tier {
    double tau_cap = 0.0;
    std::vector<double> vs;
    std::vector<cplx> wg;  // weight * f(e^v) e^{-sigma v}
  };

  const Tier& tier_for(double tau) const {
    for (const Tier& t : tiers_)
      if (tau <= t.tau_cap) return t;
    double cap = tiers_.empty() ? 64.0 : tiers_.back().tau_cap;
    while (cap < tau) cap *= 4.0;
    Tier t;
    t.tau_cap = cap;
    const double lo = std::max(f_.support_lo(), 1e-300), hi = f_.support_hi();
    const double width = std::log(hi) - std::log(lo);
    int panels = std::max(24, static_cast<int>(std::ceil(cap * width / 4.0)) + 8);
    std::vector<double> vs, ws;
    gl_grid(std::log(lo), std::log(hi), panels, 16, vs, ws);
    t.vs = vs;
    t.wg.resize(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      t.wg[i] = ws[i] * f_(std::exp(vs[i])) * std::exp(-sigma_ * vs[i]);
    tiers_.push_back(std::move(t));
    return tiers_.back();
  }

  BumpFunction f_;
  double sigma_;
  mutable std::vector<Tier> tiers_;
};

/// Mellin transform  f~(s) = int f(t) t^{-s} d^x t ; entire in s with rapid
/// decay in vertical strips.
inline cplx mellin_bump(const BumpFunction& f, cplx s) {
  if (f.scale == 0.0) return 0.0;
  const double lo = std::max(f.support_lo(), 1e-300), hi = f.support_hi();
  if (!(hi > lo)) return 0.0;
  const double osc = std::abs(s.imag()) * (std::log(hi) - std::log(lo));
  const int panels = std::max(24, static_cast<int>(std::ceil(osc / 4.0)) + 8);
  auto g = [&](double t) -> cplx { return f(t) * std::exp(-s * std::log(t)) / t; };
  return gl_composite(g, lo, hi, panels, 16);
}

}  // namespace anv
