#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "anv/common.hpp"
#include "anv/gamma_factors.hpp"
#include "anv/numerics.hpp"
#include "anv/quadrature.hpp"

namespace anv {

/// Generic unitary representation of GL(2,R) with trivial central character:
/// parameters (mu, -mu) with |Re mu| = theta < 1/2.
struct Gl2Rep {
  LanglandsParams params;

  static Gl2Rep tempered(double t) { return Gl2Rep{LanglandsParams{{cplx(0, t), cplx(0, -t)}}}; }

  void validate() const {
    if (params.n() != 2) throw PreconditionError("Gl2Rep: needs two parameters");
    if (std::abs((params.mu[0] + params.mu[1]).real()) > 1e-12 ||
        std::abs((params.mu[0] + params.mu[1]).imag()) > 1e-12)
      throw PreconditionError("Gl2Rep: trivial central character needs mu2 = -mu1");
    if (params.theta_bound() >= 0.5) throw PreconditionError("Gl2Rep: not theta-tempered");
  }
  double conductor() const { return analytic_conductor(params); }
};

/// Kirillov-model datum: V[diag(y,1)] = bump(y), supported in the positive
/// reals, unit L^2(d^x t) norm for the newvector experiments.
struct KirillovVector {
  BumpFunction bump;

  static KirillovVector unit(double center = 1.0, double radius = 0.5) {
    return KirillovVector{BumpFunction::unit_l2(center, radius)};
  }
  static KirillovVector zero() { return KirillovVector{BumpFunction{1.0, 0.5, 0.0}}; }
};

namespace detail {

/// Precomputed quadrature of a vertical line integral
///   (1/2 pi) int Theta(sigma + i tau) f~(sigma + i tau) e^{(sigma+i tau) ln t} dtau.
/// Conjugate symmetry of Theta f~ (real bump, self-dual parameters) lets the
/// kernel store only tau > 0 and evaluate through twice the real part; the
/// height grows adaptively until the blocks fall below eps_tail.
class SideKernel {
 public:
  SideKernel() = default;

  SideKernel(const Gl2Rep& rep, const BumpFunction& bump, double sigma, double osc_span,
             double eps_tail, double t_cap = 8000.0) {
    sigma_ = sigma;
    const double logC = std::log(analytic_conductor(rep.params));
    MellinLine line(bump, sigma);
    const auto& rule = GaussLegendre::rule(8);
    double T = 0.0;
    int quiet = 0;
    while (T < t_cap) {
      // Local panel width resolves both e^{i tau v} and the gamma phases.
      double rate = osc_span + 2.2 * std::log(2.0 + T) + logC + 1.0;
      double h = std::min(0.5, 4.5 / rate);
      double T2 = T + 8.0 * h;
      double block = 0.0;
      for (int p = 0; p < 8; ++p) {
        double a = T + h * p, b = T + h * (p + 1);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          double tau = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
          double w = 0.5 * (b - a) * rule.weights[i];
          cplx val = theta(cplx(sigma_, tau), rep.params) * line.eval(tau);
          taus_.push_back(tau);
          coefs_.push_back(w * val / kTwoPi);
          block += std::abs(coefs_.back());
        }
      }
      T = T2;
      if (block < eps_tail / 8.0) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
    }
    height_ = T;
    for (std::size_t i = 0; i < taus_.size(); ++i)
      if (taus_[i] > 0.92 * T) tail_raw_ += 2.0 * std::abs(coefs_[i]);
    tail_raw_ *= 3.0;
  }

  /// Kernel value at t > 0 (V[diag(C, t) w] when built at sigma); real by
  /// conjugate symmetry.
  double eval(double t) const { return eval_log(std::log(t)); }

  double eval_log(double v) const {
    KahanSumC acc;
    for (std::size_t i = 0; i < taus_.size(); ++i)
      acc.add(coefs_[i] * std::exp(cplx(0.0, taus_[i] * v)));
    return std::exp(sigma_ * v) * 2.0 * acc.value().real();
  }

  double sigma() const { return sigma_; }
  double height() const { return height_; }
  /// Bound sup_t |eval(t)| / t^sigma.
  double mass() const {
    double m = 0.0;
    for (cplx c : coefs_) m += 2.0 * std::abs(c);
    return m;
  }
  double tail_at(double t) const { return tail_raw_ * std::pow(t, sigma_); }

 private:
  double sigma_ = 0.0;
  double height_ = 0.0;
  double tail_raw_ = 0.0;
  std::vector<double> taus_;
  std::vector<cplx> coefs_;
};

}  // namespace detail

/// V[diag(C(Pi), t) w] = int_(sigma) t^s Theta(s, Pi) f~(s) ds/(2 pi i).
inline cplx side_value(const Gl2Rep& rep, const KirillovVector& v, double t, double sigma,
                       const VerticalContour& contour) {
  rep.validate();
  if (!(t > 0.0)) throw DomainError("side_value: requires t > 0");
  if (sigma <= -0.5 + rep.params.theta_bound() + 1e-9)
    throw PoleError("side_value: contour line hits the Theta pole half-plane",
                    cplx(sigma, 0.0));
  check_contour(contour);
  if (v.bump.scale == 0.0) return 0.0;
  // Resolve both the t^{i tau} oscillation and the caller's node density.
  double osc = std::max(std::abs(std::log(t)) + 1.0,
                        4.5 * contour.nodes / (2.0 * contour.height));
  detail::SideKernel k(rep, v.bump, sigma, osc, 1e-13, contour.height);
  double val = k.eval(t);
  if (k.tail_at(t) > std::max(1e-8 * std::abs(val), 1e-250))
    throw TailError("side_value: contour tail not negligible", k.tail_at(t));
  return cplx(val, 0.0);
}

/// Least-squares slope of log |side_value| against log t on the sigma = M line.
inline double decay_fit(const Gl2Rep& rep, const KirillovVector& v,
                        const std::vector<double>& t_grid, int M) {
  rep.validate();
  if (t_grid.size() < 4) throw PreconditionError("decay_fit: need at least 4 grid points");
  double lo = *std::min_element(t_grid.begin(), t_grid.end());
  double hi = *std::max_element(t_grid.begin(), t_grid.end());
  if (!(lo > 0.0 && hi <= 0.3)) throw PreconditionError("decay_fit: grid must lie in (0, 0.3]");
  if (hi / lo < 10.0) throw PreconditionError("decay_fit: grid must span a decade");
  detail::SideKernel k(rep, v.bump, static_cast<double>(M), std::abs(std::log(lo)) + 1.0, 1e-6);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double t : t_grid) {
    double val = k.eval(t);
    if (!(std::abs(val) > 1e-280))
      throw DegenerateFitError("decay_fit: side values underflow");
    double x = std::log(t), y = std::log(std::abs(val));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(t_grid.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Nested-contour evaluation of the invariance defect
///   V[(1, ; c/C(Pi), 1)] - V(1)
///     = int_(0) Theta(s) ( int_0^infty (e(-c/t) - 1) V[diag(C,t) w] t^s d^x t ) ds/(2 pi i).
/// The inner values come from the sigma = M kernel on t <= 1 (decay
/// certificate) and the sigma = 0 kernel on t > 1.
class DefectEngine {
 public:
  /// contour_inner.sigma selects the line of the small-t decay certificate
  /// (sigma = M in the two-regime split); the certificate bounds where the
  /// inner integral may be truncated, while the values themselves are taken
  /// on the sigma = 0 line, which equals the sigma = M evaluation by the
  /// separately verified contour-shift invariance.
  DefectEngine(const Gl2Rep& rep, const KirillovVector& v,
               const VerticalContour& contour_outer = {0.0, 90.0, 0},
               const VerticalContour& contour_inner = {3.0, 0.0, 0}, double tol = 3e-7)
      : rep_(rep), vec_(v), tol_(tol), outer_height_(contour_outer.height) {
    rep_.validate();
    sigma_cert_ = contour_inner.sigma > 0.0 ? contour_inner.sigma : 3.0;
    if (v.bump.scale != 0.0) {
      kernel_0_ = detail::SideKernel(rep_, v.bump, 0.0, 16.0, tol * 1e-3);
      // Coarse certificate kernel: only its total mass enters (the bound
      // |V(t)| <= mass * t^sigma for t <= 1), so accuracy demands are mild.
      kernel_cert_ = detail::SideKernel(rep_, v.bump, sigma_cert_, 1.0, 1e-4);
      t_res_ = kernel_0_.height();
    }
  }

  cplx defect(double c) const {
    if (c == 0.0 || vec_.bump.scale == 0.0) return 0.0;
    const double bc = kernel_cert_.mass();
    const double b0 = kernel_0_.mass();
    // Truncation at small t from the decay certificate: int_0^tmin 2 B t^s dxt.
    const double t_min =
        std::pow(tol_ * sigma_cert_ / (8.0 * std::max(bc, 1e-12)), 1.0 / sigma_cert_);
    // Truncation at large t from |e(-c/t) - 1| <= 2 pi |c| / t and |V| <~ t^{-1/2}.
    double t_cap = std::pow(kTwoPi * std::abs(c) * std::max(b0, 1e-12) / (0.25 * tol_), 2.0 / 3.0);
    t_cap = std::min(std::max(t_cap, 50.0), 3.0e6);
    const double v_lo = std::log(t_min), v_hi = std::log(t_cap);
    // --- t grid over v = ln t, graded by the local oscillation rate ---
    std::vector<double> vk, wk;
    {
      const auto& rule = GaussLegendre::rule(16);
      double v = v_lo;
      while (v < v_hi) {
        double freq = t_res_ + outer_height_ + kTwoPi * std::abs(c) * std::exp(-v);
        double h = std::min(0.35, 4.5 / freq);
        double b = std::min(v + h, v_hi);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          vk.push_back(0.5 * (v + b) + 0.5 * (b - v) * rule.nodes[i]);
          wk.push_back(0.5 * (b - v) * rule.weights[i]);
        }
        v = b;
      }
    }
    // --- inner values (e(-c/t) - 1) V(t) on the evaluation line ---
    std::vector<cplx> fk(vk.size());
    for (std::size_t k = 0; k < vk.size(); ++k) {
      double t = std::exp(vk[k]);
      cplx e = std::exp(cplx(0.0, -kTwoPi * c / t)) - 1.0;
      fk[k] = wk[k] * e * kernel_0_.eval_log(vk[k]);
    }
    // --- outer contour, adaptive height ---
    KahanSumC acc;
    const auto& rule = GaussLegendre::rule(8);
    double T = 0.0;
    int quiet = 0;
    const double h_out = 0.35;
    while (T < outer_height_) {
      double T2 = std::min(T + 8.0 * h_out, outer_height_);
      double block_mass = 0.0;
      int panels = std::max(1, static_cast<int>(std::round((T2 - T) / h_out)));
      for (int p = 0; p < panels; ++p) {
        double a = T + (T2 - T) * p / panels, b = T + (T2 - T) * (p + 1) / panels;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          double tau = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
          double w = 0.5 * (b - a) * rule.weights[i];
          for (double sgn : {1.0, -1.0}) {
            cplx th = theta(cplx(0.0, sgn * tau), rep_.params);
            KahanSumC inner;
            for (std::size_t k = 0; k < vk.size(); ++k)
              inner.add(fk[k] * std::exp(cplx(0.0, sgn * tau * vk[k])));
            cplx term = w * th * inner.value() / kTwoPi;
            acc.add(term);
            block_mass += std::abs(term);
          }
        }
      }
      T = T2;
      if (block_mass < tol_ / 16.0) {
        if (++quiet >= 2) break;
      } else {
        quiet = 0;
      }
    }
    return acc.value();
  }

 private:
  Gl2Rep rep_;
  KirillovVector vec_;
  double tol_;
  double sigma_cert_ = 3.0;
  double outer_height_ = 90.0;
  double t_res_ = 0.0;
  detail::SideKernel kernel_0_, kernel_cert_;
};

inline cplx invariance_defect(const Gl2Rep& rep, const KirillovVector& v, double c,
                              const VerticalContour& contour_outer = {0.0, 80.0, 0},
                              const VerticalContour& contour_inner = {3.0, 0.0, 0},
                              double tol = 1e-8) {
  if (std::abs(c) > 1.0) throw PreconditionError("invariance_defect: requires |c| <= 1");
  DefectEngine eng(rep, v, contour_outer, contour_inner, tol);
  return eng.defect(c);
}

/// Defect probed at the too-small scale X = shrink * C(Pi): the lower-left
/// perturbation c / (shrink C) equals the conductor-scale defect at c/shrink.
inline cplx subconductor_probe(const Gl2Rep& rep, const KirillovVector& v, double shrink,
                               double c,
                               const VerticalContour& contour_outer = {0.0, 80.0, 0},
                               const VerticalContour& contour_inner = {4.0, 0.0, 0},
                               double tol = 1e-5) {
  if (!(shrink > 0.0 && shrink <= 1.0))
    throw PreconditionError("subconductor_probe: shrink must lie in (0, 1]");
  if (!(shrink * analytic_conductor(rep.params) >= 1.0))
    throw PreconditionError("subconductor_probe: requires shrink * C(Pi) >= 1");
  DefectEngine eng(rep, v, contour_outer, contour_inner, tol);
  return eng.defect(c / shrink);
}

/// Independent Barnes-kernel route for the same defect: both Mellin layers
/// are swapped past the t-integral, whose closed form is
/// Gamma(-(s+s')) (2 pi i c)^{s+s'} on 0 < Re(s+s') < 1. Cross-check only.
inline cplx defect_barnes(const Gl2Rep& rep, const KirillovVector& v, double c,
                          double T_outer = 70.0, double T_inner = 240.0) {
  rep.validate();
  if (c == 0.0 || v.bump.scale == 0.0) return 0.0;
  const double sig = 0.75, sigp = -0.25;  // s + s' sits on Re = 1/2
  const cplx log_2pic(std::log(kTwoPi * std::abs(c)), c > 0.0 ? kPi / 2.0 : -kPi / 2.0);
  std::vector<double> ti, wi, to, wo;
  gl_grid(-T_inner, T_inner, static_cast<int>(T_inner * 2.0 / 0.4), 8, ti, wi);
  gl_grid(-T_outer, T_outer, static_cast<int>(T_outer * 2.0 / 0.4), 8, to, wo);
  std::vector<cplx> inner_vals(ti.size());
  for (std::size_t j = 0; j < ti.size(); ++j) {
    cplx sp(sigp, ti[j]);
    inner_vals[j] = wi[j] * theta(sp, rep.params) * mellin_bump(v.bump, sp);
  }
  KahanSumC acc;
  for (std::size_t i = 0; i < to.size(); ++i) {
    cplx s(sig, to[i]);
    cplx th_s = wo[i] * theta(s, rep.params);
    KahanSumC row;
    for (std::size_t j = 0; j < ti.size(); ++j) {
      cplx w = s + cplx(sigp, ti[j]);
      row.add(inner_vals[j] * std::exp(log_gamma(-w) + w * log_2pic));
    }
    acc.add(th_s * row.value());
  }
  return acc.value() / (kTwoPi * kTwoPi);
}

/// sup over a 1e4-point grid of |y - 1| < 1/X of | |y|^{it} - 1 |.
inline double toy_defect(double t, double X) {
  if (!(X > 1.0)) throw PreconditionError("toy_defect: requires X > 1");
  const int n = 10000;
  double sup = 0.0;
  for (int j = 0; j < n; ++j) {
    double y = 1.0 - 1.0 / X + (2.0 / X) * (j + 0.5) / n;
    double v = 2.0 * std::abs(std::sin(0.5 * t * std::log(y)));
    sup = std::max(sup, v);
  }
  return sup;
}

}  // namespace anv
