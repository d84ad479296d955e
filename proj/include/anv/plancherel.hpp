#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "anv/common.hpp"
#include "anv/gamma_factors.hpp"
#include "anv/numerics.hpp"
#include "anv/quadrature.hpp"
#include "anv/whittaker.hpp"

namespace anv {

/// Quadrature grid on the spectral line mu = (it, -it), t > 0.
struct SpectralGrid {
  std::vector<double> t_values;
  std::vector<double> weights;

  void validate() const {
    if (t_values.size() != weights.size() || t_values.empty())
      throw PreconditionError("SpectralGrid: inconsistent grid");
    double prev = 0.0;
    for (std::size_t i = 0; i < t_values.size(); ++i) {
      if (!(t_values[i] > prev)) throw PreconditionError("SpectralGrid: t must be increasing, positive");
      if (!(weights[i] > 0.0)) throw PreconditionError("SpectralGrid: weights must be positive");
      prev = t_values[i];
    }
  }
};

inline SpectralGrid make_spectral_grid(double t_min, double t_max, int nodes) {
  if (!(t_min >= 0.0 && t_max > t_min)) throw PreconditionError("make_spectral_grid: bad range");
  SpectralGrid g;
  int panels = std::max(4, nodes / 16);
  gl_grid(t_min, t_max, panels, 16, g.t_values, g.weights);
  return g;
}

/// Spherical Whittaker-Plancherel density |c(1,mu)/c(0,mu)|^2 on the slice
/// mu = (it, -it).
inline double plancherel_density(double t) {
  if (!(t >= 0.0)) throw DomainError("plancherel_density: requires t >= 0");
  if (t < 1e-10) return 0.0;  // Gamma_R(2it) pole: the density vanishes in the limit
  cplx lg = detail::log_gamma_r(cplx(1.0, 2.0 * t)) - detail::log_gamma_r(cplx(0.0, 2.0 * t));
  return std::norm(std::exp(lg));
}

/// Independent closed form of the same density: t tanh(pi t) / pi.
inline double plancherel_density_closed(double t) { return t * std::tanh(kPi * t) / kPi; }

/// Forward coefficients <f, W_mu> = int f(y) conj(W_{(it,-it)}(diag(y,1))) dy/y
/// together with the e^{pi t/2}-scaled copies that keep large-t arithmetic in
/// the O(1) range.
struct ForwardCoefficients {
  SpectralGrid grid;
  std::vector<cplx> values;
  std::vector<cplx> scaled;  // e^{pi t / 2} * value
};

namespace detail {

inline double kit_delta_for(double t_max) { return std::min(0.35, 14.0 / std::max(t_max, 1.0)); }

/// Nodes of the y-quadrature over the bump support, spaced to resolve the
/// kernel oscillation at the largest spectral parameter.
inline void bump_y_grid(const BumpFunction& f, double t_max, std::vector<double>& ys,
                        std::vector<double>& ws) {
  const double lo = std::max(f.support_lo(), 1e-12), hi = f.support_hi();
  const double vlo = std::log(lo), vhi = std::log(hi);
  const double h = std::min(0.25, 4.5 / std::max(8.0, t_max));
  const int panels = std::max(8, static_cast<int>(std::ceil((vhi - vlo) / h)));
  std::vector<double> vs, vw;
  gl_grid(vlo, vhi, panels, 16, vs, vw);
  ys.resize(vs.size());
  ws.resize(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    ys[i] = std::exp(vs[i]);
    ws[i] = vw[i];  // dy/y measure
  }
}

}  // namespace detail

inline ForwardCoefficients forward_transform(const BumpFunction& f, const SpectralGrid& grid,
                                             const WhittakerNormalization& norm = default_normalization()) {
  grid.validate();
  ForwardCoefficients out;
  out.grid = grid;
  out.scaled.assign(grid.t_values.size(), 0.0);
  out.values.assign(grid.t_values.size(), 0.0);
  if (f.scale == 0.0) return out;
  const double t_max = grid.t_values.back();
  const double delta = detail::kit_delta_for(t_max);
  std::vector<double> ys, ws;
  detail::bump_y_grid(f, t_max, ys, ws);
  std::vector<KahanSum> acc(grid.t_values.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const double y = ys[j];
    const double fy = f(y);
    if (fy == 0.0) continue;
    ScaledBesselKit kit(kTwoPi * y, delta);
    const double base = ws[j] * fy * std::sqrt(y);
    for (std::size_t i = 0; i < grid.t_values.size(); ++i)
      acc[i].add(base * kit(grid.t_values[i]));
  }
  for (std::size_t i = 0; i < grid.t_values.size(); ++i) {
    double chat = norm.d2 * acc[i].value();
    out.scaled[i] = chat;
    out.values[i] = chat * std::exp(-kPi * grid.t_values[i] / 2.0);
  }
  return out;
}

/// Inverse transform at the point y:
///   f(y) = (1/(4 pi y)) int t sinh(pi t) W_{(it,-it)}(diag(y,1)) <f, W> dt.
/// The weight is the Plancherel density divided by the squared Stade norm,
/// with the absolute constant and the torus measure factor of the dy/y
/// pairing made explicit; evaluated entirely through scaled kernels.
inline double inverse_transform(const ForwardCoefficients& coeffs, double y,
                                const WhittakerNormalization& norm = default_normalization()) {
  if (!(y > 0.0)) throw DomainError("inverse_transform: requires y > 0");
  const SpectralGrid& g = coeffs.grid;
  g.validate();
  if (coeffs.scaled.size() != g.t_values.size())
    throw PreconditionError("inverse_transform: coefficients do not match grid");
  const double delta = detail::kit_delta_for(g.t_values.back());
  ScaledBesselKit kit(kTwoPi * y, delta);
  KahanSum acc;
  for (std::size_t i = 0; i < g.t_values.size(); ++i) {
    double t = g.t_values[i];
    // t sinh(pi t) K_{it}(2 pi y) coeff(t) = t (1 - e^{-2 pi t})/2 khat chat
    double w = t * 0.5 * (1.0 - std::exp(-kTwoPi * t));
    acc.add(g.weights[i] * w * kit(t) * coeffs.scaled[i].real());
  }
  return norm.d2 * acc.value() / (4.0 * kPi * std::sqrt(y));
}

/// sup over 64 sample points of |f - inverse(forward(f))|.
inline double roundtrip_error(const BumpFunction& f, const SpectralGrid& grid,
                              const WhittakerNormalization& norm = default_normalization()) {
  ForwardCoefficients c = forward_transform(f, grid, norm);
  double lo = std::max(0.25, 0.5 * f.support_lo());
  double hi = f.support_hi() + 0.35;
  double sup = 0.0;
  for (int i = 0; i < 64; ++i) {
    double y = lo + (hi - lo) * (i + 0.5) / 64.0;
    sup = std::max(sup, std::abs(f(y) - inverse_transform(c, y, norm)));
  }
  return sup;
}

/// Relative defect of the Parseval identity
///   int |f(y)|^2 dy = (1/4pi) int t sinh(pi t) |<f, W>|^2 dt.
inline double parseval_defect(const BumpFunction& f, const SpectralGrid& grid,
                              const WhittakerNormalization& norm = default_normalization()) {
  ForwardCoefficients c = forward_transform(f, grid, norm);
  KahanSum spectral;
  for (std::size_t i = 0; i < grid.t_values.size(); ++i) {
    double t = grid.t_values[i];
    double w = t * 0.5 * (1.0 - std::exp(-kTwoPi * t));
    spectral.add(grid.weights[i] * w * std::norm(c.scaled[i]));
  }
  double lhs = spectral.value() / (4.0 * kPi);
  auto f2 = [&](double y) { return sqr(f(y)); };
  double rhs = gl_composite(f2, f.support_lo(), f.support_hi(), 64, 16);
  return std::abs(lhs - rhs) / rhs;
}

}  // namespace anv
