#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "anv/common.hpp"
#include "anv/matrix.hpp"
#include "anv/rng.hpp"

namespace anv {

/// Geometry of the archimedean congruence set K_*(X, tau) in GL(n):
/// |a - 1| < tau, |b| < tau, |c| < tau/X and |d - 1| < tau (star = 0) or
/// tau/X (star = 1), all in the max-absolute-entry norm.
struct CongruenceBox {
  int n = 2;
  double X = 1.0;
  double tau = 0.1;
  int star = 0;

  void validate() const {
    if (n < 2) throw PreconditionError("CongruenceBox: n must be >= 2");
    if (!(X >= 1.0)) throw PreconditionError("CongruenceBox: X must be >= 1");
    if (!(tau > 0.0 && tau < 1.0)) throw PreconditionError("CongruenceBox: tau in (0,1)");
    if (star != 0 && star != 1) throw PreconditionError("CongruenceBox: star in {0,1}");
  }
  double d_halfwidth() const { return star == 1 ? tau / X : tau; }
  /// Lebesgue volume of the coordinate box.
  double coordinate_volume() const {
    int m = n - 1;
    return std::pow(2.0 * tau, static_cast<double>(m * m + m)) *
           std::pow(2.0 * tau / X, static_cast<double>(m)) * 2.0 * d_halfwidth();
  }
};

inline constexpr double kSingularDetTol = 1e-12;
inline constexpr int kMcSubstreams = 16;

/// Membership test for the four block conditions (max-abs-entry norm).
inline bool k_contains(const MatrixD& g, const CongruenceBox& box) {
  box.validate();
  if (g.size() != static_cast<std::size_t>(box.n))
    throw PreconditionError("k_contains: matrix size mismatch");
  if (std::abs(g.det()) <= kSingularDetTol)
    throw SingularMatrixError("k_contains: matrix is numerically singular");
  const int m = box.n - 1;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double want = (i == j) ? 1.0 : 0.0;
      if (!(std::abs(g(i, j) - want) < box.tau)) return false;
    }
  for (int i = 0; i < m; ++i)
    if (!(std::abs(g(i, m)) < box.tau)) return false;  // b block
  for (int j = 0; j < m; ++j)
    if (!(std::abs(g(m, j)) < box.tau / box.X)) return false;  // c block
  return std::abs(g(m, m) - 1.0) < box.d_halfwidth();
}

/// Haar density |det g|^{-n} relative to the Lebesgue measure on coordinates.
inline double haar_density(const MatrixD& g) {
  double d = g.det();
  if (std::abs(d) <= kSingularDetTol)
    throw SingularMatrixError("haar_density: matrix is numerically singular");
  return std::pow(std::abs(d), -static_cast<double>(g.size()));
}

/// Uniform draw from the coordinate box of K_*(X, tau).
inline MatrixD sample_box(const CongruenceBox& box, SplitMix64& rng) {
  const int m = box.n - 1;
  MatrixD g(box.n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      g(i, j) = (i == j ? 1.0 : 0.0) + rng.uniform(-box.tau, box.tau);
  for (int i = 0; i < m; ++i) g(i, m) = rng.uniform(-box.tau, box.tau);
  for (int j = 0; j < m; ++j) g(m, j) = rng.uniform(-box.tau / box.X, box.tau / box.X);
  g(m, m) = 1.0 + rng.uniform(-box.d_halfwidth(), box.d_halfwidth());
  return g;
}

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

namespace detail {

/// Substream-averaged MC mean of `weight` over the coordinate box; the
/// spread across the independent substreams gives the standard error.
template <typename F>
McEstimate mc_over_box(const CongruenceBox& box, long samples, std::uint64_t seed, F&& weight) {
  box.validate();
  if (samples < 10000) throw PreconditionError("volume_mc: samples must be >= 1e4");
  const long per = samples / kMcSubstreams;
  std::vector<double> sub(kMcSubstreams);
  for (int s = 0; s < kMcSubstreams; ++s) {
    SplitMix64 rng(seed, static_cast<std::uint64_t>(s) + 1);
    KahanSum acc;
    for (long i = 0; i < per; ++i) {
      MatrixD g = sample_box(box, rng);
      acc.add(weight(g));
    }
    sub[s] = acc.value() / static_cast<double>(per);
  }
  double mean = 0.0;
  for (double v : sub) mean += v;
  mean /= kMcSubstreams;
  double var = 0.0;
  for (double v : sub) var += sqr(v - mean);
  var /= (kMcSubstreams - 1.0);
  McEstimate out;
  out.estimate = mean * box.coordinate_volume();
  out.stderr_ = std::sqrt(var / kMcSubstreams) * box.coordinate_volume();
  return out;
}

}  // namespace detail

/// Monte-Carlo Haar volume of K_*(X, tau); deterministic for a fixed
/// (seed, samples) pair.
inline McEstimate volume_mc(const CongruenceBox& box, long samples, std::uint64_t seed) {
  return detail::mc_over_box(box, samples, seed, [&](const MatrixD& g) {
    double d = std::abs(g.det());
    if (d <= kSingularDetTol) return 0.0;
    return std::pow(d, -static_cast<double>(box.n));
  });
}

/// vol(g A symdiff A) / vol(A) for A = K_*(X, tau). Left invariance of the
/// Haar measure turns the symmetric difference into 2 (1 - P[g^{-1} h in A]).
inline McEstimate folner_ratio_stats(const MatrixD& g, const CongruenceBox& box, double tau1,
                                     long samples, std::uint64_t seed) {
  box.validate();
  if (!(tau1 > 0.0 && tau1 <= box.tau))
    throw PreconditionError("folner_ratio: tau1 must lie in (0, tau]");
  CongruenceBox small = box;
  small.tau = tau1;
  if (!k_contains(g, small))
    throw PreconditionError("folner_ratio: g must lie in K_*(X, tau1)");
  MatrixD ginv = g.inverse();
  const long per = std::max<long>(1, samples / kMcSubstreams);
  std::vector<double> sub(kMcSubstreams);
  for (int s = 0; s < kMcSubstreams; ++s) {
    SplitMix64 rng(seed, static_cast<std::uint64_t>(s) + 1);
    KahanSum num, den;
    for (long i = 0; i < per; ++i) {
      MatrixD h = sample_box(box, rng);
      double d = std::abs(h.det());
      if (d <= kSingularDetTol) continue;
      double w = std::pow(d, -static_cast<double>(box.n));
      den.add(w);
      MatrixD gh = ginv * h;
      bool inside = std::abs(gh.det()) > kSingularDetTol && k_contains(gh, box);
      if (inside) num.add(w);
    }
    sub[s] = 2.0 * (1.0 - num.value() / den.value());
  }
  double mean = 0.0;
  for (double v : sub) mean += v;
  mean /= kMcSubstreams;
  double var = 0.0;
  for (double v : sub) var += sqr(v - mean);
  var /= (kMcSubstreams - 1.0);
  return {mean, std::sqrt(var / kMcSubstreams)};
}

inline double folner_ratio(const MatrixD& g, const CongruenceBox& box, double tau1,
                           long samples, std::uint64_t seed) {
  return folner_ratio_stats(g, box, tau1, samples, seed).estimate;
}

/// Deterministic probe element of K_*(X, tau1): identity plus a seeded
/// pattern drawn well inside the box (half scale), with the c and d blocks
/// carrying the X-scaling of the set.
inline MatrixD folner_probe(const CongruenceBox& box, double tau1, std::uint64_t seed) {
  CongruenceBox small = box;
  small.tau = tau1;
  SplitMix64 rng(seed, 0xf01);
  const int m = box.n - 1;
  MatrixD g = MatrixD::identity(box.n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) += rng.uniform(-0.5, 0.5) * tau1;
  for (int i = 0; i < m; ++i) g(i, m) = rng.uniform(-0.5, 0.5) * tau1;
  for (int j = 0; j < m; ++j) g(m, j) = rng.uniform(-0.5, 0.5) * tau1 / box.X;
  g(m, m) = 1.0 + rng.uniform(-0.5, 0.5) * small.d_halfwidth();
  return g;
}

// ---------------------------------------------------------------------------
// Normalized majorants
// ---------------------------------------------------------------------------

namespace detail {

/// C-infinity plateau: 1 on [0, 1/2], smooth descent to 0 at 1.
inline double plateau(double r) {
  r = std::abs(r);
  if (r >= 1.0) return 0.0;
  if (r <= 0.5) return 1.0;
  auto s = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  double rho = 2.0 * (r - 0.5);
  return s(1.0 - rho) / (s(1.0 - rho) + s(rho));
}

}  // namespace detail

/// Smooth normalized majorant of the family K_*(X, tau): the fixed profile
/// F_1 (a product of per-coordinate plateaus, constant on the tau/2 inner
/// box) rescaled by X^A with the c block (and the d deviation when star = 1)
/// dilated by X.
struct Majorant {
  CongruenceBox box;   // carries n, X, tau, star
  double X() const { return box.X; }

  /// Base profile on the X = 1 geometry.
  double f1(const MatrixD& g) const {
    const int m = box.n - 1;
    double v = 1.0;
    for (int i = 0; i < m && v > 0.0; ++i)
      for (int j = 0; j < m; ++j) {
        double want = (i == j) ? 1.0 : 0.0;
        v *= detail::plateau((g(i, j) - want) / box.tau);
        if (v == 0.0) break;
      }
    for (int i = 0; i < m && v > 0.0; ++i) v *= detail::plateau(g(i, m) / box.tau);
    for (int j = 0; j < m && v > 0.0; ++j) v *= detail::plateau(g(m, j) / box.tau);
    if (v > 0.0) v *= detail::plateau((g(m, m) - 1.0) / box.tau);
    return v;
  }
};

/// F_X(g) = X^A F_1[g with the c block scaled by X (and (d-1) for star = 1)].
inline double majorant_eval(const Majorant& m, const MatrixD& g) {
  m.box.validate();
  if (g.size() != static_cast<std::size_t>(m.box.n))
    throw PreconditionError("majorant_eval: matrix size mismatch");
  if (std::abs(g.det()) <= kSingularDetTol)
    throw SingularMatrixError("majorant_eval: matrix is numerically singular");
  const int mm = m.box.n - 1;
  MatrixD scaled = g;
  for (int j = 0; j < mm; ++j) scaled(mm, j) = g(mm, j) * m.box.X;
  if (m.box.star == 1) scaled(mm, mm) = 1.0 + (g(mm, mm) - 1.0) * m.box.X;
  const double A = static_cast<double>(m.box.star == 1 ? m.box.n : m.box.n - 1);
  return std::pow(m.box.X, A) * m.f1(scaled);
}

/// Haar mass of the majorant, by box MC.
inline McEstimate majorant_mass(const Majorant& m, long samples, std::uint64_t seed) {
  return detail::mc_over_box(m.box, samples, seed, [&](const MatrixD& g) {
    double d = std::abs(g.det());
    if (d <= kSingularDetTol) return 0.0;
    return majorant_eval(m, g) * std::pow(d, -static_cast<double>(m.box.n));
  });
}

/// MC estimate of int m1(h) m2(g h) dh (Haar); nonnegative.
inline McEstimate majorant_convolve(const Majorant& m1, const Majorant& m2, const MatrixD& g,
                                    long samples, std::uint64_t seed) {
  if (m1.box.X != m2.box.X)
    throw PreconditionError("majorant_convolve: both factors need the same X");
  return detail::mc_over_box(m1.box, samples, seed, [&](const MatrixD& h) {
    double d = std::abs(h.det());
    if (d <= kSingularDetTol) return 0.0;
    double v1 = majorant_eval(m1, h);
    if (v1 == 0.0) return 0.0;
    MatrixD gh = g * h;
    if (std::abs(gh.det()) <= kSingularDetTol) return 0.0;
    return v1 * majorant_eval(m2, gh) * std::pow(d, -static_cast<double>(m1.box.n));
  });
}

}  // namespace anv
