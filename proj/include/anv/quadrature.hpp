#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "anv/common.hpp"

namespace anv {

/// Gauss-Legendre rule on [-1, 1]. Nodes/weights are found once per order by
/// Newton iteration on the Legendre recurrence and cached.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendre& rule(int order) {
    static std::vector<GaussLegendre> cache(128);
    if (order < 2) order = 2;
    if (order >= static_cast<int>(cache.size())) order = static_cast<int>(cache.size()) - 1;
    GaussLegendre& r = cache[order];
    if (r.nodes.empty()) r = build(order);
    return r;
  }

 private:
  static GaussLegendre build(int n) {
    GaussLegendre r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      // Tricomi initial guess, then Newton.
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      r.nodes[n - 1 - i] = x;
      r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }
};

/// One Gauss-Legendre panel of `order` points on [a, b].
template <typename F>
auto gl_panel(F&& f, double a, double b, int order = 16) -> decltype(f(0.0)) {
  const auto& r = GaussLegendre::rule(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  decltype(f(0.0)) acc{};
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    acc += (half * r.weights[i]) * f(mid + half * r.nodes[i]);
  return acc;
}

/// Composite rule: [a, b] split into `panels` equal panels of `order` points.
template <typename F>
auto gl_composite(F&& f, double a, double b, int panels, int order = 16) -> decltype(f(0.0)) {
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  decltype(f(0.0)) acc{};
  for (int p = 0; p < panels; ++p) acc += gl_panel(f, a + p * h, a + (p + 1) * h, order);
  return acc;
}

/// Composite panels returned as explicit nodes/weights on [a, b].
inline void gl_grid(double a, double b, int panels, int order, std::vector<double>& xs,
                    std::vector<double>& ws) {
  const auto& r = GaussLegendre::rule(order);
  const double h = (b - a) / panels;
  xs.clear();
  ws.clear();
  xs.reserve(static_cast<std::size_t>(panels) * r.nodes.size());
  ws.reserve(xs.capacity());
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h, half = 0.5 * h;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      xs.push_back(mid + half * r.nodes[i]);
      ws.push_back(half * r.weights[i]);
    }
  }
}

/// Adaptive Simpson-like refinement built on GL panels: bisect until the
/// panel estimate is stable to `tol` (absolute).
template <typename F>
auto gl_adaptive(F&& f, double a, double b, double tol, int depth = 24) -> decltype(f(0.0)) {
  auto whole = gl_panel(f, a, b, 16);
  auto left = gl_panel(f, a, 0.5 * (a + b), 16);
  auto right = gl_panel(f, 0.5 * (a + b), b, 16);
  if (depth <= 0 || std::abs(whole - (left + right)) < tol) return left + right;
  return gl_adaptive(f, a, 0.5 * (a + b), 0.5 * tol, depth - 1) +
         gl_adaptive(f, 0.5 * (a + b), b, 0.5 * tol, depth - 1);
}

}  // namespace anv
