#include "sfvem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sfvem {

namespace {

// Legendre P_n and its derivative at x in [-1, 1].
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

LineRule compute_gauss_legendre(int n) {
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    // Map from [-1, 1] to [0, 1]; store in increasing order.
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

LineRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex mutex;
  static std::map<int, LineRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

std::vector<double> gauss_lobatto_nodes(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto_nodes: n must be >= 2");
  // Interior nodes are the roots of P'_{n-1}.
  const int m = n - 1;
  std::vector<double> nodes(n);
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  for (int j = 1; j < m; ++j) {
    double x = -std::cos(std::numbers::pi * j / m);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(m, x);
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[j] = 0.5 * (x + 1.0);
  }
  return nodes;
}

QuadRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree) {
  // Duffy map: (u, v) in [0,1]^2 -> a + u (b - a) + v (1 - u) (c - a).
  // The Jacobian factor (1 - u) raises the u-degree by one.
  const int nu = (degree + 3) / 2;
  const int nv = (degree + 2) / 2;
  const LineRule ru = gauss_legendre(nu);
  const LineRule rv = gauss_legendre(nv);
  const double jac = std::abs(orient(a, b, c));
  QuadRule rule;
  rule.points.reserve(static_cast<std::size_t>(nu * nv));
  rule.weights.reserve(static_cast<std::size_t>(nu * nv));
  for (int i = 0; i < nu; ++i) {
    const double u = ru.points[i];
    for (int j = 0; j < nv; ++j) {
      const double v = rv.points[j] * (1.0 - u);
      rule.points.push_back(a + u * (b - a) + v * (c - a));
      rule.weights.push_back(ru.weights[i] * rv.weights[j] * (1.0 - u) * jac);
    }
  }
  return rule;
}

}  // namespace sfvem
