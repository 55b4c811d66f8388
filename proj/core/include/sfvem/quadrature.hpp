#pragma once

#include <vector>

#include "sfvem/geometry.hpp"

namespace sfvem {

/// One-dimensional rule on [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Two-dimensional rule in physical coordinates.
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre rule with n points on [0, 1], exact to degree 2n - 1.
LineRule gauss_legendre(int n);

/// Gauss-Lobatto nodes on [0, 1] with n >= 2 points, endpoints included.
std::vector<double> gauss_lobatto_nodes(int n);

/// Collapsed-coordinate (conical product) rule on the triangle (a, b, c),
/// exact for polynomials of total degree <= degree.
QuadRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree);

}  // namespace sfvem
