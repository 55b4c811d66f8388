#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sfvem {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

/// Oriented line constraint o . x <= offset, with |o| = 1.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
};

/// Largest disc inside a convex region given as half-planes.
struct InscribedCircle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

double signed_area(std::span<const Vec2> poly);
Vec2 area_centroid(std::span<const Vec2> poly);
double diameter(std::span<const Vec2> poly);

/// Cross product z-component of (b - a) x (c - a).
inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

/// True when no two non-adjacent edges touch.
bool is_simple(std::span<const Vec2> poly);

/// Inner half-planes of the edges of a counter-clockwise polygon.
std::vector<HalfPlane> edge_half_planes(std::span<const Vec2> poly);

/// Clip a convex polygon against one half-plane (Sutherland-Hodgman step).
Polygon clip(std::span<const Vec2> convex, const HalfPlane& hp);

/// Kernel (visibility region) of a counter-clockwise polygon. Empty when the
/// polygon is not star-shaped.
Polygon kernel_polygon(std::span<const Vec2> poly);

/// Chebyshev centre of the intersection of the given half-planes. Radius is
/// <= 0 when the intersection has empty interior. Ties between optimal
/// vertices are resolved by averaging them.
InscribedCircle chebyshev_center(std::span<const HalfPlane> planes);

/// Point-in-polygon test (boundary counts as inside within tol).
bool contains(std::span<const Vec2> poly, const Vec2& p, double tol = 1e-12);

}  // namespace sfvem
