#pragma once

#include <array>
#include <vector>

#include "sfvem/geometry.hpp"
#include "sfvem/quadrature.hpp"

namespace sfvem {

struct EdgeGeometry {
  Vec2 start, end;
  double length = 0.0;
  Vec2 normal;  ///< outward unit normal
  /// Gauss rule along the edge: parameters t in [0,1] from start to end,
  /// physical points and weights (summing to length).
  std::vector<double> params;
  std::vector<Vec2> points;
  std::vector<double> weights;
};

/// Geometry and quadrature of one polygonal element.
///
/// The star centre is the Chebyshev centre of the kernel; the volume rule is
/// the union of collapsed Gauss rules on the fan triangles around it.
class ElementGeometry {
 public:
  /// volume_degree: total degree integrated exactly on each fan triangle.
  /// edge_points: Gauss points per edge.
  ElementGeometry(Polygon vertices, int volume_degree, int edge_points);

  /// Geometry sized for order k and increment ell: volume degree
  /// 2(k+ell)+2, k+ell+1 points per edge.
  static ElementGeometry for_order(Polygon vertices, int k, int ell);

  const Polygon& vertices() const { return vertices_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  double diameter() const { return diameter_; }
  double area() const { return area_; }
  const Vec2& center() const { return center_; }
  double kernel_radius() const { return kernel_radius_; }
  const std::vector<EdgeGeometry>& edges() const { return edges_; }
  const std::vector<std::array<Vec2, 3>>& triangles() const { return triangles_; }
  const QuadRule& volume_rule() const { return volume_; }
  int volume_degree() const { return volume_degree_; }
  int edge_points() const { return edge_points_; }

 private:
  Polygon vertices_;
  double diameter_ = 0.0;
  double area_ = 0.0;
  Vec2 center_ = Vec2::Zero();
  double kernel_radius_ = 0.0;
  std::vector<EdgeGeometry> edges_;
  std::vector<std::array<Vec2, 3>> triangles_;
  QuadRule volume_;
  int volume_degree_ = 0;
  int edge_points_ = 0;
};

}  // namespace sfvem
