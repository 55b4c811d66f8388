#include "sfvem/element.hpp"

#include "sfvem/error.hpp"

namespace sfvem {

ElementGeometry::ElementGeometry(Polygon vertices, int volume_degree, int edge_points)
    : vertices_(std::move(vertices)), volume_degree_(volume_degree), edge_points_(edge_points) {
  if (vertices_.size() < 3) throw GeometryError("element needs at least 3 vertices");
  diameter_ = sfvem::diameter(vertices_);
  area_ = signed_area(vertices_);
  if (!(area_ > 0.0)) throw GeometryError("element is not counter-clockwise");
  const InscribedCircle ball = chebyshev_center(edge_half_planes(vertices_));
  if (!(ball.radius > 1e-12 * diameter_))
    throw GeometryError("element is not star-shaped (empty kernel)");
  center_ = ball.center;
  kernel_radius_ = ball.radius;

  const LineRule line = gauss_legendre(edge_points);
  const std::size_t n = vertices_.size();
  edges_.reserve(n);
  triangles_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EdgeGeometry e;
    e.start = vertices_[i];
    e.end = vertices_[(i + 1) % n];
    const Vec2 d = e.end - e.start;
    e.length = d.norm();
    e.normal = Vec2(d.y(), -d.x()) / e.length;
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      e.params.push_back(line.points[q]);
      e.points.push_back(e.start + line.points[q] * d);
      e.weights.push_back(line.weights[q] * e.length);
    }
    edges_.push_back(std::move(e));

    triangles_.push_back({center_, vertices_[i], vertices_[(i + 1) % n]});
    const QuadRule tri = triangle_rule(center_, vertices_[i], vertices_[(i + 1) % n], volume_degree);
    volume_.points.insert(volume_.points.end(), tri.points.begin(), tri.points.end());
    volume_.weights.insert(volume_.weights.end(), tri.weights.begin(), tri.weights.end());
  }
}

ElementGeometry ElementGeometry::for_order(Polygon vertices, int k, int ell) {
  return ElementGeometry(std::move(vertices), 2 * (k + ell) + 2, k + ell + 1);
}

}  // namespace sfvem
