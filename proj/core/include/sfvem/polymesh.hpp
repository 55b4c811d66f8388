#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sfvem/geometry.hpp"

namespace sfvem {

/// Label attached to the local edge `edge` (from vertex edge to edge+1) of `cell`.
struct BoundaryTag {
  std::size_t cell = 0;
  std::size_t edge = 0;
  std::string label;

  bool operator==(const BoundaryTag&) const = default;
};

/// Unique mesh edge; v0 < v1. `cells[1]` is npos on the boundary.
struct MeshEdge {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t v0 = 0, v1 = 0;
  std::size_t cells[2] = {npos, npos};
  std::size_t local[2] = {npos, npos};

  bool on_boundary() const { return cells[1] == npos; }
};

/// Conforming polygonal mesh with counter-clockwise cells. The constructor
/// validates every structural invariant and throws MeshError on violation.
class PolyMesh {
 public:
  PolyMesh() = default;
  PolyMesh(std::vector<Vec2> vertices, std::vector<std::vector<std::size_t>> cells,
           std::vector<BoundaryTag> boundary_labels = {}, std::string family_tag = {});

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::vector<std::size_t>>& cells() const { return cells_; }
  const std::vector<BoundaryTag>& boundary_labels() const { return labels_; }
  const std::string& family_tag() const { return family_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  Polygon cell_polygon(std::size_t c) const;
  const std::vector<MeshEdge>& edges() const { return edges_; }
  /// Global edge index of local edge j of cell c.
  std::size_t cell_edge(std::size_t c, std::size_t j) const { return cell_edges_[c][j]; }
  /// Label of a boundary edge, or nullopt if unlabeled.
  std::optional<std::string> edge_label(std::size_t edge) const;

  double max_diameter() const;
  double total_area() const;

 private:
  void build_topology();

  std::vector<Vec2> vertices_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<BoundaryTag> labels_;
  std::string family_;
  std::vector<MeshEdge> edges_;
  std::vector<std::vector<std::size_t>> cell_edges_;
  std::vector<std::optional<std::string>> edge_labels_;
};

/// Uniform nx-by-ny grid of the unit square. Sides labelled
/// "bottom", "right", "top", "left".
PolyMesh generate_cartesian(int nx, int ny);

/// n-by-n blocks, each split into a convex and a concave pentagon.
PolyMesh generate_concave_pentagons(int n);

/// Lloyd-relaxed Voronoi tessellation of the unit square from seeded sites.
PolyMesh generate_voronoi(int n_cells, int lloyd_iters, std::uint64_t seed);

/// Voronoi tessellation from explicit sites (no relaxation).
PolyMesh voronoi_from_sites(const std::vector<Vec2>& sites);

/// Replace every boundary label by labeler(edge start, edge end), where the
/// edge is traversed counter-clockwise around its cell.
PolyMesh relabel_boundary(const PolyMesh& mesh,
                          const std::function<std::string(const Vec2&, const Vec2&)>& labeler);

struct CellRegularity {
  double diameter = 0.0;
  double kernel_radius = 0.0;  ///< <= 0 when the kernel is empty
  double min_edge = 0.0;
  double radius_ratio = 0.0;   ///< kernel_radius / diameter
  double edge_ratio = 0.0;     ///< min_edge / diameter
  bool star_shaped = false;
};

struct RegularityReport {
  std::vector<CellRegularity> cells;
  double min_radius_ratio = 0.0;
  double min_edge_ratio = 0.0;
  std::vector<std::size_t> non_star_shaped;

  /// The mesh-regularity constant: min over both ratios.
  double constant() const;
};

CellRegularity check_cell_regularity(std::span<const Vec2> poly);
RegularityReport check_regularity(const PolyMesh& mesh);

/// JSON mesh file; numbers printed with 17 significant digits.
PolyMesh read_mesh(const std::filesystem::path& path);
PolyMesh parse_mesh(const std::string& text);
void write_mesh(const PolyMesh& mesh, const std::filesystem::path& path);
std::string format_mesh(const PolyMesh& mesh);

}  // namespace sfvem
