#include "sfvem/polymesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "sfvem/error.hpp"

namespace sfvem {

namespace {

std::string cell_context(std::size_t c) { return "cell " + std::to_string(c) + ": "; }

}  // namespace

PolyMesh::PolyMesh(std::vector<Vec2> vertices, std::vector<std::vector<std::size_t>> cells,
                   std::vector<BoundaryTag> boundary_labels, std::string family_tag)
    : vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      labels_(std::move(boundary_labels)),
      family_(std::move(family_tag)) {
  if (cells_.empty()) throw MeshError("mesh has no cells");
  std::vector<char> used(vertices_.size(), 0);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    if (cell.size() < 3) throw MeshError(cell_context(c) + "fewer than 3 vertices");
    for (std::size_t v : cell) {
      if (v >= vertices_.size())
        throw MeshError(cell_context(c) + "vertex index " + std::to_string(v) + " out of range");
      used[v] = 1;
    }
    std::vector<std::size_t> sorted = cell;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw MeshError(cell_context(c) + "repeated vertex index");
    const Polygon poly = cell_polygon(c);
    const double area = signed_area(poly);
    if (!(area > 0.0)) {
      std::ostringstream msg;
      msg << cell_context(c) << "vertices are not counter-clockwise (signed area " << area << ")";
      throw MeshError(msg.str());
    }
    if (!is_simple(poly)) throw MeshError(cell_context(c) + "polygon is self-intersecting");
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (!used[v]) throw MeshError("vertex " + std::to_string(v) + " is not referenced by any cell");
  build_topology();
}

void PolyMesh::build_topology() {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  cell_edges_.assign(cells_.size(), {});
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    cell_edges_[c].resize(cell.size());
    for (std::size_t j = 0; j < cell.size(); ++j) {
      const std::size_t a = cell[j];
      const std::size_t b = cell[(j + 1) % cell.size()];
      const auto key = std::minmax(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        MeshEdge e;
        e.v0 = key.first;
        e.v1 = key.second;
        e.cells[0] = c;
        e.local[0] = j;
        index.emplace(key, edges_.size());
        cell_edges_[c][j] = edges_.size();
        edges_.push_back(e);
        continue;
      }
      MeshEdge& e = edges_[it->second];
      if (!e.on_boundary())
        throw MeshError(cell_context(c) + "edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") shared by more than two cells");
      const auto& other = cells_[e.cells[0]];
      const std::size_t oa = other[e.local[0]];
      if (oa == a)
        throw MeshError(cell_context(c) + "edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") has the same orientation in cell " + std::to_string(e.cells[0]));
      e.cells[1] = c;
      e.local[1] = j;
      cell_edges_[c][j] = it->second;
    }
  }
  edge_labels_.assign(edges_.size(), std::nullopt);
  for (const auto& tag : labels_) {
    if (tag.cell >= cells_.size() || tag.edge >= cells_[tag.cell].size())
      throw MeshError("boundary label '" + tag.label + "' refers to missing cell " +
                      std::to_string(tag.cell) + " edge " + std::to_string(tag.edge));
    const std::size_t e = cell_edges_[tag.cell][tag.edge];
    if (!edges_[e].on_boundary())
      throw MeshError(cell_context(tag.cell) + "label '" + tag.label + "' on interior edge " +
                      std::to_string(tag.edge));
    if (edge_labels_[e])
      throw MeshError(cell_context(tag.cell) + "edge " + std::to_string(tag.edge) + " labelled twice");
    edge_labels_[e] = tag.label;
  }
}

Polygon PolyMesh::cell_polygon(std::size_t c) const {
  Polygon poly;
  poly.reserve(cells_[c].size());
  for (std::size_t v : cells_[c]) poly.push_back(vertices_[v]);
  return poly;
}

std::optional<std::string> PolyMesh::edge_label(std::size_t edge) const { return edge_labels_[edge]; }

double PolyMesh::max_diameter() const {
  double h = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) h = std::max(h, diameter(cell_polygon(c)));
  return h;
}

double PolyMesh::total_area() const {
  double a = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) a += signed_area(cell_polygon(c));
  return a;
}

PolyMesh relabel_boundary(const PolyMesh& mesh,
                          const std::function<std::string(const Vec2&, const Vec2&)>& labeler) {
  std::vector<BoundaryTag> tags;
  for (const auto& e : mesh.edges()) {
    if (!e.on_boundary()) continue;
    const auto& cell = mesh.cells()[e.cells[0]];
    const std::size_t j = e.local[0];
    const Vec2& a = mesh.vertices()[cell[j]];
    const Vec2& b = mesh.vertices()[cell[(j + 1) % cell.size()]];
    tags.push_back({e.cells[0], j, labeler(a, b)});
  }
  std::sort(tags.begin(), tags.end(), [](const BoundaryTag& x, const BoundaryTag& y) {
    return std::tie(x.cell, x.edge) < std::tie(y.cell, y.edge);
  });
  return PolyMesh(mesh.vertices(), mesh.cells(), std::move(tags), mesh.family_tag());
}

namespace {

std::string unit_square_side(const Vec2& a, const Vec2& b) {
  const Vec2 m = 0.5 * (a + b);
  const double tol = 1e-12;
  if (std::abs(m.y()) <= tol) return "bottom";
  if (std::abs(m.x() - 1.0) <= tol) return "right";
  if (std::abs(m.y() - 1.0) <= tol) return "top";
  if (std::abs(m.x()) <= tol) return "left";
  return "boundary";
}

}  // namespace

PolyMesh generate_cartesian(int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("generate_cartesian: cell counts must be >= 1");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts.emplace_back(static_cast<double>(i) / nx, static_cast<double>(j) / ny);
  auto id = [nx](int i, int j) { return static_cast<std::size_t>(j * (nx + 1) + i); };
  std::vector<std::vector<std::size_t>> cells;
  cells.reserve(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return relabel_boundary(PolyMesh(std::move(verts), std::move(cells), {}, "t1"), unit_square_side);
}

PolyMesh generate_concave_pentagons(int n) {
  if (n < 1) throw MeshError("generate_concave_pentagons: n must be >= 1");
  // Vertex lattice: block corners on (n+1)^2, edge midpoints on the
  // horizontal block edges n(n+1), and one interior point per block.
  std::vector<Vec2> verts;
  const double d = 1.0 / n;
  auto corner = [n](int i, int j) { return static_cast<std::size_t>(j * (n + 1) + i); };
  const std::size_t n_corner = static_cast<std::size_t>((n + 1) * (n + 1));
  auto midpoint = [n, n_corner](int i, int j) {
    return n_corner + static_cast<std::size_t>(j * n + i);
  };
  const std::size_t n_mid = static_cast<std::size_t>(n * (n + 1));
  auto inner = [n, n_corner, n_mid](int i, int j) {
    return n_corner + n_mid + static_cast<std::size_t>(j * n + i);
  };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(i * d, j * d);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i) verts.emplace_back((i + 0.5) * d, j * d);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) verts.emplace_back((i + 0.75) * d, (j + 0.5) * d);

  std::vector<std::vector<std::size_t>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t b = midpoint(i, j), t = midpoint(i, j + 1), p = inner(i, j);
      cells.push_back({corner(i, j), b, p, t, corner(i, j + 1)});
      cells.push_back({b, corner(i + 1, j), corner(i + 1, j + 1), t, p});
    }
  return relabel_boundary(PolyMesh(std::move(verts), std::move(cells), {}, "t2"), unit_square_side);
}

namespace {

// Deterministic uniform in [0, 1) from the top 53 bits.
double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

class SiteGrid {
 public:
  explicit SiteGrid(const std::vector<Vec2>& sites) : sites_(sites) {
    n_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(sites.size()))));
    bins_.assign(static_cast<std::size_t>(n_ * n_), {});
    for (std::size_t s = 0; s < sites.size(); ++s) bins_[bin_of(sites[s])].push_back(s);
  }

  // Voronoi cell of site s clipped to the unit square.
  Polygon cell(std::size_t s) const {
    const Vec2& p = sites_[s];
    Polygon poly{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
    const int bi = coord(p.x()), bj = coord(p.y());
    const double width = 1.0 / n_;
    for (int ring = 0; ring <= n_; ++ring) {
      double reach = 0.0;
      for (const auto& v : poly) reach = std::max(reach, (v - p).norm());
      if ((ring - 1) * width > 2.0 * reach) break;
      for (int j = bj - ring; j <= bj + ring; ++j)
        for (int i = bi - ring; i <= bi + ring; ++i) {
          if (std::max(std::abs(i - bi), std::abs(j - bj)) != ring) continue;
          if (i < 0 || j < 0 || i >= n_ || j >= n_) continue;
          for (std::size_t o : bins_[static_cast<std::size_t>(j * n_ + i)]) {
            if (o == s) continue;
            const Vec2 d = sites_[o] - p;
            const double len = d.norm();
            const Vec2 nrm = d / len;
            poly = clip(poly, {nrm, nrm.dot(0.5 * (p + sites_[o]))});
          }
        }
    }
    return poly;
  }

 private:
  int coord(double x) const { return std::clamp(static_cast<int>(x * n_), 0, n_ - 1); }
  std::size_t bin_of(const Vec2& p) const {
    return static_cast<std::size_t>(coord(p.y()) * n_ + coord(p.x()));
  }

  const std::vector<Vec2>& sites_;
  int n_ = 1;
  std::vector<std::vector<std::size_t>> bins_;
};

int boundary_class(const Vec2& p) {
  const double tol = 1e-12;
  const bool bx = std::abs(p.x()) <= tol || std::abs(p.x() - 1.0) <= tol;
  const bool by = std::abs(p.y()) <= tol || std::abs(p.y() - 1.0) <= tol;
  return (bx && by) ? 2 : (bx || by) ? 1 : 0;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Build a conforming mesh from independently computed cell polygons by
// merging vertices closer than tol.
PolyMesh merge_cells(const std::vector<Polygon>& polys, double tol) {
  std::vector<Vec2> raw;
  std::vector<std::vector<std::size_t>> raw_cells;
  for (const auto& poly : polys) {
    std::vector<std::size_t> ids;
    for (const auto& v : poly) {
      ids.push_back(raw.size());
      raw.push_back(v);
    }
    raw_cells.push_back(std::move(ids));
  }
  UnionFind uf(raw.size());
  const double inv = 1.0 / tol;
  std::map<std::pair<long, long>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const long bx = static_cast<long>(std::floor(raw[i].x() * inv));
    const long by = static_cast<long>(std::floor(raw[i].y() * inv));
    for (long dy = -1; dy <= 1; ++dy)
      for (long dx = -1; dx <= 1; ++dx) {
        auto it = buckets.find({bx + dx, by + dy});
        if (it == buckets.end()) continue;
        for (std::size_t j : it->second)
          if ((raw[i] - raw[j]).norm() <= tol) uf.unite(i, j);
      }
    buckets[{bx, by}].push_back(i);
  }
  // Representative position: the highest boundary class wins, then the lowest id.
  std::map<std::size_t, std::size_t> rep_source;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t root = uf.find(i);
    auto it = rep_source.find(root);
    if (it == rep_source.end() || boundary_class(raw[i]) > boundary_class(raw[it->second]))
      rep_source[root] = i;
  }
  std::map<std::size_t, std::size_t> new_id;
  std::vector<Vec2> verts;
  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t c = 0; c < raw_cells.size(); ++c) {
    std::vector<std::size_t> cell;
    for (std::size_t i : raw_cells[c]) {
      const std::size_t root = uf.find(i);
      auto it = new_id.find(root);
      if (it == new_id.end()) {
        it = new_id.emplace(root, verts.size()).first;
        verts.push_back(raw[rep_source[root]]);
      }
      if (cell.empty() || cell.back() != it->second) cell.push_back(it->second);
    }
    while (cell.size() > 1 && cell.front() == cell.back()) cell.pop_back();
    if (cell.size() < 3)
      throw MeshError("voronoi: cell " + std::to_string(c) + " collapsed while merging vertices");
    cells.push_back(std::move(cell));
  }
  return PolyMesh(std::move(verts), std::move(cells), {}, "t3");
}

}  // namespace

PolyMesh voronoi_from_sites(const std::vector<Vec2>& sites) {
  if (sites.size() < 2) throw MeshError("voronoi: need at least 2 sites");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!(sites[i].x() > 0.0 && sites[i].x() < 1.0 && sites[i].y() > 0.0 && sites[i].y() < 1.0))
      throw MeshError("voronoi: site " + std::to_string(i) + " outside the unit square");
    for (std::size_t j = i + 1; j < sites.size(); ++j)
      if ((sites[i] - sites[j]).norm() <= 1e-14)
        throw MeshError("voronoi: duplicate sites " + std::to_string(i) + " and " + std::to_string(j));
  }
  SiteGrid grid(sites);
  std::vector<Polygon> polys;
  polys.reserve(sites.size());
  for (std::size_t s = 0; s < sites.size(); ++s) polys.push_back(grid.cell(s));
  // Edges shorter than 1% of the typical cell size are collapsed.
  const double tol = 1e-2 / std::sqrt(static_cast<double>(sites.size()));
  return relabel_boundary(merge_cells(polys, tol), unit_square_side);
}

PolyMesh generate_voronoi(int n_cells, int lloyd_iters, std::uint64_t seed) {
  if (n_cells < 2) throw MeshError("generate_voronoi: n_cells must be >= 2");
  if (lloyd_iters < 0) throw MeshError("generate_voronoi: lloyd_iters must be >= 0");
  std::mt19937_64 rng(seed);
  std::vector<Vec2> sites(static_cast<std::size_t>(n_cells));
  for (auto& s : sites) {
    const double x = uniform01(rng());
    const double y = uniform01(rng());
    s = Vec2(x, y);
  }
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j)
      if ((sites[i] - sites[j]).norm() <= 1e-14)
        throw MeshError("generate_voronoi: duplicate sites from seed");
  for (int it = 0; it < lloyd_iters; ++it) {
    SiteGrid grid(sites);
    std::vector<Vec2> next(sites.size());
    for (std::size_t s = 0; s < sites.size(); ++s) next[s] = area_centroid(grid.cell(s));
    sites = std::move(next);
  }
  return voronoi_from_sites(sites);
}

double RegularityReport::constant() const { return std::min(min_radius_ratio, min_edge_ratio); }

CellRegularity check_cell_regularity(std::span<const Vec2> poly) {
  CellRegularity r;
  r.diameter = diameter(poly);
  const auto planes = edge_half_planes(poly);
  const InscribedCircle ball = chebyshev_center(planes);
  r.kernel_radius = ball.radius;
  r.min_edge = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    r.min_edge = std::min(r.min_edge, (poly[(i + 1) % poly.size()] - poly[i]).norm());
  r.star_shaped = ball.radius > 1e-12 * r.diameter;
  r.radius_ratio = r.star_shaped ? ball.radius / r.diameter : 0.0;
  r.edge_ratio = r.min_edge / r.diameter;
  return r;
}

RegularityReport check_regularity(const PolyMesh& mesh) {
  RegularityReport rep;
  rep.min_radius_ratio = std::numeric_limits<double>::infinity();
  rep.min_edge_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    CellRegularity r = check_cell_regularity(mesh.cell_polygon(c));
    if (!r.star_shaped) rep.non_star_shaped.push_back(c);
    rep.min_radius_ratio = std::min(rep.min_radius_ratio, r.radius_ratio);
    rep.min_edge_ratio = std::min(rep.min_edge_ratio, r.edge_ratio);
    rep.cells.push_back(r);
  }
  return rep;
}

}  // namespace sfvem
