#include "sfvem/vtk.hpp"

#include <cstdio>
#include <fstream>

#include "sfvem/error.hpp"

namespace sfvem {

namespace {

constexpr int kVtkPolygon = 7;

void put(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string format_vtk(const Discretization& disc, const DiscreteSolution& sol, const std::string& title) {
  const PolyMesh& mesh = disc.mesh();
  const std::size_t nv = mesh.num_vertices(), nc = mesh.num_cells();
  std::string out;
  out += "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(nv) + " double\n";
  for (const auto& p : mesh.vertices()) {
    put(out, p.x());
    out += ' ';
    put(out, p.y());
    out += " 0\n";
  }
  std::size_t total = 0;
  for (const auto& cell : mesh.cells()) total += cell.size() + 1;
  out += "CELLS " + std::to_string(nc) + " " + std::to_string(total) + "\n";
  for (const auto& cell : mesh.cells()) {
    out += std::to_string(cell.size());
    for (std::size_t v : cell) out += " " + std::to_string(v);
    out += '\n';
  }
  out += "CELL_TYPES " + std::to_string(nc) + "\n";
  for (std::size_t c = 0; c < nc; ++c) out += std::to_string(kVtkPolygon) + "\n";

  out += "POINT_DATA " + std::to_string(nv) + "\nSCALARS u_vertex double 1\nLOOKUP_TABLE default\n";
  for (std::size_t v = 0; v < nv; ++v) {
    put(out, sol.dofs(static_cast<Eigen::Index>(disc.dofs().vertex_dof(v))));
    out += '\n';
  }

  out += "CELL_DATA " + std::to_string(nc) + "\nSCALARS u_pi_center double 1\nLOOKUP_TABLE default\n";
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& space = disc.space(c);
    put(out, space.basis(space.k()).values(space.geometry().center()).dot(sol.pinabla[c]));
    out += '\n';
  }
  out += "SCALARS ell int 1\nLOOKUP_TABLE default\n";
  for (std::size_t c = 0; c < nc; ++c) out += std::to_string(sol.ell[c]) + "\n";
  out += "SCALARS peclet double 1\nLOOKUP_TABLE default\n";
  for (std::size_t c = 0; c < nc; ++c) {
    put(out, sol.peclet[c]);
    out += '\n';
  }
  return out;
}

void write_vtk(const Discretization& disc, const DiscreteSolution& sol, const std::filesystem::path& path,
               const std::string& title) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("write_vtk: cannot open " + path.string());
  f << format_vtk(disc, sol, title);
  if (!f) throw Error("write_vtk: write failed for " + path.string());
}

}  // namespace sfvem
