#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sfvem/error.hpp"
#include "sfvem/polymesh.hpp"

namespace sfvem {

namespace {

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string format_mesh(const PolyMesh& mesh) {
  std::ostringstream out;
  out << "{\n  \"vertices\": [";
  const auto& verts = mesh.vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out << (i ? ",\n    " : "\n    ") << '[' << number(verts[i].x()) << ", " << number(verts[i].y())
        << ']';
  }
  out << "\n  ],\n  \"cells\": [";
  const auto& cells = mesh.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    out << (c ? ",\n    " : "\n    ") << '[';
    for (std::size_t j = 0; j < cells[c].size(); ++j) out << (j ? ", " : "") << cells[c][j];
    out << ']';
  }
  out << "\n  ],\n  \"boundary_labels\": [";
  const auto& tags = mesh.boundary_labels();
  for (std::size_t i = 0; i < tags.size(); ++i) {
    out << (i ? ",\n    " : "\n    ") << "{\"cell\": " << tags[i].cell << ", \"edge\": " << tags[i].edge
        << ", \"label\": " << quoted(tags[i].label) << '}';
  }
  out << (tags.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

void write_mesh(const PolyMesh& mesh, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  file << format_mesh(mesh);
  if (!file) throw Error("failed writing " + path.string());
}

PolyMesh parse_mesh(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MeshError(std::string("malformed mesh file: ") + e.what());
  }
  if (!doc.is_object()) throw MeshError("mesh file: top level must be an object");
  for (const char* key : {"vertices", "cells"})
    if (!doc.contains(key) || !doc[key].is_array())
      throw MeshError(std::string("mesh file: missing array \"") + key + "\"");

  std::vector<Vec2> verts;
  const auto& jv = doc["vertices"];
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const auto& p = jv[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw MeshError("mesh file: vertex " + std::to_string(i) + " is not an [x, y] pair");
    verts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  std::vector<std::vector<std::size_t>> cells;
  const auto& jc = doc["cells"];
  for (std::size_t c = 0; c < jc.size(); ++c) {
    const auto& cell = jc[c];
    if (!cell.is_array()) throw MeshError("mesh file: cell " + std::to_string(c) + " is not an array");
    std::vector<std::size_t> ids;
    for (const auto& v : cell) {
      if (!v.is_number_unsigned())
        throw MeshError("mesh file: cell " + std::to_string(c) + " has a non-index entry");
      ids.push_back(v.get<std::size_t>());
    }
    cells.push_back(std::move(ids));
  }
  std::vector<BoundaryTag> tags;
  if (doc.contains("boundary_labels")) {
    const auto& jl = doc["boundary_labels"];
    if (!jl.is_array()) throw MeshError("mesh file: \"boundary_labels\" must be an array");
    for (std::size_t i = 0; i < jl.size(); ++i) {
      const auto& t = jl[i];
      if (!t.is_object() || !t.contains("cell") || !t.contains("edge") || !t.contains("label") ||
          !t["cell"].is_number_unsigned() || !t["edge"].is_number_unsigned() || !t["label"].is_string())
        throw MeshError("mesh file: boundary label " + std::to_string(i) + " is malformed");
      tags.push_back({t["cell"].get<std::size_t>(), t["edge"].get<std::size_t>(),
                      t["label"].get<std::string>()});
    }
  }
  return PolyMesh(std::move(verts), std::move(cells), std::move(tags));
}

PolyMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw MeshError("cannot open mesh file " + path.string());
  std::stringstream buf;
  buf << file.rdbuf();
  return parse_mesh(buf.str());
}

}  // namespace sfvem
