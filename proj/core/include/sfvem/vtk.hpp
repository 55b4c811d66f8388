#pragma once

#include <filesystem>
#include <string>

#include "sfvem/assembly.hpp"

namespace sfvem {

/// Legacy ASCII unstructured grid with one VTK_POLYGON per cell.
/// POINT_DATA: u_vertex. CELL_DATA: u_pi_center (Pi-nabla u_h at the star
/// centre), ell, peclet.
std::string format_vtk(const Discretization& disc, const DiscreteSolution& sol, const std::string& title = "sfvem");
void write_vtk(const Discretization& disc, const DiscreteSolution& sol, const std::filesystem::path& path,
               const std::string& title = "sfvem");

}  // namespace sfvem
