#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfvem/assembly.hpp"
#include "sfvem/polymesh.hpp"

namespace sfvem {

enum class Family { T1, T2, T3 };

Family parse_family(const std::string& name);
std::string family_name(Family f);

/// Size parameter per family: cells per side (T1), blocks per side (T2),
/// number of Voronoi sites (T3).
PolyMesh make_family_mesh(Family family, int size, std::uint64_t seed = 42, int lloyd_iters = 50);

/// levels sizes starting at base: doubling for T1/T2, x4 cells for T3.
std::vector<int> default_schedule(Family family, int levels, int base = 0);

struct ExperimentConfig {
  std::string problem = "smooth";
  double kappa = 1e-6;             ///< smooth problem only
  Vec2 beta = Vec2(1.0, 0.545);    ///< smooth problem only
  Family family = Family::T1;
  std::vector<int> sizes;          ///< one mesh size per refinement level
  int k = 1;
  std::optional<int> ell;          ///< fixed ell; empty = probe
  std::map<std::size_t, int> ell_by_vertices;
  double probe_tol = 1e-8;
  int ell_max = 6;
  ProbeCriterion probe_criterion = ProbeCriterion::Directional;
  bool baseline = true;
  std::uint64_t seed = 42;         ///< T3 level i uses seed + i
  int lloyd_iters = 50;
  std::filesystem::path out_dir;   ///< empty = no files
  std::ostream* log = nullptr;

  /// Throws ConfigError on k outside 1..4, empty schedule, or bad values.
  void validate() const;
  SolveOptions solve_options(Method method) const;
};

struct ConvergenceRow {
  int level = 0;
  double h_max = 0.0;
  std::size_t n_dof = 0;
  double err_sf = 0.0;
  double err_vem = 0.0;   ///< NaN without baseline
  double ratio = 0.0;     ///< err_vem / err_sf
  double mean_pe = 0.0;
  double alpha_sf = 0.0;  ///< against the previous row; NaN on the first
  double alpha_vem = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;

  /// Rates from the last two rows.
  double alpha_sf() const;
  double alpha_vem() const;
};

/// log(e0/e1) / log(h0/h1).
double convergence_rate(double e0, double e1, double h0, double h1);

std::string convergence_csv_header();
std::string format_convergence_row(const ConvergenceRow& row);

/// Solves every level with the stabilization-free method and, if enabled,
/// the baseline; writes convergence.csv row by row so a failure leaves the
/// completed levels on disk. Throws ConfigError if the problem has no exact
/// solution. Mesh sizes must give strictly decreasing h_max.
ConvergenceReport run_convergence(const ExperimentConfig& config);

struct FieldResult {
  double min_vertex = 0.0;
  double max_vertex = 0.0;
  std::vector<std::filesystem::path> files;
};

/// Solves on the first configured mesh size and exports VTK files
/// (field_sf.vtk, and field_vem.vtk with baseline).
FieldResult run_field(const ExperimentConfig& config);

/// ell by (vertex count, k) for one family; -1 marks a probe failure.
struct ProbeTableColumn {
  Family family;
  std::size_t num_vertices = 0;
  std::size_t cells = 0;
  std::map<int, int> ell_by_k;  ///< largest ell over the cells, -1 if any cell fails
};

/// Probes every cell of the given mesh for k = 1..k_max.
std::vector<ProbeTableColumn> probe_family(Family family, const PolyMesh& mesh, int k_max, int ell_max,
                                           double tol, ProbeCriterion criterion);

/// Rows k = 1..k_max, one column per (family, vertex count); U+2014 marks a failed probe.
std::string format_probe_table(const std::vector<ProbeTableColumn>& columns, int k_max);

}  // namespace sfvem
