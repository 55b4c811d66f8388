#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sfvem/local_space.hpp"
#include "sfvem/polymesh.hpp"
#include "sfvem/problem.hpp"
#include "sfvem/supg.hpp"

namespace sfvem {

/// Global numbering: vertex DOFs (by vertex index), then k-1 DOFs per edge
/// ordered from the lower to the higher vertex index, then the moment DOFs
/// of each cell.
class DofMap {
 public:
  DofMap(const PolyMesh& mesh, int k);

  int k() const { return k_; }
  std::size_t size() const { return size_; }
  std::size_t vertex_dof(std::size_t v) const { return v; }
  std::size_t edge_dof(std::size_t e, std::size_t m) const { return edge_base_ + e * per_edge_ + m; }
  std::size_t moment_dof(std::size_t c, std::size_t a) const { return moment_base_ + c * per_cell_ + a; }
  /// Local-to-global map of cell c, in LocalSpace DOF order.
  const std::vector<std::size_t>& cell_dofs(std::size_t c) const { return cell_dofs_[c]; }

 private:
  int k_;
  std::size_t per_edge_, per_cell_;
  std::size_t edge_base_, moment_base_, size_;
  std::vector<std::vector<std::size_t>> cell_dofs_;
};

enum class Method { StabilizationFree, Baseline };

struct SolveOptions {
  int k = 1;
  Method method = Method::StabilizationFree;
  /// Fixed increment for every cell; overrides the probe.
  std::optional<int> fixed_ell;
  /// Fixed increment by vertex count; cells not listed are probed.
  std::map<std::size_t, int> ell_by_vertices;
  double probe_tol = 1e-8;
  int ell_max = 6;
  ProbeCriterion probe_criterion = ProbeCriterion::Directional;
  /// Multiplies the baseline stabilization parameter.
  double sigma_scale = 1.0;
};

struct GlobalSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<char> dirichlet;   ///< 1 where the DOF is prescribed
  Eigen::VectorXd prescribed;    ///< values on Dirichlet DOFs, 0 elsewhere

  std::size_t size() const { return static_cast<std::size_t>(rhs.size()); }
};

/// Free-DOF system after elimination of the prescribed values.
struct ReducedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::size_t> free;  ///< global index of each reduced unknown
};

struct SolverReport {
  std::size_t n = 0;        ///< reduced system size
  double residual = 0.0;    ///< ||A x - b|| / ||b||
};

struct DiscreteSolution {
  Eigen::VectorXd dofs;
  std::vector<Eigen::VectorXd> pinabla;  ///< per-cell P_k coefficients of Pi-nabla u_h
  std::vector<int> ell;
  std::vector<double> tau, peclet;
  SolverReport report;
};

/// Scatter-add of local matrices and loads. Throws Error naming the cell if a
/// local entry is not finite.
GlobalSystem assemble(const DofMap& dofs, const std::vector<Eigen::MatrixXd>& local_matrices,
                      const std::vector<Eigen::VectorXd>& local_loads);

/// Marks boundary DOFs of labelled edges and fills their values from g.
/// Vertices shared by differently labelled edges use the label that ranks
/// first in g.priority. Throws MeshError on an unlabelled boundary edge.
void apply_dirichlet(GlobalSystem& system, const DirichletData& g, const PolyMesh& mesh, const DofMap& dofs);

ReducedSystem reduce(const GlobalSystem& system);

/// Sparse LU solve of the reduced system, scattered back to all DOFs.
/// Throws SolveError on a singular factorization or relative residual
/// above tol.
Eigen::VectorXd solve_system(const GlobalSystem& system, SolverReport& report, double tol = 1e-10);

/// Mesh, problem, local spaces and local forms for one method. Element
/// coefficients and error quadrature do not depend on ell, so both methods
/// see the same tau and the same error integration.
class Discretization {
 public:
  Discretization(const PolyMesh& mesh, ProblemData problem, SolveOptions options);

  const PolyMesh& mesh() const { return mesh_; }
  const ProblemData& problem() const { return problem_; }
  const SolveOptions& options() const { return options_; }
  const DofMap& dofs() const { return dofs_; }
  std::size_t num_cells() const { return spaces_.size(); }
  const LocalSpace& space(std::size_t c) const { return spaces_[c]; }
  const ElementCoefficients& coefficients(std::size_t c) const { return coeffs_[c]; }
  const LocalForms& forms(std::size_t c) const { return forms_[c]; }
  int ell(std::size_t c) const { return spaces_[c].ell(); }
  /// ell-independent rule for error integrals.
  const ElementGeometry& error_geometry(std::size_t c) const { return error_geoms_[c]; }

  GlobalSystem assemble() const;
  DiscreteSolution solve() const;

  /// Global interpolant of a function (nodal values and cell moments).
  Eigen::VectorXd interpolate(const ScalarField& f) const;
  /// Per-cell Pi-nabla coefficients of a global DOF vector.
  std::vector<Eigen::VectorXd> reconstruct(const Eigen::VectorXd& dofs) const;
  Eigen::VectorXd local_dofs(std::size_t c, const Eigen::VectorXd& dofs) const;

 private:
  PolyMesh mesh_;
  ProblemData problem_;
  SolveOptions options_;
  DofMap dofs_;
  std::vector<LocalSpace> spaces_;
  std::vector<ElementGeometry> error_geoms_;
  std::vector<ElementCoefficients> coeffs_;
  std::vector<LocalForms> forms_;
};

/// Relative energy error of Pi-nabla u_h against the exact solution:
/// sqrt(sum kappa |grad e|^2 + tau |beta . grad e|^2) over the same with e = u.
/// Throws Error when the problem has no exact solution or the denominator is
/// zero.
double energy_error(const Discretization& disc, const DiscreteSolution& sol);

/// sqrt(u^T A u) with A the assembled a_h (no boundary elimination).
double energy_norm_matrix(const Discretization& disc, const Eigen::VectorXd& dofs);
/// The same norm from quadrature of the projected gradients.
double energy_norm_quadrature(const Discretization& disc, const Eigen::VectorXd& dofs);

/// Pi-nabla u_h at a point; nullopt outside the mesh.
std::optional<double> evaluate(const Discretization& disc, const DiscreteSolution& sol, const Vec2& p);

/// Mean of the per-cell Peclet numbers.
double mean_peclet(const DiscreteSolution& sol);

}  // namespace sfvem
