#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sfvem/element.hpp"
#include "sfvem/monomials.hpp"

namespace sfvem {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// Local degrees of freedom of the order-k space on a polygon with
/// num_vertices vertices, ordered as: vertex values, then k-1 values per
/// edge at interior Gauss-Lobatto points (edge j runs from vertex j to
/// j+1), then the scaled moments (1/|E|)(v, m_a) for |a| <= k-2.
struct DofLayout {
  int k = 1;
  std::size_t num_vertices = 0;

  std::size_t per_edge() const { return static_cast<std::size_t>(k - 1); }
  std::size_t num_nodal() const { return num_vertices * static_cast<std::size_t>(k); }
  std::size_t num_moments() const { return MonomialBasis::dim(k - 2); }
  std::size_t size() const { return num_nodal() + num_moments(); }

  std::size_t vertex(std::size_t j) const { return j; }
  std::size_t edge(std::size_t j, std::size_t m) const { return num_vertices + j * per_edge() + m; }
  std::size_t moment(std::size_t a) const { return num_nodal() + a; }
};

/// Lagrange trace of the local basis on one edge.
struct EdgeTrace {
  std::vector<std::size_t> dofs;  ///< k+1 local DOFs from start to end
  Eigen::MatrixXd values;         ///< (k+1) x (edge quadrature points)
};

/// L2 projection of gradients onto [P_degree]^2: coefficient matrices
/// dim(degree) x ndof for each component.
struct GradientProjection {
  int degree = 0;
  Eigen::MatrixXd x, y;
};

/// Degrees of enhancement-constrained moments for (k, ell): k >= 2 gives
/// k-1 .. k+ell, k = 1 gives 0 .. 1+ell.
std::pair<int, int> enhanced_degree_range(int k, int ell);

/// Interior Gauss-Lobatto parameters of the k-1 edge DOFs.
std::vector<double> edge_dof_params(int k);

struct PiNabla {
  Eigen::MatrixXd coeff;  ///< ndof -> P_k coefficients
  Eigen::MatrixXd dof;    ///< ndof -> DOFs of the projected polynomial
};

/// Enlarged-enhancement virtual element space on one element, together with
/// every computable projector. Immutable after construction.
class LocalSpace {
 public:
  LocalSpace(const Polygon& polygon, int k, int ell);

  int k() const { return k_; }
  int ell() const { return ell_; }
  const ElementGeometry& geometry() const { return geom_; }
  const DofLayout& layout() const { return layout_; }
  std::size_t num_dofs() const { return layout_.size(); }
  /// Positions of the nodal DOFs (vertices then edge points).
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<EdgeTrace>& edge_traces() const { return traces_; }

  const PiNabla& pinabla() const { return pinabla_; }
  /// (phi_i, m_a) for |a| <= k+ell; rows over P_{k+ell}.
  const Eigen::MatrixXd& moments() const { return moments_; }
  /// Mass matrix over P_{k+ell}.
  const Eigen::MatrixXd& mass() const { return mass_; }
  /// Pi0_{k+ell-1} grad.
  const GradientProjection& grad_high() const { return grad_high_; }
  /// Pi0_{k-1} grad.
  const GradientProjection& grad_low() const { return grad_low_; }
  /// Pi0_{k-1} on scalars.
  const Eigen::MatrixXd& pizero_low() const { return pizero_low_; }

  /// Pi0_n on scalars for n <= k+ell.
  Eigen::MatrixXd pizero_scalar(int n) const;
  MonomialBasis basis(int n) const { return MonomialBasis(n, geom_); }

  /// DOF vector of a function: nodal values and scaled moments by quadrature.
  Eigen::VectorXd interpolate(const ScalarField& f) const;

 private:
  int k_, ell_;
  ElementGeometry geom_;
  DofLayout layout_;
  std::vector<Vec2> nodes_;
  std::vector<EdgeTrace> traces_;
  PiNabla pinabla_;
  Eigen::MatrixXd moments_, mass_;
  GradientProjection grad_high_, grad_low_;
  Eigen::MatrixXd pizero_low_;
};

/// Pi-nabla_k from the DOFs via integration by parts.
PiNabla build_pinabla(const ElementGeometry& geom, const DofLayout& layout,
                      const std::vector<EdgeTrace>& traces, const std::vector<Vec2>& nodes);

/// Moment matrix (phi_i, m_a) up to degree k+ell; mass is H over P_{k+ell}.
Eigen::MatrixXd build_moments(const DofLayout& layout, int ell, const PiNabla& pinabla,
                              const Eigen::MatrixXd& mass, double area);

/// Solves H X = moments rows of degree <= n.
Eigen::MatrixXd build_pizero_scalar(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& moments, int n);

/// Pi0_degree grad via (d_d phi, m_a) = -(phi, d_d m_a) + int_dE phi m_a n_d.
GradientProjection build_pizero_grad(const ElementGeometry& geom, const std::vector<EdgeTrace>& traces,
                                     const Eigen::MatrixXd& mass, const Eigen::MatrixXd& moments,
                                     std::size_t ndof, int degree);

}  // namespace sfvem
