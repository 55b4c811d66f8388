#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sfvem/element.hpp"

namespace sfvem {

using Exponent = std::array<int, 2>;

/// Scaled monomials m_a(x) = ((x - xE)/hE)^a1 ((y - yE)/hE)^a2 of total
/// degree <= order, in graded-lexicographic order:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
class MonomialBasis {
 public:
  MonomialBasis(int order, Vec2 center, double scale);
  /// Basis on the element's star centre and diameter.
  MonomialBasis(int order, const ElementGeometry& geom);

  static std::size_t dim(int order) {
    return order < 0 ? 0 : static_cast<std::size_t>((order + 1) * (order + 2) / 2);
  }
  static std::size_t index(int a1, int a2) {
    const int d = a1 + a2;
    return static_cast<std::size_t>(d * (d + 1) / 2 + a2);
  }

  int order() const { return order_; }
  std::size_t size() const { return exponents_.size(); }
  const std::vector<Exponent>& exponents() const { return exponents_; }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }

  double value(std::size_t i, const Vec2& p) const;
  Eigen::VectorXd values(const Vec2& p) const;
  /// Entry (a, q) = m_a(points[q]).
  Eigen::MatrixXd eval(std::span<const Vec2> points) const;

  /// Coefficient maps of d/dx and d/dy: P_n -> P_{max(n-1,0)}.
  std::array<Eigen::MatrixXd, 2> grad_map() const;
  /// Coefficient map of the Laplacian: P_n -> P_{max(n-2,0)}.
  Eigen::MatrixXd laplace_map() const;

 private:
  int order_;
  Vec2 center_;
  double scale_;
  std::vector<Exponent> exponents_;
};

/// Divergence of a vector field in [P_n]^2 given as stacked coefficients
/// (x-component first): maps 2 dim(n) -> dim(max(n-1,0)).
Eigen::MatrixXd div_map(const MonomialBasis& basis);

/// H_ab = (m_a, m_b)_E. Throws if the rule is not exact to degree 2n.
Eigen::MatrixXd mass_matrix(const MonomialBasis& basis, const ElementGeometry& geom);
/// Block-diagonal diag(H, H).
Eigen::MatrixXd vector_mass_matrix(const MonomialBasis& basis, const ElementGeometry& geom);
/// S_ab = (grad m_a, grad m_b)_E.
Eigen::MatrixXd stiffness_matrix(const MonomialBasis& basis, const ElementGeometry& geom);

}  // namespace sfvem
