#include "sfvem/monomials.hpp"

#include <cmath>

#include "sfvem/error.hpp"

namespace sfvem {

MonomialBasis::MonomialBasis(int order, Vec2 center, double scale)
    : order_(order), center_(std::move(center)), scale_(scale) {
  if (order < 0) throw Error("MonomialBasis: negative order");
  for (int d = 0; d <= order; ++d)
    for (int a2 = 0; a2 <= d; ++a2) exponents_.push_back({d - a2, a2});
}

MonomialBasis::MonomialBasis(int order, const ElementGeometry& geom)
    : MonomialBasis(order, geom.center(), geom.diameter()) {}

double MonomialBasis::value(std::size_t i, const Vec2& p) const {
  const double sx = (p.x() - center_.x()) / scale_;
  const double sy = (p.y() - center_.y()) / scale_;
  return std::pow(sx, exponents_[i][0]) * std::pow(sy, exponents_[i][1]);
}

Eigen::VectorXd MonomialBasis::values(const Vec2& p) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
  const double sx = (p.x() - center_.x()) / scale_;
  const double sy = (p.y() - center_.y()) / scale_;
  // Build degree by degree: m_(d-a2, a2) from the previous degree.
  v(0) = 1.0;
  for (int d = 1; d <= order_; ++d) {
    const std::size_t prev = index(d - 1, 0);
    const std::size_t cur = index(d, 0);
    for (int a2 = 0; a2 < d; ++a2) v(static_cast<Eigen::Index>(cur + a2)) = v(prev + a2) * sx;
    v(static_cast<Eigen::Index>(cur + d)) = v(prev + d - 1) * sy;
  }
  return v;
}

Eigen::MatrixXd MonomialBasis::eval(std::span<const Vec2> points) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(points.size()));
  for (std::size_t q = 0; q < points.size(); ++q) out.col(static_cast<Eigen::Index>(q)) = values(points[q]);
  return out;
}

std::array<Eigen::MatrixXd, 2> MonomialBasis::grad_map() const {
  const auto rows = static_cast<Eigen::Index>(dim(std::max(order_ - 1, 0)));
  const auto cols = static_cast<Eigen::Index>(size());
  std::array<Eigen::MatrixXd, 2> g{Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols)};
  for (std::size_t i = 0; i < size(); ++i) {
    const auto [a1, a2] = exponents_[i];
    if (a1 > 0) g[0](static_cast<Eigen::Index>(index(a1 - 1, a2)), static_cast<Eigen::Index>(i)) = a1 / scale_;
    if (a2 > 0) g[1](static_cast<Eigen::Index>(index(a1, a2 - 1)), static_cast<Eigen::Index>(i)) = a2 / scale_;
  }
  return g;
}

Eigen::MatrixXd MonomialBasis::laplace_map() const {
  const auto rows = static_cast<Eigen::Index>(dim(std::max(order_ - 2, 0)));
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(size()));
  const double h2 = scale_ * scale_;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto [a1, a2] = exponents_[i];
    if (a1 > 1) l(static_cast<Eigen::Index>(index(a1 - 2, a2)), static_cast<Eigen::Index>(i)) += a1 * (a1 - 1) / h2;
    if (a2 > 1) l(static_cast<Eigen::Index>(index(a1, a2 - 2)), static_cast<Eigen::Index>(i)) += a2 * (a2 - 1) / h2;
  }
  return l;
}

Eigen::MatrixXd div_map(const MonomialBasis& basis) {
  const auto g = basis.grad_map();
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd d(g[0].rows(), 2 * n);
  d.leftCols(n) = g[0];
  d.rightCols(n) = g[1];
  return d;
}

Eigen::MatrixXd mass_matrix(const MonomialBasis& basis, const ElementGeometry& geom) {
  if (geom.volume_degree() < 2 * basis.order())
    throw Error("mass_matrix: quadrature degree " + std::to_string(geom.volume_degree()) +
                " insufficient for order " + std::to_string(basis.order()));
  const QuadRule& rule = geom.volume_rule();
  const Eigen::MatrixXd m = basis.eval(rule.points);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
  Eigen::MatrixXd h = m * w.asDiagonal() * m.transpose();
  return 0.5 * (h + h.transpose());
}

Eigen::MatrixXd vector_mass_matrix(const MonomialBasis& basis, const ElementGeometry& geom) {
  const Eigen::MatrixXd h = mass_matrix(basis, geom);
  const auto n = h.rows();
  Eigen::MatrixXd hv = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  hv.topLeftCorner(n, n) = h;
  hv.bottomRightCorner(n, n) = h;
  return hv;
}

Eigen::MatrixXd stiffness_matrix(const MonomialBasis& basis, const ElementGeometry& geom) {
  if (basis.order() == 0) return Eigen::MatrixXd::Zero(1, 1);
  const MonomialBasis lower(basis.order() - 1, basis.center(), basis.scale());
  const Eigen::MatrixXd hl = mass_matrix(lower, geom);
  const auto g = basis.grad_map();
  Eigen::MatrixXd s = g[0].transpose() * hl * g[0] + g[1].transpose() * hl * g[1];
  return 0.5 * (s + s.transpose());
}

}  // namespace sfvem
