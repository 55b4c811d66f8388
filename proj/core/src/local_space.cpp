#include "sfvem/local_space.hpp"

#include "sfvem/error.hpp"
#include "sfvem/quadrature.hpp"

namespace sfvem {

namespace {

constexpr double kMinRcond = 1e-14;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double lagrange(const std::vector<double>& nodes, std::size_t r, double t) {
  double v = 1.0;
  for (std::size_t s = 0; s < nodes.size(); ++s)
    if (s != r) v *= (t - nodes[s]) / (nodes[r] - nodes[s]);
  return v;
}

Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw GeometryError(std::string(what) + ": Gram matrix not positive definite");
  return llt.solve(b);
}

}  // namespace

std::pair<int, int> enhanced_degree_range(int k, int ell) {
  if (k == 1) return {0, 1 + ell};
  return {k - 1, k + ell};
}

std::vector<double> edge_dof_params(int k) {
  if (k < 2) return {};
  std::vector<double> lob = gauss_lobatto_nodes(k + 1);
  return {lob.begin() + 1, lob.end() - 1};
}

PiNabla build_pinabla(const ElementGeometry& geom, const DofLayout& layout,
                      const std::vector<EdgeTrace>& traces, const std::vector<Vec2>& nodes) {
  const int k = layout.k;
  const MonomialBasis basis(k, geom);
  const auto nk = idx(basis.size());
  const auto ndof = idx(layout.size());
  const double area = geom.area();

  Eigen::MatrixXd g = stiffness_matrix(basis, geom);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nk, ndof);

  // Interior term -(phi_i, lap m_a) through the moment DOFs.
  if (k >= 2) {
    const Eigen::MatrixXd lap = basis.laplace_map();
    for (Eigen::Index a = 0; a < nk; ++a)
      for (Eigen::Index m = 0; m < lap.rows(); ++m)
        b(a, idx(layout.moment(static_cast<std::size_t>(m)))) -= area * lap(m, a);
  }
  // Boundary term int phi_i d m_a / dn.
  const MonomialBasis lower(std::max(k - 1, 0), geom);
  const auto grad = basis.grad_map();
  Eigen::RowVectorXd boundary_mean_poly = Eigen::RowVectorXd::Zero(nk);
  Eigen::RowVectorXd boundary_mean_dof = Eigen::RowVectorXd::Zero(ndof);
  for (std::size_t e = 0; e < geom.edges().size(); ++e) {
    const auto& edge = geom.edges()[e];
    const auto& tr = traces[e];
    for (std::size_t q = 0; q < edge.points.size(); ++q) {
      const Eigen::VectorXd lv = lower.values(edge.points[q]);
      const Eigen::VectorXd dn = (grad[0].transpose() * lv) * edge.normal.x() +
                                 (grad[1].transpose() * lv) * edge.normal.y();
      const double w = edge.weights[q];
      for (std::size_t r = 0; r < tr.dofs.size(); ++r) {
        const double phi = tr.values(idx(r), idx(q));
        b.col(idx(tr.dofs[r])) += (w * phi) * dn;
        boundary_mean_dof(idx(tr.dofs[r])) += w * phi;
      }
      boundary_mean_poly += w * basis.values(edge.points[q]).transpose();
    }
  }
  // Mean condition replaces the (trivial) constant row.
  if (k == 1) {
    g.row(0) = boundary_mean_poly;
    b.row(0) = boundary_mean_dof;
  } else {
    const Eigen::MatrixXd h = mass_matrix(basis, geom);
    g.row(0) = h.row(0);
    b.row(0).setZero();
    b(0, idx(layout.moment(0))) = area;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
  if (!(lu.rcond() >= kMinRcond)) throw GeometryError("build_pinabla: singular augmented Gram matrix");

  PiNabla out;
  out.coeff = lu.solve(b);

  // DOFs of the monomials.
  Eigen::MatrixXd d(ndof, nk);
  for (std::size_t i = 0; i < nodes.size(); ++i) d.row(idx(i)) = basis.values(nodes[i]).transpose();
  if (layout.num_moments() > 0) {
    const Eigen::MatrixXd h = mass_matrix(basis, geom);
    for (std::size_t m = 0; m < layout.num_moments(); ++m)
      d.row(idx(layout.moment(m))) = h.row(idx(m)) / area;
  }
  out.dof = d * out.coeff;
  return out;
}

Eigen::MatrixXd build_moments(const DofLayout& layout, int ell, const PiNabla& pinabla,
                              const Eigen::MatrixXd& mass, double area) {
  const int k = layout.k;
  const auto [lo, hi] = enhanced_degree_range(k, ell);
  const auto n_hi = idx(MonomialBasis::dim(hi));
  if (mass.rows() < n_hi) throw Error("build_moments: mass matrix too small");
  const auto nk = pinabla.coeff.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_hi, idx(layout.size()));
  for (std::size_t a = 0; a < layout.num_moments(); ++a) m(idx(a), idx(layout.moment(a))) = area;
  const auto first = idx(MonomialBasis::dim(lo - 1));
  m.middleRows(first, n_hi - first) = mass.block(first, 0, n_hi - first, nk) * pinabla.coeff;
  return m;
}

Eigen::MatrixXd build_pizero_scalar(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& moments, int n) {
  const auto dn = idx(MonomialBasis::dim(n));
  if (moments.rows() < dn) throw Error("build_pizero_scalar: moments not available to degree " + std::to_string(n));
  return spd_solve(mass.topLeftCorner(dn, dn), moments.topRows(dn), "build_pizero_scalar");
}

GradientProjection build_pizero_grad(const ElementGeometry& geom, const std::vector<EdgeTrace>& traces,
                                     const Eigen::MatrixXd& mass, const Eigen::MatrixXd& moments,
                                     std::size_t ndof, int degree) {
  const MonomialBasis basis(degree, geom);
  const auto n = idx(basis.size());
  const auto nlow = idx(MonomialBasis::dim(degree - 1));
  if (moments.rows() < nlow) throw Error("build_pizero_grad: moments not available");

  Eigen::MatrixXd rx = Eigen::MatrixXd::Zero(n, idx(ndof));
  Eigen::MatrixXd ry = Eigen::MatrixXd::Zero(n, idx(ndof));
  if (degree >= 1) {
    const auto grad = basis.grad_map();
    rx -= grad[0].transpose() * moments.topRows(nlow);
    ry -= grad[1].transpose() * moments.topRows(nlow);
  }
  for (std::size_t e = 0; e < geom.edges().size(); ++e) {
    const auto& edge = geom.edges()[e];
    const auto& tr = traces[e];
    for (std::size_t q = 0; q < edge.points.size(); ++q) {
      const Eigen::VectorXd mv = basis.values(edge.points[q]);
      const double w = edge.weights[q];
      for (std::size_t r = 0; r < tr.dofs.size(); ++r) {
        const double s = w * tr.values(idx(r), idx(q));
        rx.col(idx(tr.dofs[r])) += (s * edge.normal.x()) * mv;
        ry.col(idx(tr.dofs[r])) += (s * edge.normal.y()) * mv;
      }
    }
  }
  const Eigen::MatrixXd h = mass.topLeftCorner(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) throw GeometryError("build_pizero_grad: Gram matrix not positive definite");
  GradientProjection out;
  out.degree = degree;
  out.x = llt.solve(rx);
  out.y = llt.solve(ry);
  return out;
}

LocalSpace::LocalSpace(const Polygon& polygon, int k, int ell)
    : k_(k), ell_(ell), geom_(ElementGeometry::for_order(polygon, k, ell)) {
  if (k < 1) throw Error("LocalSpace: k must be >= 1");
  if (ell < 0) throw Error("LocalSpace: ell must be >= 0");
  layout_.k = k;
  layout_.num_vertices = polygon.size();

  const std::vector<double> interior = edge_dof_params(k);
  std::vector<double> trace_nodes{0.0};
  trace_nodes.insert(trace_nodes.end(), interior.begin(), interior.end());
  trace_nodes.push_back(1.0);

  const std::size_t nv = polygon.size();
  nodes_.resize(layout_.num_nodal());
  for (std::size_t j = 0; j < nv; ++j) nodes_[layout_.vertex(j)] = polygon[j];
  for (std::size_t j = 0; j < nv; ++j) {
    const auto& edge = geom_.edges()[j];
    for (std::size_t m = 0; m < interior.size(); ++m)
      nodes_[layout_.edge(j, m)] = edge.start + interior[m] * (edge.end - edge.start);

    EdgeTrace tr;
    tr.dofs.push_back(layout_.vertex(j));
    for (std::size_t m = 0; m < interior.size(); ++m) tr.dofs.push_back(layout_.edge(j, m));
    tr.dofs.push_back(layout_.vertex((j + 1) % nv));
    tr.values.resize(idx(trace_nodes.size()), idx(edge.params.size()));
    for (std::size_t r = 0; r < trace_nodes.size(); ++r)
      for (std::size_t q = 0; q < edge.params.size(); ++q)
        tr.values(idx(r), idx(q)) = lagrange(trace_nodes, r, edge.params[q]);
    traces_.push_back(std::move(tr));
  }

  pinabla_ = build_pinabla(geom_, layout_, traces_, nodes_);
  mass_ = mass_matrix(MonomialBasis(k + ell, geom_), geom_);
  moments_ = build_moments(layout_, ell, pinabla_, mass_, geom_.area());
  grad_high_ = build_pizero_grad(geom_, traces_, mass_, moments_, num_dofs(), k + ell - 1);
  grad_low_ = build_pizero_grad(geom_, traces_, mass_, moments_, num_dofs(), k - 1);
  pizero_low_ = build_pizero_scalar(mass_, moments_, k - 1);
}

Eigen::MatrixXd LocalSpace::pizero_scalar(int n) const {
  if (n < 0 || n > k_ + ell_) throw Error("pizero_scalar: degree out of range");
  return build_pizero_scalar(mass_, moments_, n);
}

Eigen::VectorXd LocalSpace::interpolate(const ScalarField& f) const {
  Eigen::VectorXd v(idx(num_dofs()));
  for (std::size_t i = 0; i < nodes_.size(); ++i) v(idx(i)) = f(nodes_[i]);
  if (layout_.num_moments() > 0) {
    const MonomialBasis low(k_ - 2, geom_);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(idx(low.size()));
    const QuadRule& rule = geom_.volume_rule();
    for (std::size_t q = 0; q < rule.size(); ++q) acc += (rule.weights[q] * f(rule.points[q])) * low.values(rule.points[q]);
    for (std::size_t m = 0; m < layout_.num_moments(); ++m) v(idx(layout_.moment(m))) = acc(idx(m)) / geom_.area();
  }
  return v;
}

}  // namespace sfvem
