#include "sfvem/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/SparseLU>

#include "sfvem/error.hpp"

namespace sfvem {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Translation- and scale-free key of a polygon, for reusing probe results.
std::vector<long long> shape_key(const Polygon& poly) {
  const double h = diameter(poly);
  std::vector<long long> key;
  key.reserve(2 * poly.size());
  for (const auto& p : poly) {
    const Vec2 r = (p - poly[0]) / h;
    key.push_back(std::llround(r.x() * 1e9));
    key.push_back(std::llround(r.y() * 1e9));
  }
  return key;
}

}  // namespace

DofMap::DofMap(const PolyMesh& mesh, int k)
    : k_(k),
      per_edge_(static_cast<std::size_t>(k - 1)),
      per_cell_(MonomialBasis::dim(k - 2)),
      edge_base_(mesh.num_vertices()),
      moment_base_(mesh.num_vertices() + mesh.num_edges() * static_cast<std::size_t>(k - 1)),
      size_(moment_base_ + mesh.num_cells() * MonomialBasis::dim(k - 2)) {
  if (k < 1) throw Error("DofMap: k must be >= 1");
  DofLayout layout;
  layout.k = k;
  cell_dofs_.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells()[c];
    layout.num_vertices = cell.size();
    auto& map = cell_dofs_[c];
    map.assign(layout.size(), 0);
    for (std::size_t j = 0; j < cell.size(); ++j) {
      map[layout.vertex(j)] = vertex_dof(cell[j]);
      const std::size_t e = mesh.cell_edge(c, j);
      const bool forward = mesh.edges()[e].v0 == cell[j];
      for (std::size_t m = 0; m < per_edge_; ++m)
        map[layout.edge(j, m)] = edge_dof(e, forward ? m : per_edge_ - 1 - m);
    }
    for (std::size_t a = 0; a < per_cell_; ++a) map[layout.moment(a)] = moment_dof(c, a);
  }
}

GlobalSystem assemble(const DofMap& dofs, const std::vector<Eigen::MatrixXd>& local_matrices,
                      const std::vector<Eigen::VectorXd>& local_loads) {
  const auto n = idx(dofs.size());
  GlobalSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(n);
  sys.dirichlet.assign(dofs.size(), 0);
  sys.prescribed = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t c = 0; c < local_matrices.size(); ++c) {
    const auto& map = dofs.cell_dofs(c);
    const auto& a = local_matrices[c];
    const auto& f = local_loads[c];
    if (a.rows() != idx(map.size()) || a.cols() != idx(map.size()) || f.size() != idx(map.size()))
      throw Error("assemble: cell " + std::to_string(c) + ": local size does not match the DOF map");
    if (!a.allFinite() || !f.allFinite())
      throw Error("assemble: cell " + std::to_string(c) + ": non-finite local entry");
    for (std::size_t i = 0; i < map.size(); ++i) {
      sys.rhs(idx(map[i])) += f(idx(i));
      for (std::size_t j = 0; j < map.size(); ++j)
        trip.emplace_back(idx(map[i]), idx(map[j]), a(idx(i), idx(j)));
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

void apply_dirichlet(GlobalSystem& system, const DirichletData& g, const PolyMesh& mesh, const DofMap& dofs) {
  const std::vector<double> params = edge_dof_params(dofs.k());
  // Winning label per boundary vertex.
  std::vector<std::optional<std::string>> vertex_label(mesh.num_vertices());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edges()[e];
    if (!edge.on_boundary()) continue;
    const auto label = mesh.edge_label(e);
    if (!label)
      throw MeshError("apply_dirichlet: boundary edge " + std::to_string(e) + " (cell " +
                      std::to_string(edge.cells[0]) + ", local edge " + std::to_string(edge.local[0]) +
                      ") has no label");
    const ScalarField& fn = g.for_label(*label);
    const Vec2& a = mesh.vertices()[edge.v0];
    const Vec2& b = mesh.vertices()[edge.v1];
    for (std::size_t m = 0; m < params.size(); ++m) {
      const auto d = idx(dofs.edge_dof(e, m));
      system.dirichlet[static_cast<std::size_t>(d)] = 1;
      system.prescribed(d) = fn(a + params[m] * (b - a));
    }
    for (std::size_t v : {edge.v0, edge.v1})
      if (!vertex_label[v] || g.precedes(*label, *vertex_label[v])) vertex_label[v] = *label;
  }
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (!vertex_label[v]) continue;
    const auto d = idx(dofs.vertex_dof(v));
    system.dirichlet[static_cast<std::size_t>(d)] = 1;
    system.prescribed(d) = g.for_label(*vertex_label[v])(mesh.vertices()[v]);
  }
}

ReducedSystem reduce(const GlobalSystem& system) {
  const std::size_t n = system.size();
  ReducedSystem red;
  std::vector<Eigen::Index> local(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (!system.dirichlet[i]) {
      local[i] = idx(red.free.size());
      red.free.push_back(i);
    }
  const auto nf = idx(red.free.size());
  red.rhs.resize(nf);
  for (Eigen::Index r = 0; r < nf; ++r) red.rhs(r) = system.rhs(idx(red.free[static_cast<std::size_t>(r)]));

  // Row-major walk so each row's correction sums in a fixed order.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> a = system.matrix;
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index r = 0; r < nf; ++r) {
    const auto gi = idx(red.free[static_cast<std::size_t>(r)]);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, gi); it; ++it) {
      const auto col = static_cast<std::size_t>(it.col());
      if (system.dirichlet[col])
        red.rhs(r) -= it.value() * system.prescribed(it.col());
      else
        trip.emplace_back(r, local[col], it.value());
    }
  }
  red.matrix.resize(nf, nf);
  red.matrix.setFromTriplets(trip.begin(), trip.end());
  return red;
}

Eigen::VectorXd solve_system(const GlobalSystem& system, SolverReport& report, double tol) {
  ReducedSystem red = reduce(system);
  red.matrix.makeCompressed();
  report.n = red.free.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(idx(system.size()));
  for (std::size_t i = 0; i < system.size(); ++i)
    if (system.dirichlet[i]) x(idx(i)) = system.prescribed(idx(i));

  if (report.n > 0) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(red.matrix);
    if (lu.info() != Eigen::Success)
      throw SolveError("solve: sparse LU failed (" + lu.lastErrorMessage() + "), n=" + std::to_string(report.n));
    const Eigen::VectorXd y = lu.solve(red.rhs);
    const double bnorm = red.rhs.norm();
    const double rnorm = (red.matrix * y - red.rhs).norm();
    report.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    if (lu.info() != Eigen::Success || !y.allFinite() || !(report.residual <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "solve: residual %.3e above tolerance %.1e, n=%zu", report.residual, tol,
                    report.n);
      throw SolveError(buf);
    }
    for (std::size_t r = 0; r < red.free.size(); ++r) x(idx(red.free[r])) = y(idx(r));
  }
  return x;
}

Discretization::Discretization(const PolyMesh& mesh, ProblemData problem, SolveOptions options)
    : mesh_(problem.boundary_labeler ? relabel_boundary(mesh, problem.boundary_labeler) : mesh),
      problem_(std::move(problem)),
      options_(std::move(options)),
      dofs_(mesh_, options_.k) {
  const int k = options_.k;
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(problem_.kappa > 0.0)) throw ConfigError("kappa must be positive");
  const bool baseline = options_.method == Method::Baseline;

  std::map<std::vector<long long>, int> probe_cache;
  const std::size_t nc = mesh_.num_cells();
  spaces_.reserve(nc);
  error_geoms_.reserve(nc);
  coeffs_.reserve(nc);
  forms_.reserve(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const Polygon poly = mesh_.cell_polygon(c);
    int ell = 0;
    if (!baseline) {
      if (options_.fixed_ell) {
        ell = *options_.fixed_ell;
      } else if (auto it = options_.ell_by_vertices.find(poly.size()); it != options_.ell_by_vertices.end()) {
        ell = it->second;
      } else {
        const auto key = shape_key(poly);
        if (auto hit = probe_cache.find(key); hit != probe_cache.end()) {
          ell = hit->second;
        } else {
          try {
            ell = probe_min_ell(poly, k, options_.ell_max, options_.probe_tol, options_.probe_criterion).ell;
          } catch (const ProbeError& e) {
            throw ProbeError("cell " + std::to_string(c) + ": " + e.what());
          }
          probe_cache.emplace(key, ell);
        }
      }
    }
    spaces_.emplace_back(poly, k, ell);
    error_geoms_.emplace_back(poly, 2 * k + 10, k + 6);
    coeffs_.push_back(element_coefficients(error_geoms_.back(), k, problem_.kappa, problem_.beta));
    forms_.push_back(baseline ? baseline_vem_forms(spaces_.back(), coeffs_.back(), problem_, options_.sigma_scale)
                              : stabilization_free_forms(spaces_.back(), coeffs_.back(), problem_));
  }
}

GlobalSystem Discretization::assemble() const {
  std::vector<Eigen::MatrixXd> mats;
  std::vector<Eigen::VectorXd> loads;
  mats.reserve(forms_.size());
  loads.reserve(forms_.size());
  for (const auto& f : forms_) {
    mats.push_back(f.system());
    loads.push_back(f.load);
  }
  GlobalSystem sys = sfvem::assemble(dofs_, mats, loads);
  apply_dirichlet(sys, problem_.dirichlet, mesh_, dofs_);
  return sys;
}

DiscreteSolution Discretization::solve() const {
  DiscreteSolution sol;
  sol.dofs = solve_system(assemble(), sol.report);
  sol.pinabla = reconstruct(sol.dofs);
  for (std::size_t c = 0; c < num_cells(); ++c) {
    sol.ell.push_back(ell(c));
    sol.tau.push_back(coeffs_[c].tau);
    sol.peclet.push_back(coeffs_[c].peclet);
  }
  return sol;
}

Eigen::VectorXd Discretization::local_dofs(std::size_t c, const Eigen::VectorXd& dofs) const {
  const auto& map = dofs_.cell_dofs(c);
  Eigen::VectorXd v(idx(map.size()));
  for (std::size_t i = 0; i < map.size(); ++i) v(idx(i)) = dofs(idx(map[i]));
  return v;
}

Eigen::VectorXd Discretization::interpolate(const ScalarField& f) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(idx(dofs_.size()));
  for (std::size_t c = 0; c < num_cells(); ++c) {
    const Eigen::VectorXd v = spaces_[c].interpolate(f);
    const auto& map = dofs_.cell_dofs(c);
    for (std::size_t i = 0; i < map.size(); ++i) out(idx(map[i])) = v(idx(i));
  }
  return out;
}

std::vector<Eigen::VectorXd> Discretization::reconstruct(const Eigen::VectorXd& dofs) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(num_cells());
  for (std::size_t c = 0; c < num_cells(); ++c) out.push_back(spaces_[c].pinabla().coeff * local_dofs(c, dofs));
  return out;
}

double energy_error(const Discretization& disc, const DiscreteSolution& sol) {
  if (!disc.problem().exact) throw Error("energy_error: problem '" + disc.problem().name + "' has no exact solution");
  const ExactSolution& ex = *disc.problem().exact;
  const int k = disc.options().k;
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < disc.num_cells(); ++c) {
    const MonomialBasis basis = disc.space(c).basis(k);
    const MonomialBasis lower = disc.space(c).basis(k - 1);
    const auto grad = basis.grad_map();
    const Eigen::VectorXd gx = grad[0] * sol.pinabla[c], gy = grad[1] * sol.pinabla[c];
    const auto& co = disc.coefficients(c);
    const QuadRule& rule = disc.error_geometry(c).volume_rule();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& p = rule.points[q];
      const Eigen::VectorXd m = lower.values(p);
      const Vec2 gu = ex.gradient(p);
      const Vec2 e = gu - Vec2(m.dot(gx), m.dot(gy));
      const Vec2 b = disc.problem().beta(p);
      const double w = rule.weights[q];
      num += w * (co.kappa * e.squaredNorm() + co.tau * std::pow(b.dot(e), 2));
      den += w * (co.kappa * gu.squaredNorm() + co.tau * std::pow(b.dot(gu), 2));
    }
  }
  if (!(den > 0.0)) throw Error("energy_error: undefined for an exact solution with zero energy");
  return std::sqrt(num / den);
}

double energy_norm_matrix(const Discretization& disc, const Eigen::VectorXd& dofs) {
  double sum = 0.0;
  for (std::size_t c = 0; c < disc.num_cells(); ++c) {
    const Eigen::VectorXd v = disc.local_dofs(c, dofs);
    sum += v.dot(disc.forms(c).a * v);
  }
  return std::sqrt(std::max(sum, 0.0));
}

double energy_norm_quadrature(const Discretization& disc, const Eigen::VectorXd& dofs) {
  double sum = 0.0;
  for (std::size_t c = 0; c < disc.num_cells(); ++c) {
    const LocalSpace& s = disc.space(c);
    const Eigen::VectorXd v = disc.local_dofs(c, dofs);
    const auto& g = s.grad_high();
    const Eigen::VectorXd gx = g.x * v, gy = g.y * v;
    const MonomialBasis basis = s.basis(g.degree);
    const auto& co = disc.coefficients(c);
    const QuadRule& rule = disc.error_geometry(c).volume_rule();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd m = basis.values(rule.points[q]);
      const Vec2 grad(m.dot(gx), m.dot(gy));
      const Vec2 b = disc.problem().beta(rule.points[q]);
      sum += rule.weights[q] * (co.kappa * grad.squaredNorm() + co.tau * std::pow(b.dot(grad), 2));
    }
  }
  return std::sqrt(sum);
}

std::optional<double> evaluate(const Discretization& disc, const DiscreteSolution& sol, const Vec2& p) {
  for (std::size_t c = 0; c < disc.num_cells(); ++c) {
    const auto& poly = disc.space(c).geometry().vertices();
    if (contains(poly, p, 1e-12)) return disc.space(c).basis(disc.options().k).values(p).dot(sol.pinabla[c]);
  }
  return std::nullopt;
}

double mean_peclet(const DiscreteSolution& sol) {
  if (sol.peclet.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double pe : sol.peclet) s += pe;
  return s / static_cast<double>(sol.peclet.size());
}

}  // namespace sfvem
