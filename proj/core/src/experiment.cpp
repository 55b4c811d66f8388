#include "sfvem/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

#include "sfvem/error.hpp"
#include "sfvem/problems.hpp"
#include "sfvem/vtk.hpp"

namespace sfvem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void log_line(const ExperimentConfig& cfg, const std::string& line) {
  if (cfg.log) *cfg.log << line << '\n' << std::flush;
}

ProblemData config_problem(const ExperimentConfig& cfg) { return make_problem(cfg.problem, cfg.kappa, cfg.beta); }

std::uint64_t level_seed(const ExperimentConfig& cfg, std::size_t level) { return cfg.seed + level; }

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "t1") return Family::T1;
  if (name == "t2") return Family::T2;
  if (name == "t3") return Family::T3;
  throw ConfigError("unknown mesh family '" + name + "' (expected t1, t2 or t3)");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::T1: return "t1";
    case Family::T2: return "t2";
    case Family::T3: return "t3";
  }
  return "?";
}

PolyMesh make_family_mesh(Family family, int size, std::uint64_t seed, int lloyd_iters) {
  switch (family) {
    case Family::T1: return generate_cartesian(size, size);
    case Family::T2: return generate_concave_pentagons(size);
    case Family::T3: return generate_voronoi(size, lloyd_iters, seed);
  }
  throw ConfigError("make_family_mesh: bad family");
}

std::vector<int> default_schedule(Family family, int levels, int base) {
  if (levels < 1) throw ConfigError("at least one refinement level is required");
  const bool voronoi = family == Family::T3;
  if (base <= 0) base = family == Family::T1 ? 8 : family == Family::T2 ? 4 : 64;
  std::vector<int> sizes;
  for (int i = 0, s = base; i < levels; ++i, s *= voronoi ? 4 : 2) sizes.push_back(s);
  return sizes;
}

void ExperimentConfig::validate() const {
  if (k < 1 || k > 4) throw ConfigError("k must be in 1..4, got " + std::to_string(k));
  if (sizes.empty()) throw ConfigError("empty refinement schedule");
  for (int s : sizes)
    if (s < 1) throw ConfigError("mesh sizes must be positive");
  if (ell && *ell < 0) throw ConfigError("ell must be >= 0");
  if (!(probe_tol > 0.0 && probe_tol < 1.0)) throw ConfigError("probe tolerance must lie in (0, 1)");
  if (ell_max < 0) throw ConfigError("ell_max must be >= 0");
  if (lloyd_iters < 0) throw ConfigError("lloyd iterations must be >= 0");
}

SolveOptions ExperimentConfig::solve_options(Method method) const {
  SolveOptions o;
  o.k = k;
  o.method = method;
  o.fixed_ell = ell;
  o.ell_by_vertices = ell_by_vertices;
  o.probe_tol = probe_tol;
  o.ell_max = ell_max;
  o.probe_criterion = probe_criterion;
  return o;
}

double convergence_rate(double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); }

double ConvergenceReport::alpha_sf() const { return rows.empty() ? kNaN : rows.back().alpha_sf; }
double ConvergenceReport::alpha_vem() const { return rows.empty() ? kNaN : rows.back().alpha_vem; }

std::string convergence_csv_header() { return "level,h_max,n_dof,err_sf,err_vem,ratio,mean_pe,alpha_sf,alpha_vem"; }

std::string format_convergence_row(const ConvergenceRow& r) {
  return std::to_string(r.level) + "," + num(r.h_max) + "," + std::to_string(r.n_dof) + "," + num(r.err_sf) + "," +
         num(r.err_vem) + "," + num(r.ratio) + "," + num(r.mean_pe) + "," + num(r.alpha_sf) + "," + num(r.alpha_vem);
}

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const ProblemData problem = config_problem(cfg);
  if (!problem.exact) throw ConfigError("problem '" + problem.name + "' has no exact solution; convergence needs one");

  std::ofstream csv;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    csv.open(cfg.out_dir / "convergence.csv", std::ios::binary);
    if (!csv) throw Error("cannot write " + (cfg.out_dir / "convergence.csv").string());
    csv << convergence_csv_header() << '\n' << std::flush;
  }

  ConvergenceReport rep;
  for (std::size_t level = 0; level < cfg.sizes.size(); ++level) {
    const PolyMesh mesh = make_family_mesh(cfg.family, cfg.sizes[level], level_seed(cfg, level), cfg.lloyd_iters);
    ConvergenceRow row;
    row.level = static_cast<int>(level);
    row.h_max = mesh.max_diameter();
    if (!rep.rows.empty() && !(row.h_max < rep.rows.back().h_max))
      throw ConfigError("refinement schedule must strictly decrease h_max (level " + std::to_string(level) + ")");

    const Discretization sf(mesh, problem, cfg.solve_options(Method::StabilizationFree));
    const DiscreteSolution sol = sf.solve();
    row.n_dof = sf.dofs().size();
    row.err_sf = energy_error(sf, sol);
    row.mean_pe = mean_peclet(sol);
    row.err_vem = kNaN;
    if (cfg.baseline) {
      const Discretization vem(mesh, problem, cfg.solve_options(Method::Baseline));
      row.err_vem = energy_error(vem, vem.solve());
    }
    row.ratio = row.err_vem / row.err_sf;
    row.alpha_sf = row.alpha_vem = kNaN;
    if (!rep.rows.empty()) {
      const auto& prev = rep.rows.back();
      row.alpha_sf = convergence_rate(prev.err_sf, row.err_sf, prev.h_max, row.h_max);
      row.alpha_vem = convergence_rate(prev.err_vem, row.err_vem, prev.h_max, row.h_max);
    }
    rep.rows.push_back(row);
    if (csv.is_open()) csv << format_convergence_row(row) << '\n' << std::flush;

    std::set<int> ells(sol.ell.begin(), sol.ell.end());
    std::string ell_list;
    for (int e : ells) ell_list += (ell_list.empty() ? "" : "/") + std::to_string(e);
    log_line(cfg, "level " + std::to_string(level) + ": size=" + std::to_string(cfg.sizes[level]) +
                      " cells=" + std::to_string(mesh.num_cells()) + " h=" + num(row.h_max) +
                      " ndof=" + std::to_string(row.n_dof) + " ell=" + ell_list + " err_sf=" + num(row.err_sf) +
                      " err_vem=" + num(row.err_vem) + " residual=" + num(sol.report.residual));
  }
  return rep;
}

FieldResult run_field(const ExperimentConfig& cfg) {
  cfg.validate();
  const ProblemData problem = config_problem(cfg);
  const PolyMesh mesh = make_family_mesh(cfg.family, cfg.sizes.front(), level_seed(cfg, 0), cfg.lloyd_iters);

  FieldResult res;
  auto export_one = [&](Method method, const std::string& tag) {
    const Discretization disc(mesh, problem, cfg.solve_options(method));
    const DiscreteSolution sol = disc.solve();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
      lo = std::min(lo, sol.dofs(static_cast<Eigen::Index>(v)));
      hi = std::max(hi, sol.dofs(static_cast<Eigen::Index>(v)));
    }
    log_line(cfg, tag + ": min=" + num(lo) + " max=" + num(hi) + " ndof=" + std::to_string(disc.dofs().size()));
    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = cfg.out_dir / ("field_" + tag + ".vtk");
      write_vtk(disc, sol, path, problem.name + " k=" + std::to_string(cfg.k) + " " + tag);
      res.files.push_back(path);
    }
    return std::pair{lo, hi};
  };
  std::tie(res.min_vertex, res.max_vertex) = export_one(Method::StabilizationFree, "sf");
  if (cfg.baseline) export_one(Method::Baseline, "vem");
  return res;
}

std::vector<ProbeTableColumn> probe_family(Family family, const PolyMesh& mesh, int k_max, int ell_max, double tol,
                                           ProbeCriterion criterion) {
  std::map<std::size_t, ProbeTableColumn> cols;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Polygon poly = mesh.cell_polygon(c);
    auto& col = cols[poly.size()];
    col.family = family;
    col.num_vertices = poly.size();
    ++col.cells;
    for (int k = 1; k <= k_max; ++k) {
      int ell = -1;
      try {
        ell = probe_min_ell(poly, k, ell_max, tol, criterion).ell;
      } catch (const ProbeError&) {
      }
      auto [it, fresh] = col.ell_by_k.try_emplace(k, ell);
      if (!fresh && it->second != -1) it->second = ell == -1 ? -1 : std::max(it->second, ell);
    }
  }
  std::vector<ProbeTableColumn> out;
  for (auto& [nv, col] : cols) out.push_back(std::move(col));
  return out;
}

std::string format_probe_table(const std::vector<ProbeTableColumn>& columns, int k_max) {
  std::string out = "k";
  for (const auto& c : columns) out += "," + family_name(c.family) + ":" + std::to_string(c.num_vertices);
  out += '\n';
  for (int k = 1; k <= k_max; ++k) {
    out += std::to_string(k);
    for (const auto& c : columns) {
      const auto it = c.ell_by_k.find(k);
      out += ",";
      out += it == c.ell_by_k.end() || it->second < 0 ? "\xE2\x80\x94" : std::to_string(it->second);
    }
    out += '\n';
  }
  return out;
}

}  // namespace sfvem
