// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--out DIR] [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sfvem/assembly.hpp"
#include "sfvem/error.hpp"
#include "sfvem/experiment.hpp"
#include "sfvem/problems.hpp"

using namespace sfvem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct NamedMesh {
  std::string name;
  Family family;
  PolyMesh mesh;
};

// T1(4x4), T2(n=4), T3(25 sites, seed 42).
std::vector<NamedMesh> probe_meshes() {
  return {{"t1(4x4)", Family::T1, make_family_mesh(Family::T1, 4)},
          {"t2(n=4)", Family::T2, make_family_mesh(Family::T2, 4)},
          {"t3(25)", Family::T3, make_family_mesh(Family::T3, 25, 42)}};
}

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

Eigen::VectorXd pad(const Eigen::VectorXd& c, int degree) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ix(MonomialBasis::dim(degree)));
  out.head(c.size()) = c;
  return out;
}

// Relative L2(E) distance between polynomials in scaled-monomial coefficients. Individual
// coefficients of degree k + ell on small cells carry roundoff times cond(H), so they are
// reported separately but not judged.
double rel_l2(const LocalSpace& s, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::MatrixXd h = s.mass().topLeftCorner(a.size(), a.size());
  const Eigen::VectorXd e = a - b;
  return std::sqrt(e.dot(h * e) / std::max(b.dot(h * b), s.geometry().area()));
}

Outcome criterion1() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, worst_coef = 0.0;
  std::size_t checks = 0;
  auto check = [&](const LocalSpace& s, const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
    worst = std::max(worst, rel_l2(s, got, want));
    worst_coef = std::max(worst_coef, rel_err(got, want));
  };
  for (const auto& nm : probe_meshes())
    for (std::size_t c = 0; c < nm.mesh.num_cells(); ++c)
      for (int k = 1; k <= 3; ++k) {
        const Polygon poly = nm.mesh.cell_polygon(c);
        const LocalSpace s(poly, k, probe_min_ell(poly, k).ell);
        for (int d = 0; d <= k; ++d) {
          const MonomialBasis b = s.basis(d);
          Eigen::VectorXd coef(ix(b.size()));
          for (auto& v : coef) v = u(rng);
          const Eigen::VectorXd dofs = s.interpolate([&](const Vec2& p) { return b.values(p).dot(coef); });
          check(s, s.pinabla().coeff * dofs, pad(coef, k));
          for (int n = d; n <= k + s.ell(); ++n) check(s, s.pizero_scalar(n) * dofs, pad(coef, n));
          const auto grad = b.grad_map();
          const Eigen::VectorXd gx = grad[0] * coef, gy = grad[1] * coef;
          for (const GradientProjection* g : {&s.grad_high(), &s.grad_low()}) {
            check(s, g->x * dofs, pad(gx, g->degree));
            check(s, g->y * dofs, pad(gy, g->degree));
          }
          ++checks;
        }
      }
  return {worst <= 1e-11, std::to_string(checks) + " cases, worst relative L2(E) error " + fmt("%.2e", worst) +
                              " (coefficient-wise " + fmt("%.2e", worst_coef) + ")"};
}

Outcome criterion2() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int solves = 0;
  for (const auto& nm : probe_meshes())
    for (int k = 1; k <= 3; ++k)
      for (double kappa : {1.0, 1e-9}) {
        std::vector<double> coef(MonomialBasis::dim(k));
        for (auto& v : coef) v = u(rng);
        const ProblemData pb = problem_polynomial(coef, k, kappa, Vec2(1.0, 0.545));
        SolveOptions o;
        o.k = k;
        const Discretization disc(nm.mesh, pb, o);
        worst = std::max(worst, energy_error(disc, disc.solve()));
        ++solves;
      }
  return {worst <= 1e-8, std::to_string(solves) + " solves, worst energy error " + fmt("%.2e", worst)};
}

Outcome criterion3(const std::filesystem::path& out) {
  const Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const int published_t1[] = {1, 2, 2, 2};
  std::string got;
  bool pass = true;
  for (int k = 1; k <= 4; ++k) {
    const int ell = probe_min_ell(square, k).ell;
    got += (k > 1 ? "," : "") + std::to_string(ell);
    pass = pass && ell == published_t1[k - 1];
  }
  // Remaining columns are reported against the published values.
  std::vector<ProbeTableColumn> cols;
  for (const auto& nm : probe_meshes())
    for (auto& c : probe_family(nm.family, nm.mesh, 4, 6, 1e-8, ProbeCriterion::Directional)) cols.push_back(c);
  const std::string table = format_probe_table(cols, 4);
  std::filesystem::create_directories(out);
  std::ofstream(out / "probe_table.csv", std::ios::binary) << table;

  auto published = [](Family f, std::size_t nv) -> std::vector<int> {
    if (f == Family::T1) return {1, 2, 2, 2};
    if (f == Family::T2) return {1, 1, 1, 2};
    if (nv <= 4) return {1, 1, 1, 1};
    if (nv == 5) return {1, 1, 1, 2};
    if (nv == 6) return {2, 2, 2, 3};
    return {2, 2, 2, 4};
  };
  std::string mismatches;
  for (const auto& c : cols) {
    const auto ref = published(c.family, c.num_vertices);
    for (int k = 1; k <= 4; ++k) {
      const int v = c.ell_by_k.at(k);
      if (v != ref[static_cast<std::size_t>(k - 1)])
        mismatches += " " + family_name(c.family) + ":" + std::to_string(c.num_vertices) + " k=" + std::to_string(k) +
                      " " + (v < 0 ? std::string("-") : std::to_string(v)) + "/" +
                      std::to_string(ref[static_cast<std::size_t>(k - 1)]);
    }
  }
  return {pass, "squares k=1..4 -> " + got + "; other columns (ours/published):" +
                    (mismatches.empty() ? std::string(" all match") : mismatches)};
}

Outcome criterion4() {
  bool pass = true;
  std::string notes, gradient_only;
  int elements = 0;
  for (const auto& nm : probe_meshes())
    for (int k = 1; k <= (nm.family == Family::T1 ? 4 : 3); ++k) {
      bool any_fails_below = false, any_positive = false;
      int grad_pass_below = 0;
      for (std::size_t c = 0; c < nm.mesh.num_cells(); ++c) {
        const Polygon poly = nm.mesh.cell_polygon(c);
        const int ell = probe_min_ell(poly, k).ell;
        const LocalSpace s(poly, k, ell);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(probe_matrix(s), Eigen::EigenvaluesOnly);
        const Eigen::VectorXd ev = eig.eigenvalues();
        int below = 0;
        for (double v : ev) below += v < 1e-8 * ev.maxCoeff();
        if (below != 1) {
          pass = false;
          notes += " " + nm.name + " cell " + std::to_string(c) + " k=" + std::to_string(k) + " has " +
                   std::to_string(below) + " small eigenvalues;";
        }
        ++elements;
        if (ell >= 1) {
          any_positive = true;
          const ProbeStep st = coercivity_step(LocalSpace(poly, k, ell - 1), 1e-8);
          any_fails_below = any_fails_below || !st.passed;
          grad_pass_below += st.gradient_passed;
        }
      }
      if (any_positive && !any_fails_below) {
        pass = false;
        notes += " " + nm.name + " k=" + std::to_string(k) + " not minimal;";
      }
      if (grad_pass_below > 0)
        gradient_only += " " + nm.name + " k=" + std::to_string(k) + " (" + std::to_string(grad_pass_below) + " cells)";
    }
  std::string detail = std::to_string(elements) + " element probes; one small eigenvalue at the probed ell, " +
                       "minimality against the probe's coercivity test" + notes;
  if (!gradient_only.empty()) detail += "; gradient-only test already passes at ell-1 for:" + gradient_only;
  return {pass, detail};
}

ExperimentConfig base_config(const std::string& problem, Family f, std::vector<int> sizes, int k, bool baseline,
                             const std::filesystem::path& out) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.kappa = 1e-6;
  cfg.beta = Vec2(1.0, 0.545);
  cfg.family = f;
  cfg.sizes = std::move(sizes);
  cfg.k = k;
  cfg.baseline = baseline;
  cfg.out_dir = out;
  return cfg;
}

Outcome criterion5(const std::filesystem::path& out) {
  bool pass = true;
  std::string detail;
  for (int k = 1; k <= 3; ++k) {
    const auto rep =
        run_convergence(base_config("smooth", Family::T1, {8, 16, 32, 64}, k, false, out / ("c5_k" + std::to_string(k))));
    const double a = rep.alpha_sf();
    const bool ok = a >= k - 0.25 && a <= k + 0.35;
    pass = pass && ok;
    detail += (k > 1 ? ", " : "") + std::string("k=") + std::to_string(k) + " alpha_sf=" + fmt("%.3f", a);
  }
  return {pass, detail + " (window [k-0.25, k+0.35])"};
}

Outcome criterion6(const std::filesystem::path& out) {
  bool pass = true;
  std::string detail;
  for (int k = 1; k <= 2; ++k) {
    const auto rep = run_convergence(
        base_config("test1", Family::T1, {16, 32, 64, 128}, k, k == 1, out / ("c6_t1_k" + std::to_string(k))));
    bool decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) decreasing = decreasing && rep.rows[i].err_sf < rep.rows[i - 1].err_sf;
    const double a = rep.alpha_sf();
    const bool rate_ok = a >= k - 0.4 && a <= k + 0.6;
    pass = pass && decreasing && rate_ok;
    detail += (k > 1 ? "; " : "") + std::string("T1 k=") + std::to_string(k) + " alpha_sf=" + fmt("%.3f", a) +
              (decreasing ? " decreasing" : " NOT decreasing");
    if (k == 1) {
      double lo = 1e300, hi = 0.0;
      for (const auto& r : rep.rows) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
      }
      const bool ratio_ok = lo >= 0.5 && hi <= 2.0;
      pass = pass && ratio_ok;
      detail += " ratio in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "]";
    }
  }
  const auto t2 = run_convergence(base_config("test1", Family::T2, {8, 16, 32, 64}, 1, true, out / "c6_t2_k1"));
  const double r = t2.rows.back().ratio;
  // Soft: logged, not counted, if the stand-in geometry flips it.
  detail += "; T2 k=1 final ratio=" + fmt("%.3f", r) + (r >= 1.0 ? " (>= 1)" : " (< 1, soft failure logged)");
  return {pass, detail};
}

Outcome criterion7(const std::filesystem::path& out) {
  ExperimentConfig cfg = base_config("test2", Family::T2, {16}, 1, false, out / "c7_k1");
  const FieldResult r1 = run_field(cfg);
  const ProblemData pb = problem_test2();
  SolveOptions o;
  o.k = 1;
  const Discretization disc(make_family_mesh(Family::T2, 16), pb, o);
  const DiscreteSolution sol = disc.solve();
  const double a = evaluate(disc, sol, Vec2(0.25, 0.7)).value();
  const double b = evaluate(disc, sol, Vec2(0.7, 0.25)).value();

  cfg = base_config("test2", Family::T2, {16}, 3, false, out / "c7_k3");
  const FieldResult r3 = run_field(cfg);
  const double over1 = r1.max_vertex - 1.0, over3 = r3.max_vertex - 1.0;

  const bool bounds = r1.min_vertex >= -0.3 && r1.max_vertex <= 1.3;
  const bool samples = std::abs(a - 1.0) <= 0.05 && std::abs(b) <= 0.05;
  const bool smoother = over3 < over1;
  return {bounds && samples && smoother,
          "k=1 range [" + fmt("%.4f", r1.min_vertex) + ", " + fmt("%.4f", r1.max_vertex) + "], u(0.25,0.7)=" +
              fmt("%.4f", a) + ", u(0.7,0.25)=" + fmt("%.2e", b) + ", overshoot k=1 " + fmt("%.4f", over1) +
              " vs k=3 " + fmt("%.4f", over3)};
}

Outcome criterion8(const std::filesystem::path& out) {
  bool pass = true;
  std::string detail;
  auto compare = [&](const std::string& tag, const std::filesystem::path& a, const std::filesystem::path& b) {
    const std::string x = slurp(a), y = slurp(b);
    const bool same = !x.empty() && x == y;
    pass = pass && same;
    detail += (detail.empty() ? "" : ", ") + tag + (same ? " identical" : " DIFFER");
  };
  for (int run = 0; run < 2; ++run) {
    const auto dir = out / ("c8_run" + std::to_string(run));
    run_convergence(base_config("smooth", Family::T1, {8, 16, 32, 64}, 1, false, dir / "smooth_t1"));
    run_convergence(base_config("test1", Family::T3, {64, 256}, 2, true, dir / "test1_t3"));
    criterion3(dir / "probe");
  }
  compare("smooth t1 k=1", out / "c8_run0/smooth_t1/convergence.csv", out / "c8_run1/smooth_t1/convergence.csv");
  compare("test1 t3 k=2", out / "c8_run0/test1_t3/convergence.csv", out / "c8_run1/test1_t3/convergence.csv");
  compare("probe table", out / "c8_run0/probe/probe_table.csv", out / "c8_run1/probe/probe_table.csv");
  compare("vs criterion 5 run", out / "c5_k1/convergence.csv", out / "c8_run0/smooth_t1/convergence.csv");
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path out = "acceptance_out";
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--out") && i + 1 < argc) {
      out = argv[++i];
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--out DIR] [--only N]\n", argv[0]);
      return 2;
    }
  }
  std::filesystem::create_directories(out);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "projector reproduction", 30, criterion1},
      {2, "patch test", 60, criterion2},
      {3, "ell table, square column", 0, [&] { return criterion3(out / "c3"); }},
      {4, "coercivity probe property", 0, criterion4},
      {5, "convergence rates, smooth problem", 300, [&] { return criterion5(out); }},
      {6, "test 1 qualitative reproduction", 600, [&] { return criterion6(out); }},
      {7, "test 2 layer behaviour", 120, [&] { return criterion7(out); }},
      {8, "determinism", 0, [&] { return criterion8(out); }},
  };

  int failed = 0;
  std::vector<std::string> lines;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    failed += !o.pass;
    char head[128];
    std::snprintf(head, sizeof head, "%s %d %s (%.1f s): ", o.pass ? "PASS" : "FAIL", c.id, c.name, secs);
    lines.push_back(head + o.detail);
    std::printf("%s\n", lines.back().c_str());
    std::fflush(stdout);
  }
  std::ofstream summary(out / "summary.txt", std::ios::binary);
  for (const auto& l : lines) summary << l << '\n';
  return failed ? 1 : 0;
}
