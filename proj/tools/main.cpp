// Command-line driver: mesh generation, ell probe table, single solves and
// convergence studies.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sfvem/error.hpp"
#include "sfvem/experiment.hpp"
#include "sfvem/problems.hpp"

namespace {

// Writes to two streams; used to mirror the run log on stdout.
class TeeBuf : public std::streambuf {
 public:
  TeeBuf(std::streambuf* a, std::streambuf* b) : a_(a), b_(b) {}

 protected:
  int overflow(int c) override {
    if (c == traits_type::eof()) return traits_type::not_eof(c);
    const bool ok = a_->sputc(static_cast<char>(c)) != traits_type::eof() &&
                    (!b_ || b_->sputc(static_cast<char>(c)) != traits_type::eof());
    return ok ? c : traits_type::eof();
  }
  int sync() override { return (a_->pubsync() == 0 && (!b_ || b_->pubsync() == 0)) ? 0 : -1; }

 private:
  std::streambuf* a_;
  std::streambuf* b_;
};

struct Common {
  std::string problem = "smooth";
  std::string family = "t1";
  int k = 1;
  std::string ell = "auto";
  double probe_tol = 1e-8;
  int ell_max = 6;
  std::string criterion = "directional";
  std::string refinements = "4";
  int n = 0;
  bool baseline = false;
  std::uint64_t seed = 42;
  int lloyd = 50;
  double kappa = 1e-6;
  std::vector<double> beta{1.0, 0.545};
  std::string out = "out";
};

sfvem::ProbeCriterion parse_criterion(const std::string& s) {
  if (s == "directional") return sfvem::ProbeCriterion::Directional;
  if (s == "gradient") return sfvem::ProbeCriterion::Gradient;
  throw sfvem::ConfigError("unknown probe criterion '" + s + "' (expected directional or gradient)");
}

// "4" -> four levels from the family default; "16,32,64" -> explicit sizes.
std::vector<int> parse_schedule(const Common& c, sfvem::Family family) {
  if (c.refinements.find(',') == std::string::npos) {
    int levels = 0;
    try {
      levels = std::stoi(c.refinements);
    } catch (const std::exception&) {
      throw sfvem::ConfigError("bad --refinements '" + c.refinements + "'");
    }
    return sfvem::default_schedule(family, levels, c.n);
  }
  std::vector<int> sizes;
  std::stringstream ss(c.refinements);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      sizes.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw sfvem::ConfigError("bad --refinements entry '" + tok + "'");
    }
  }
  return sizes;
}

sfvem::ExperimentConfig make_config(const Common& c) {
  sfvem::ExperimentConfig cfg;
  cfg.problem = c.problem;
  cfg.kappa = c.kappa;
  cfg.beta = sfvem::Vec2(c.beta.at(0), c.beta.at(1));
  cfg.family = sfvem::parse_family(c.family);
  cfg.sizes = parse_schedule(c, cfg.family);
  cfg.k = c.k;
  if (c.ell != "auto") {
    try {
      cfg.ell = std::stoi(c.ell);
    } catch (const std::exception&) {
      throw sfvem::ConfigError("--ell expects 'auto' or an integer, got '" + c.ell + "'");
    }
  }
  cfg.probe_tol = c.probe_tol;
  cfg.ell_max = c.ell_max;
  cfg.probe_criterion = parse_criterion(c.criterion);
  cfg.baseline = c.baseline;
  cfg.seed = c.seed;
  cfg.lloyd_iters = c.lloyd;
  cfg.out_dir = c.out;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Common& c, bool with_problem) {
  if (with_problem) {
    app->add_option("--problem", c.problem, "test1, test2 or smooth")->capture_default_str();
    app->add_option("--kappa", c.kappa, "diffusion for the smooth problem")->capture_default_str();
    app->add_option("--beta", c.beta, "advection x,y for the smooth problem")->expected(2)->delimiter(',');
    app->add_option("--k", c.k, "polynomial order 1..4")->capture_default_str();
    app->add_option("--ell", c.ell, "auto or a fixed increment")->capture_default_str();
    app->add_flag("--baseline", c.baseline, "also solve with the stabilized baseline");
  }
  app->add_option("--family", c.family, "mesh family t1, t2 or t3")->capture_default_str();
  app->add_option("--n", c.n, "mesh size (cells per side, blocks per side, or Voronoi sites)");
  app->add_option("--refinements", c.refinements, "level count or comma-separated sizes")->capture_default_str();
  app->add_option("--probe-tol", c.probe_tol, "relative eigenvalue threshold")->capture_default_str();
  app->add_option("--ell-max", c.ell_max, "probe search cap")->capture_default_str();
  app->add_option("--probe-criterion", c.criterion, "directional or gradient")->capture_default_str();
  app->add_option("--seed", c.seed, "Voronoi seed")->capture_default_str();
  app->add_option("--lloyd", c.lloyd, "Lloyd iterations for t3")->capture_default_str();
  app->add_option("--out", c.out, "output directory")->capture_default_str();
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilization-free SUPG virtual elements for 2D advection-diffusion"};
  app.require_subcommand(1);
  Common c;

  auto* mesh = app.add_subcommand("mesh", "mesh utilities");
  mesh->require_subcommand(1);
  auto* gen = mesh->add_subcommand("gen", "generate a family mesh and write mesh.json");
  add_common(gen, c, false);

  auto* probe = app.add_subcommand("probe", "ell table for the t1/t2/t3 probe meshes");
  add_common(probe, c, false);
  int k_max = 4;
  probe->add_option("--k-max", k_max, "largest order in the table")->capture_default_str();
  bool all_families = false;
  probe->add_flag("--all", all_families, "probe t1(4x4), t2(n=4) and t3(25 sites) together");

  auto* solve = app.add_subcommand("solve", "single solve with VTK output");
  add_common(solve, c, true);

  auto* conv = app.add_subcommand("convergence", "refinement study writing convergence.csv");
  add_common(conv, c, true);

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(c.out);
    std::ofstream logfile(std::filesystem::path(c.out) / "run.log", std::ios::binary);
    TeeBuf tee(std::cout.rdbuf(), logfile.rdbuf());
    std::ostream log(&tee);
    log << "# " << command_line(argc, argv) << '\n';

    if (gen->parsed()) {
      const auto family = sfvem::parse_family(c.family);
      const int size = c.n > 0 ? c.n : sfvem::default_schedule(family, 1).front();
      const sfvem::PolyMesh m = sfvem::make_family_mesh(family, size, c.seed, c.lloyd);
      const auto path = std::filesystem::path(c.out) / "mesh.json";
      sfvem::write_mesh(m, path);
      const auto reg = sfvem::check_regularity(m);
      log << "mesh: family=" << c.family << " cells=" << m.num_cells() << " vertices=" << m.num_vertices()
          << " h_max=" << m.max_diameter() << " regularity=" << reg.constant()
          << " non_star=" << reg.non_star_shaped.size() << " -> " << path.string() << '\n';
    } else if (probe->parsed()) {
      const auto crit = parse_criterion(c.criterion);
      std::vector<sfvem::ProbeTableColumn> cols;
      auto add = [&](sfvem::Family f, int size) {
        const auto m = sfvem::make_family_mesh(f, size, c.seed, c.lloyd);
        for (auto& col : sfvem::probe_family(f, m, k_max, c.ell_max, c.probe_tol, crit)) cols.push_back(col);
      };
      if (all_families) {
        add(sfvem::Family::T1, 4);
        add(sfvem::Family::T2, 4);
        add(sfvem::Family::T3, 25);
      } else {
        const auto family = sfvem::parse_family(c.family);
        add(family, c.n > 0 ? c.n : (family == sfvem::Family::T3 ? 25 : 4));
      }
      const std::string table = sfvem::format_probe_table(cols, k_max);
      std::ofstream(std::filesystem::path(c.out) / "probe_table.csv", std::ios::binary) << table;
      log << table;
    } else if (solve->parsed()) {
      auto cfg = make_config(c);
      if (c.n > 0) cfg.sizes = {c.n};
      cfg.log = &log;
      const auto res = sfvem::run_field(cfg);
      for (const auto& f : res.files) log << "wrote " << f.string() << '\n';
    } else if (conv->parsed()) {
      auto cfg = make_config(c);
      cfg.log = &log;
      const auto rep = sfvem::run_convergence(cfg);
      log << sfvem::convergence_csv_header() << '\n';
      for (const auto& row : rep.rows) log << sfvem::format_convergence_row(row) << '\n';
    }
    log.flush();
  } catch (const sfvem::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
