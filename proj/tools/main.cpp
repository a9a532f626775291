#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sasaki/cli.hpp"
#include "sasaki/errors.hpp"

namespace {

template <typename T>
void set_if(const std::optional<T>& v, T& dst) {
  if (v) dst = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sasaki-Einstein potentials on the round S^3 quotient"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, out_dir, psi, phi, family;
  std::optional<int> grid_n, record_every, k, m, samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> t, t_start, t_end, dt, ds, s_end, eps, c, newton_tol;
  std::optional<std::vector<double>> params;
  bool no_K = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("-n,--grid-n", grid_n, "number of Gauss nodes");
  app.add_option("--seed", seed, "sampler seed");
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_option("--newton-tol", newton_tol, "sup-norm tolerance of the Monge-Ampere defect");

  auto* solve = app.add_subcommand("solve", "solve the Monge-Ampere equation at one t");
  auto* path = app.add_subcommand("path", "continuity path in t");
  auto* flow = app.add_subcommand("flow", "normalized Ricci flow with smoothing monitors");
  auto* scan = app.add_subcommand("scan", "F against J along a potential family");
  auto* pinch = app.add_subcommand("pinch", "drive |S - 4| below eps");
  auto* spec = app.add_subcommand("spectrum", "low spectrum of the basic Laplacian");
  auto* curv = app.add_subcommand("curvature", "constant curvature tensor contractions");
  auto* all = app.add_subcommand("verify-all", "run every check and write all artifacts");

  for (auto* sc : {solve, path, flow, pinch}) {
    sc->add_option("--psi", psi, "base potential as an expression in x");
  }
  solve->add_option("--t", t, "continuity parameter");
  path->add_option("--t-start", t_start);
  path->add_option("--t-end", t_end);
  path->add_option("--dt", dt, "initial and maximal step in t");
  path->add_flag("--no-K", no_K, "skip the K-energy column");
  flow->add_option("--s-end", s_end);
  flow->add_option("--ds", ds);
  flow->add_option("--record-every", record_every);
  scan->add_option("--family", family, "mobius or bump");
  scan->add_option("--lambdas,--params", params, "family parameters")->delimiter(',');
  pinch->add_option("--eps", eps);
  spec->add_option("--phi", phi, "potential as an expression in x");
  spec->add_option("--k", k, "number of eigenvalues");
  curv->add_option("--m", m);
  curv->add_option("--c", c, "holomorphic sectional curvature");
  all->add_option("--samples", samples, "random potentials in the functional suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sasaki::exit_usage;
  }

  sasaki::RunConfig cfg;
  try {
    if (config_path) {
      std::ifstream f(*config_path);
      if (!f) throw sasaki::ConfigError("cannot read " + *config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = sasaki::apply_config_json(ss.str(), cfg);
    }
  } catch (const sasaki::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sasaki::exit_usage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  set_if(grid_n, cfg.grid_n);
  set_if(seed, cfg.seed);
  set_if(out_dir, cfg.out_dir);
  if (newton_tol) cfg.tolerances["newton"] = *newton_tol;
  set_if(psi, cfg.psi);
  set_if(phi, cfg.phi);
  set_if(t, cfg.t);
  set_if(t_start, cfg.t_start);
  set_if(t_end, cfg.t_end);
  set_if(dt, cfg.dt);
  if (no_K) cfg.with_K = false;
  set_if(s_end, cfg.s_end);
  set_if(ds, cfg.ds);
  set_if(record_every, cfg.record_every);
  set_if(family, cfg.family);
  set_if(params, cfg.params);
  set_if(eps, cfg.eps);
  set_if(k, cfg.k);
  set_if(m, cfg.m);
  set_if(c, cfg.c);
  set_if(samples, cfg.samples);

  return sasaki::run(cfg, std::cout);
}
