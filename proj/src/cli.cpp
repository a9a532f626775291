#include "sasaki/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <memory>
#include <ostream>

#include <Eigen/Core>
#include <json.hpp>

#include "sasaki/continuity.hpp"
#include "sasaki/curvature.hpp"
#include "sasaki/errors.hpp"
#include "sasaki/expression.hpp"
#include "sasaki/io.hpp"
#include "sasaki/random_potential.hpp"
#include "sasaki/ricci_flow.hpp"

namespace sasaki {
namespace {

using json = nlohmann::json;

const char* const kVersion = "0.1.0";

const std::vector<std::string> kCommands = {"solve", "path",     "flow",      "scan",
                                            "pinch", "spectrum", "curvature", "verify-all"};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
};

struct Suite {
  std::string name;
  std::vector<Check> checks;

  int passed() const {
    int n = 0;
    for (const auto& c : checks) n += c.passed ? 1 : 0;
    return n;
  }
  bool ok() const { return passed() == static_cast<int>(checks.size()); }
};

class Context {
 public:
  Context(const RunConfig& cfg, std::ostream& log)
      : cfg(cfg), log(log), writer(cfg.out_dir), grid(make_grid(cfg.grid_n)) {}

  double tol(const std::string& key) const { return cfg.tolerances.at(key); }

  Suite& suite(const std::string& name) {
    suites.push_back({name, {}});
    return suites.back();
  }

  void check(Suite& s, const std::string& name, bool passed, double value) {
    s.checks.push_back({name, passed, value});
    log << "  [" << (passed ? " ok " : "FAIL") << "] " << s.name << ": " << name << " ("
        << format_double(value) << ")\n";
  }

  NewtonConfig newton() const {
    NewtonConfig n;
    n.tol = tol("newton");
    return n;
  }

  PathPolicy policy() const {
    PathPolicy p;
    p.t_start = cfg.t_start;
    p.t_end = cfg.t_end;
    p.dt = cfg.dt;
    p.dt_min = cfg.dt_min;
    p.newton = newton();
    p.with_K = cfg.with_K;
    return p;
  }

  FlowStepper stepper() const {
    FlowStepper s;
    s.ds = cfg.ds;
    s.s_end = cfg.s_end;
    s.record_every = cfg.record_every;
    return s;
  }

  MetricState base() const { return metric_state(Expression::parse(cfg.psi).sample(grid)); }

  const RunConfig& cfg;
  std::ostream& log;
  ArtifactWriter writer;
  GridPtr grid;
  std::deque<Suite> suites;
};

std::string prefixed(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "/" + name;
}

std::vector<double> to_vector(const Field& f) { return {f.data(), f.data() + f.size()}; }

json state_json(const MetricState& st) {
  return {{"m", st.m()},
          {"n", st.grid()->size()},
          {"ratio", to_vector(st.ratio())},
          {"scalar_curvature", to_vector(st.scalar_curvature())},
          {"ricci_potential", to_vector(st.ricci_potential())},
          {"norm_constant", st.norm_constant()}};
}

CsvTable ledger_table() { return CsvTable({"tag", "I", "J", "F0", "F", "K", "osc", "margin"}); }

void add_ledger_row(CsvTable& t, const FunctionalLedger& l) {
  t.add_row(std::vector<std::string>{l.tag, format_double(l.I), format_double(l.J),
                                     format_double(l.F0), format_double(l.F), format_double(l.K),
                                     format_double(l.osc), format_double(l.margin)});
}

double shape_distance(const Field& a, const Field& b) {
  const Field d = a - b;
  return d.maxCoeff() - d.minCoeff();
}

// ---- pipelines -------------------------------------------------------------

void do_solve(Context& ctx, const std::string& prefix) {
  Suite& s = ctx.suite("solve");
  const MetricState base = ctx.base();
  const NewtonResult res =
      solve_ma_at_t(ctx.cfg.t, base, BasicPotential::zero(ctx.grid), ctx.newton());
  ctx.writer.write(prefixed(prefix, "solve.csv"), field_table(*ctx.grid, res.phi.values).str());
  CsvTable ledger = ledger_table();
  add_ledger_row(ledger, evaluate_ledger(res.phi, base, "solve", ctx.cfg.with_K));
  ctx.writer.write(prefixed(prefix, "ledger.csv"), ledger.str());
  ctx.writer.write(prefixed(prefix, "state.json"), state_json(deform(base, res.phi)).dump(2));
  ctx.check(s, "newton residual", res.residual < ctx.tol("newton"), res.residual);
}

struct PathOutput {
  ContinuityPath path;
  PathDiagnostics diag;
};

PathOutput do_path(Context& ctx, const std::string& prefix, const PathPolicy& policy) {
  Suite& s = ctx.suite("path");
  const MetricState base = ctx.base();
  PathOutput out;
  out.path = run_continuity_path(base, policy);
  const auto& recs = out.path.records;
  if (recs.empty()) {
    ctx.check(s, "path started", false, out.path.failed_at);
    return out;
  }
  out.diag = path_diagnostics(out.path, base);

  CsvTable t({"t", "residual", "c0_norm", "I", "J", "F0", "F", "K", "IminusJ", "f_t"});
  double worst_residual = 0.0;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto& r = recs[k];
    t.add_row(std::vector<double>{r.t, r.residual, r.c0_norm, r.ledger.I, r.ledger.J, r.ledger.F0,
                                  r.ledger.F, r.ledger.K, r.ledger.I - r.ledger.J,
                                  out.diag.f_values[k]});
    worst_residual = std::max(worst_residual, r.residual);
  }
  ctx.writer.write(prefixed(prefix, "path.csv"), t.str());
  ctx.writer.write(prefixed(prefix, "endpoint.csv"),
                   field_table(*ctx.grid, recs.back().phi.values).str());

  const auto& d = out.diag;
  json dj = {{"complete", out.path.complete},
             {"t_last", recs.back().t},
             {"records", recs.size()},
             {"min_increment", d.min_increment},
             {"max_identity_residual", d.max_identity_residual},
             {"fitted_C1", d.fitted_C1},
             {"reaches_one", d.reaches_one},
             {"alpha", d.alpha},
             {"j_pair_slack", d.j_pair_slack},
             {"ij_pair_slack", d.ij_pair_slack}};
  if (!out.path.complete) {
    dj["failed_at"] = out.path.failed_at;
    dj["failure"] = out.path.failure;
  }
  if (d.reaches_one) {
    dj["F_einstein"] = d.F_einstein;
    dj["ij_integral"] = d.ij_integral;
    dj["integral_residual"] = d.integral_residual;
    dj["fitted_A"] = d.fitted_A;
  }
  ctx.writer.write(prefixed(prefix, "diagnostics.json"), dj.dump(2));

  ctx.check(s, "record residuals", worst_residual < ctx.tol("newton"), worst_residual);
  ctx.check(s, "I-J nondecreasing", d.min_increment >= -ctx.tol("monotonicity"),
            d.min_increment);
  ctx.check(s, "scalar curvature identity", d.max_identity_residual < ctx.tol("identity"),
            d.max_identity_residual);
  ctx.check(s, "J oscillation bound", d.j_pair_slack >= -ctx.tol("monotonicity"),
            d.j_pair_slack);
  ctx.check(s, "I-J oscillation bound", d.ij_pair_slack >= -ctx.tol("monotonicity"),
            d.ij_pair_slack);
  // The trapezoid in t is only accurate to the tolerance with 48 or more records.
  if (d.reaches_one && recs.size() >= 48) {
    ctx.check(s, "F equals integral of I-J", d.integral_residual < ctx.tol("integral"),
              d.integral_residual);
  }
  return out;
}

FlowTrajectory do_flow(Context& ctx, const std::string& prefix, const MetricState& base) {
  Suite& s = ctx.suite("flow");
  FlowTrajectory traj = run_flow(base, ctx.stepper());
  CsvTable t({"s", "sup_vdot", "sup_h", "sup_dh2", "c_s", "bound_a_slack", "bound_b_slack",
              "bound_c_min", "S_pinch"});
  for (const auto& r : traj.records) {
    t.add_row(std::vector<double>{r.s, r.sup_vdot, r.sup_h, r.sup_dh2, r.c_s, r.bound_a_slack,
                                  r.bound_b_slack, r.bound_c_min, r.S_pinch});
  }
  ctx.writer.write(prefixed(prefix, "trajectory.csv"), t.str());
  ctx.writer.write(prefixed(prefix, "final.csv"),
                   field_table(*ctx.grid, traj.records.back().v.values).str());
  const SmoothingReport rep = smoothing_monitors(traj, base, ctx.tol("monitor"));
  const json mj = {{"complete", traj.complete},
                   {"h0_norm", traj.h0_norm},
                   {"min_a_slack", rep.min_a_slack},
                   {"min_b_slack", rep.min_b_slack},
                   {"min_c", rep.min_c},
                   {"min_d_slack", rep.min_d_slack},
                   {"max_holder_h", rep.max_holder_h},
                   {"fitted_holder_constant", rep.fitted_holder_constant},
                   {"evolution_residual", rep.evolution_residual},
                   {"v1_norm", rep.v1_norm},
                   {"v1_bound", rep.v1_bound},
                   {"sandwich_held", rep.sandwich_held}};
  ctx.writer.write(prefixed(prefix, "monitors.json"), mj.dump(2));

  ctx.check(s, "completed", traj.complete, traj.records.back().s);
  ctx.check(s, "bound a", rep.a_holds, rep.min_a_slack);
  ctx.check(s, "bound b", rep.b_holds, rep.min_b_slack);
  ctx.check(s, "bound c", rep.c_holds, rep.min_c);
  ctx.check(s, "bound d", rep.d_holds, rep.min_d_slack);
  ctx.check(s, "vdot evolution", rep.evolution_residual < 1e-4, rep.evolution_residual);
  return traj;
}

void do_scan(Context& ctx, const std::string& prefix) {
  Suite& s = ctx.suite("scan");
  const MetricState ref = reference_state(ctx.grid);
  const PotentialFamily fam = ctx.cfg.family == "mobius"
                                  ? mobius_family(ctx.grid, ctx.cfg.params)
                                  : bump_family(ctx.grid, ctx.cfg.params);
  const ScanReport rep = mt_scan({fam}, ref);
  CsvTable t({"family", "param", "I", "J", "F"});
  for (const auto& r : rep.rows) {
    t.add_row(std::vector<std::string>{r.family, format_double(r.param), format_double(r.I),
                                       format_double(r.J), format_double(r.F)});
  }
  ctx.writer.write(prefixed(prefix, "scan.csv"), t.str());
  ctx.writer.write(prefixed(prefix, "fit.json"),
                   json{{"family", fam.name}, {"C1", rep.C1}, {"C2", rep.C2}}.dump(2));

  bool increasing = true;
  double worst_F = 0.0;
  double min_F = HUGE_VAL;
  bool F_increasing = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    worst_F = std::max(worst_F, std::abs(rep.rows[i].F));
    min_F = std::min(min_F, rep.rows[i].F);
    if (i > 0) {
      increasing = increasing && rep.rows[i].J > rep.rows[i - 1].J;
      F_increasing = F_increasing && rep.rows[i].F > rep.rows[i - 1].F;
    }
  }
  if (fam.name == "mobius") {
    ctx.check(s, "F bounded along Mobius family", worst_F < ctx.tol("scan_F"), worst_F);
    ctx.check(s, "J strictly increasing", increasing, rep.rows.back().J);
    const Spectrum sp = spectrum(ref, std::min(8, ctx.grid->size() / 4));
    ctx.check(s, "holomorphic field eigenvalue present", sp.obstruction, sp.obstruction_gap);
  } else {
    ctx.check(s, "F positive", min_F > 0.0, min_F);
    ctx.check(s, "F increasing", F_increasing, worst_F);
  }
}

void do_pinch(Context& ctx, const std::string& prefix) {
  Suite& s = ctx.suite("pinch");
  const MetricState base = ctx.base();
  PathPolicy pol = ctx.policy();
  pol.with_K = false;
  FlowStepper st = ctx.stepper();
  const PinchResult r = epsilon_pinching(base, ctx.cfg.eps, pol, st);
  const MetricState fin = metric_state(r.potential);
  ctx.writer.write(prefixed(prefix, "pinch.json"),
                   json{{"eps", ctx.cfg.eps},
                        {"t_reached", r.t_reached},
                        {"achieved", r.achieved},
                        {"calabi", r.calabi},
                        {"calabi_bound", r.calabi_bound},
                        {"flow_max_h", r.flow_max_h}}
                       .dump(2));
  ctx.writer.write(prefixed(prefix, "scalar_curvature.csv"),
                   field_table(*ctx.grid, fin.scalar_curvature()).str());
  ctx.check(s, "pinching achieved", r.achieved < ctx.cfg.eps, r.achieved);
  ctx.check(s, "Calabi below bound", r.calabi < r.calabi_bound, r.calabi);
}

void do_spectrum(Context& ctx, const std::string& prefix) {
  const MetricState st = metric_state(Expression::parse(ctx.cfg.phi).sample(ctx.grid));
  const Spectrum sp = spectrum(st, ctx.cfg.k);
  CsvTable t({"index", "eigenvalue", "multiplicity"});
  for (std::size_t i = 0; i < sp.entries.size(); ++i) {
    t.add_row(std::vector<std::string>{std::to_string(i), format_double(sp.entries[i].eigenvalue),
                                       std::to_string(sp.entries[i].multiplicity)});
  }
  ctx.writer.write(prefixed(prefix, "spectrum.csv"), t.str());
  ctx.writer.write(prefixed(prefix, "spectrum.json"),
                   json{{"obstruction", sp.obstruction}, {"obstruction_gap", sp.obstruction_gap}}
                       .dump(2));
  ctx.log << "  obstruction: " << (sp.obstruction ? "present" : "absent") << "\n";
}

json curvature_json(const RoundCurvatureModel& r) {
  json j = {{"m", r.m},
            {"c", r.c},
            {"S", r.S},
            {"Rm2", r.Rm2},
            {"rho2", r.rho2},
            {"Q2", r.Q2},
            {"pinching_integrand", nullptr},
            {"norm_convention",
             "sum of squared components in a unitary frame; |rho|^2 = |Ric|^2, "
             "S^2/m at constant curvature"}};
  if (r.m >= 2) j["pinching_integrand"] = r.pinching_integrand;
  return j;
}

void do_curvature(Context& ctx, const std::string& prefix) {
  Suite& s = ctx.suite("curvature");
  const RoundCurvatureModel r = round_tensor_contractions(ctx.cfg.m, ctx.cfg.c);
  ctx.writer.write(prefixed(prefix, "curvature.json"), curvature_json(r).dump(2));
  ctx.check(s, "Q identity", r.identity_residual < 1e-12, r.identity_residual);
  if (r.m >= 2 && r.c == 4.0) {
    ctx.check(s, "round integrand vanishes",
              std::abs(r.pinching_integrand) < 1e-12 * std::max(1.0, r.Rm2), r.pinching_integrand);
  }
}

// ---- verify-all ------------------------------------------------------------

void suite_functionals(Context& ctx) {
  Suite& s = ctx.suite("functionals");
  const MetricState ref = reference_state(ctx.grid);
  PotentialSampler sampler(ctx.grid, ctx.cfg.seed);
  CsvTable ledger = ledger_table();
  double translation = 0.0, cocycle = 0.0, collapse = 0.0, kf_gap = 0.0;
  double sandwich = HUGE_VAL;
  for (int i = 0; i < ctx.cfg.samples; ++i) {
    const BasicPotential psi = sampler.next();
    const MetricState base = deform(ref, psi);
    const BasicPotential phi = sampler.next_over(base) + psi;
    const double c = sampler.uniform(-5.0, 5.0);
    const BasicPotential shifted = phi + c;
    translation = std::max({translation, std::abs(eval_I(shifted, ref) - eval_I(phi, ref)),
                            std::abs(eval_J(shifted, ref) - eval_J(phi, ref)),
                            std::abs(eval_F(shifted, ref).F - eval_F(phi, ref).F)});
    cocycle = std::max(cocycle, verify_cocycle(psi, phi, ref).max_abs());
    const SandwichReport sw = verify_ij_sandwich(phi, ref);
    sandwich = std::min(sandwich, sw.min_slack());
    collapse = std::max(collapse, std::abs(sw.J - sw.I / 2.0));
    kf_gap = std::max(kf_gap, std::abs(verify_mabuchi_f_relation(phi - psi, base).residual));
    add_ledger_row(ledger, evaluate_ledger(phi, ref, "sample_" + std::to_string(i), true));
  }
  ctx.writer.write("functionals/ledger.csv", ledger.str());
  ctx.check(s, "translation invariance", translation < 1e-10, translation);
  ctx.check(s, "cocycle and antisymmetry", cocycle < 1e-8, cocycle);
  ctx.check(s, "I J sandwich", sandwich >= -1e-10, sandwich);
  ctx.check(s, "J = I/2 at m = 1", collapse < 1e-10, collapse);
  ctx.check(s, "K and F relation", kf_gap < 1e-8, kf_gap);
}

int verify_all(Context& ctx) {
  auto guarded = [&ctx](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      ctx.log << "  [FAIL] " << name << ": " << e.what() << "\n";
      ctx.suites.push_back({name, {{"completed", false, 0.0}}});
    }
  };

  guarded("functionals", [&] { suite_functionals(ctx); });

  Field path_end;
  guarded("path", [&] {
    // 48 records for the trapezoid in t.
    PathPolicy pol = ctx.policy();
    pol.dt = (pol.t_end - pol.t_start) / 47.0;
    const PathOutput p = do_path(ctx, "continuity", pol);
    if (p.path.complete && !p.path.records.empty()) {
      path_end = p.path.records.back().phi.values;
      Suite& s = ctx.suite("manufactured");
      const MetricState base = ctx.base();
      const Field expect = -base.potential().values.array() + 0.5 * base.norm_constant();
      const double err = (path_end - expect).cwiseAbs().maxCoeff();
      ctx.check(s, "endpoint recovery", err < ctx.tol("recovery"), err);
    }
  });

  guarded("scan", [&] { do_scan(ctx, "scan"); });

  guarded("flow", [&] {
    const MetricState base = ctx.base();
    const FlowTrajectory traj = do_flow(ctx, "flow", base);
    Suite& s = ctx.suite("consistency");
    if (path_end.size() > 0 && traj.complete) {
      const double d = shape_distance(traj.records.back().v.values, path_end);
      ctx.check(s, "flow limit matches path endpoint", d < ctx.tol("consistency"), d);
    }
    FlowStepper still = ctx.stepper();
    still.record_every = std::max(1, static_cast<int>(std::lround(0.5 / still.ds)));
    const FlowTrajectory round = run_flow(reference_state(ctx.grid), still);
    double drift = 0.0;
    for (const auto& r : round.records) drift = std::max(drift, r.v.sup_norm());
    ctx.check(s, "Einstein data stationary", drift < 1e-10, drift);
  });

  guarded("curvature", [&] {
    Suite& s = ctx.suite("curvature algebra");
    json all = json::array();
    double worst = 0.0;
    for (int m = 1; m <= 6; ++m) {
      const RoundCurvatureModel r = round_tensor_contractions(m, 4.0);
      worst = std::max(worst, r.identity_residual);
      all.push_back(curvature_json(r));
    }
    ctx.writer.write("curvature/curvature.json", all.dump(2));
    ctx.check(s, "Q identity m = 1..6", worst < 1e-12, worst);
    const double rm = round_tensor_contractions(2, 4.0).Rm2;
    ctx.check(s, "|Rm|^2 = 48 at (2, 4)", std::abs(rm - 48.0) < 1e-12, rm);
    for (int m : {2, 3}) {
      const double v = round_pinching_integrand(m);
      ctx.check(s, "round integrand m = " + std::to_string(m), std::abs(v) < 1e-12, v);
    }
  });

  guarded("pinch", [&] { do_pinch(ctx, "pinch"); });

  guarded("oracles", [&] {
    Suite& s = ctx.suite("oracles");
    const MetricState base = ctx.base();
    const BasicPotential phi = BasicPotential::sample(ctx.grid, [](double x) { return 0.05 * x; });
    const Eigen::MatrixXd jac = ma_defect_jacobian(phi, 0.6, base);
    double worst = 0.0;
    for (int j = 0; j < ctx.grid->size(); j += 9) {
      BasicPotential up = phi, dn = phi;
      up.values(j) += 1e-6;
      dn.values(j) -= 1e-6;
      const Field fd = (ma_defect(up, 0.6, base) - ma_defect(dn, 0.6, base)) / 2e-6;
      worst = std::max(worst, (fd - jac.col(j)).cwiseAbs().maxCoeff() /
                                  std::max(1.0, jac.col(j).cwiseAbs().maxCoeff()));
    }
    ctx.check(s, "Jacobian against differences", worst < 1e-6, worst);
    const Spectrum sp = spectrum(reference_state(ctx.grid), 8);
    double rel = 0.0;
    for (std::size_t k = 0; k < sp.entries.size(); ++k) {
      const double exact = -4.0 * k * (k + 1.0);
      rel = std::max(rel, std::abs(sp.entries[k].eigenvalue - exact) / std::max(1.0, -exact));
    }
    ctx.check(s, "round spectrum", rel < 1e-8, rel);
  });

  for (const auto& s : ctx.suites) {
    if (!s.ok()) return exit_violation;
  }
  return exit_ok;
}

void write_manifest(Context& ctx, int code, double wall) {
  json suites = json::array();
  for (const auto& s : ctx.suites) {
    json failed = json::array();
    for (const auto& c : s.checks) {
      if (!c.passed) failed.push_back(c.name);
    }
    suites.push_back({{"name", s.name},
                      {"checks", s.checks.size()},
                      {"passed", s.passed()},
                      {"failed", failed}});
  }
  json artifacts = json::array();
  for (const auto& a : ctx.writer.artifacts()) {
    artifacts.push_back({{"file", a.file}, {"sha1", a.sha1}, {"bytes", a.bytes}});
  }
  const json m = {
      {"schema_version", 1},
      {"command", ctx.cfg.command},
      {"config", json::parse(config_json(ctx.cfg))},
      {"versions",
       {{"sasaki", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"compiler", __VERSION__}}},
      {"wall_time_s", wall},
      {"exit_code", code},
      {"artifacts", artifacts},
      {"suites", suites}};
  ctx.writer.write("manifest.json", m.dump(2));
}

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

std::map<std::string, double> default_tolerances() {
  return {{"newton", 1e-10},   {"monotonicity", 1e-8}, {"identity", 1e-7},
          {"integral", 1e-5},  {"monitor", 1e-6},      {"scan_F", 1e-6},
          {"recovery", 1e-7},  {"consistency", 1e-5}};
}

RunConfig apply_config_json(const std::string& text, RunConfig cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "command") cfg.command = get_as<std::string>(v, k);
    else if (k == "grid_n") cfg.grid_n = get_as<int>(v, k);
    else if (k == "seed") cfg.seed = get_as<std::uint64_t>(v, k);
    else if (k == "out_dir") cfg.out_dir = get_as<std::string>(v, k);
    else if (k == "tolerances") {
      if (!v.is_object()) throw ConfigError("tolerances must be an object");
      const auto known = default_tolerances();
      for (auto t = v.begin(); t != v.end(); ++t) {
        if (!known.count(t.key())) throw ConfigError("unknown tolerance '" + t.key() + "'");
        cfg.tolerances[t.key()] = get_as<double>(t.value(), t.key());
      }
    }
    else if (k == "psi") cfg.psi = get_as<std::string>(v, k);
    else if (k == "phi") cfg.phi = get_as<std::string>(v, k);
    else if (k == "t") cfg.t = get_as<double>(v, k);
    else if (k == "t_start") cfg.t_start = get_as<double>(v, k);
    else if (k == "t_end") cfg.t_end = get_as<double>(v, k);
    else if (k == "dt") cfg.dt = get_as<double>(v, k);
    else if (k == "dt_min") cfg.dt_min = get_as<double>(v, k);
    else if (k == "with_K") cfg.with_K = get_as<bool>(v, k);
    else if (k == "ds") cfg.ds = get_as<double>(v, k);
    else if (k == "s_end") cfg.s_end = get_as<double>(v, k);
    else if (k == "record_every") cfg.record_every = get_as<int>(v, k);
    else if (k == "family") cfg.family = get_as<std::string>(v, k);
    else if (k == "params") cfg.params = get_as<std::vector<double>>(v, k);
    else if (k == "eps") cfg.eps = get_as<double>(v, k);
    else if (k == "k") cfg.k = get_as<int>(v, k);
    else if (k == "m") cfg.m = get_as<int>(v, k);
    else if (k == "c") cfg.c = get_as<double>(v, k);
    else if (k == "samples") cfg.samples = get_as<int>(v, k);
    else throw ConfigError("unknown config key '" + k + "'");
  }
  return cfg;
}

std::string config_json(const RunConfig& cfg) {
  auto tol = default_tolerances();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  const json j = {{"command", cfg.command}, {"grid_n", cfg.grid_n},   {"seed", cfg.seed},
                  {"out_dir", cfg.out_dir}, {"tolerances", tol},      {"psi", cfg.psi},
                  {"phi", cfg.phi},         {"t", cfg.t},             {"t_start", cfg.t_start},
                  {"t_end", cfg.t_end},     {"dt", cfg.dt},           {"dt_min", cfg.dt_min},
                  {"with_K", cfg.with_K},   {"ds", cfg.ds},           {"s_end", cfg.s_end},
                  {"record_every", cfg.record_every},                 {"family", cfg.family},
                  {"params", cfg.params},   {"eps", cfg.eps},         {"k", cfg.k},
                  {"m", cfg.m},             {"c", cfg.c},             {"samples", cfg.samples}};
  return j.dump(2);
}

void validate(const RunConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  if (cfg.grid_n < 8) throw ConfigError("grid_n must be at least 8");
  const auto known = default_tolerances();
  for (const auto& [k, v] : cfg.tolerances) {
    if (!known.count(k)) throw ConfigError("unknown tolerance '" + k + "'");
    if (!(v > 0.0)) throw ConfigError("tolerance '" + k + "' must be positive");
  }
  if (!(cfg.t > 0.0 && cfg.t <= 1.0)) throw ConfigError("t must lie in (0, 1]");
  if (!(cfg.t_start > 0.0 && cfg.t_start <= cfg.t_end && cfg.t_end <= 1.0)) {
    throw ConfigError("need 0 < t_start <= t_end <= 1");
  }
  if (!(cfg.dt > 0.0 && cfg.dt_min > 0.0)) throw ConfigError("dt and dt_min must be positive");
  if (!(cfg.ds > 0.0 && cfg.s_end > 0.0)) throw ConfigError("ds and s_end must be positive");
  if (cfg.record_every < 1) throw ConfigError("record_every must be at least 1");
  if (cfg.family != "mobius" && cfg.family != "bump") {
    throw ConfigError("family must be mobius or bump");
  }
  if (cfg.params.empty()) throw ConfigError("params must not be empty");
  if (!(cfg.eps > 0.0)) throw ConfigError("eps must be positive");
  if (cfg.k < 1) throw ConfigError("k must be at least 1");
  if (cfg.m < 1) throw ConfigError("m must be at least 1");
  if (!(cfg.c > 0.0)) throw ConfigError("c must be positive");
  if (cfg.samples < 1) throw ConfigError("samples must be at least 1");
  if (cfg.out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

int run(const RunConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg = config;
  auto tol = default_tolerances();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return exit_usage;
  }
  cfg.tolerances = tol;

  std::unique_ptr<Context> ctx;
  int code = exit_ok;
  try {
    ctx = std::make_unique<Context>(cfg, log);
    log << cfg.command << " (n = " << cfg.grid_n << ")\n";
    if (cfg.command == "solve") do_solve(*ctx, "");
    else if (cfg.command == "path") do_path(*ctx, "", ctx->policy());
    else if (cfg.command == "flow") do_flow(*ctx, "", ctx->base());
    else if (cfg.command == "scan") do_scan(*ctx, "");
    else if (cfg.command == "pinch") do_pinch(*ctx, "");
    else if (cfg.command == "spectrum") do_spectrum(*ctx, "");
    else if (cfg.command == "curvature") do_curvature(*ctx, "");
    else code = verify_all(*ctx);
    for (const auto& s : ctx->suites) {
      if (!s.ok()) code = exit_violation;
    }
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << "\n";
    code = exit_violation;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    if (!ctx) return exit_usage;
    code = exit_usage;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_manifest(*ctx, code, wall);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_usage;
  }
  int passed = 0, total = 0;
  for (const auto& s : ctx->suites) {
    passed += s.passed();
    total += static_cast<int>(s.checks.size());
  }
  log << passed << "/" << total << " checks passed, exit " << code << "\n";
  return code;
}

}  // namespace sasaki
