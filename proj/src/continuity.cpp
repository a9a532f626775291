#include "sasaki/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sasaki/errors.hpp"

namespace sasaki {
namespace {

struct Residuals {
  Field ratio;  // of base + phi over the reference
  Field log_form;
  double defect_sup = 0.0;
  double merit = 0.0;
};

Residuals evaluate(const BasicPotential& phi, double t, const MetricState& base) {
  const Grid& g = *base.grid();
  const double m1 = base.m() + 1.0;
  Residuals r;
  r.ratio = base.ratio() + 0.25 * basic_laplacian(phi.values, g);
  const Field target = base.ricci_potential() - t * m1 * phi.values;
  r.log_form = r.ratio.array().log() - base.log_ratio().array() - target.array();
  const Field defect =
      r.ratio.array() / base.ratio().array() - target.array().exp();
  r.defect_sup = defect.cwiseAbs().maxCoeff();
  r.merit = g.integrate(r.log_form.array().square().matrix());
  return r;
}

// Solves (R^{-1} L / 4 + t(m+1)) delta = rhs.
Field newton_step(const Grid& g, const Field& ratio, double shift, const Field& rhs) {
  const int n = g.size();
  if (shift < 2.0 * (1.0 - 1e-9)) {
    Eigen::MatrixXd a = 0.25 * g.round_laplacian();
    for (int i = 0; i < n; ++i) a.row(i) /= ratio(i);
    a.diagonal().array() += shift;
    return a.partialPivLu().solve(rhs);
  }
  // Near t = 1 the Jacobian has the Hamiltonian-field kernel. Expand in the
  // symmetric pencil (W L / 4, W R) and drop modes with mu + shift ~ 0.
  const Eigen::MatrixXd wl = 0.25 * (g.weights().asDiagonal() * g.round_laplacian());
  const Eigen::MatrixXd a = 0.5 * (wl + wl.transpose());
  const Field wr = g.weights().cwiseProduct(ratio);
  const Eigen::MatrixXd b = wr.asDiagonal().toDenseMatrix();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  if (es.info() != Eigen::Success) return Field::Zero(n);
  const Field proj = es.eigenvectors().transpose() * wr.cwiseProduct(rhs);
  Field coeff(n);
  for (int k = 0; k < n; ++k) {
    const double d = es.eigenvalues()(k) + shift;
    coeff(k) = std::abs(d) < 1e-8 ? 0.0 : proj(k) / d;
  }
  return es.eigenvectors() * coeff;
}

}  // namespace

BasicPotential mobius_potential(const GridPtr& grid, double lambda) {
  if (!(lambda > 0.0)) {
    throw DomainError("Mobius parameter must be positive", lambda);
  }
  const double l2 = lambda * lambda;
  BasicPotential p = BasicPotential::sample(grid, [l2](double x) {
    return std::log(0.5 * ((l2 + 1.0) + (l2 - 1.0) * x));
  });
  return p + (-grid->integrate(p.values));
}

BasicPotential legendre_bump(const GridPtr& grid, double eps) {
  return BasicPotential::sample(grid,
                                [eps](double x) { return eps * 0.5 * (3.0 * x * x - 1.0); });
}

Field ma_defect(const BasicPotential& phi, double t, const MetricState& base) {
  require_same_grid(phi.grid, base.grid());
  const Field ratio = base.ratio() + 0.25 * basic_laplacian(phi.values, *base.grid());
  const double margin = ratio.minCoeff();
  if (!(margin > 0.0)) throw DomainError("potential is not admissible over the base", margin);
  const Field target = base.ricci_potential() - t * (base.m() + 1.0) * phi.values;
  return ratio.array() / base.ratio().array() - target.array().exp();
}

Eigen::MatrixXd ma_defect_jacobian(const BasicPotential& phi, double t,
                                   const MetricState& base) {
  require_same_grid(phi.grid, base.grid());
  const Grid& g = *base.grid();
  const double c = t * (base.m() + 1.0);
  Eigen::MatrixXd jac = 0.25 * g.round_laplacian();
  for (int i = 0; i < g.size(); ++i) jac.row(i) /= base.ratio()(i);
  const Field e = (base.ricci_potential() - c * phi.values).array().exp();
  jac.diagonal() += c * e;
  return jac;
}

NewtonResult solve_ma_at_t(double t, const MetricState& base, const BasicPotential& guess,
                           const NewtonConfig& config) {
  if (!(t > 0.0 && t <= 1.0)) throw ConfigError("continuity parameter must lie in (0, 1]");
  require_same_grid(guess.grid, base.grid());
  const Grid& g = *base.grid();
  const double shift = t * (base.m() + 1.0);

  NewtonResult out;
  out.phi = guess;
  Residuals cur = evaluate(out.phi, t, base);
  const double margin0 = cur.ratio.minCoeff();
  if (!(margin0 > 0.0)) throw DomainError("initial guess is not admissible", margin0);

  for (int it = 0;; ++it) {
    out.trace.push_back(cur.defect_sup);
    if (cur.defect_sup < config.tol) {
      out.residual = cur.defect_sup;
      out.iterations = it;
      return out;
    }
    if (it >= config.max_iter) {
      throw SolverError("Newton did not converge at t = " + std::to_string(t), out.trace);
    }
    const Field step = newton_step(g, cur.ratio, shift, -cur.log_form);
    if (!step.allFinite()) {
      throw SolverError("Newton step is not finite at t = " + std::to_string(t), out.trace);
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= config.max_halvings; ++h, alpha *= 0.5) {
      BasicPotential trial{out.phi.grid, out.phi.values + alpha * step};
      const Field ratio = base.ratio() + 0.25 * basic_laplacian(trial.values, g);
      if (!(ratio.minCoeff() >= config.min_margin)) continue;
      Residuals next = evaluate(trial, t, base);
      if (next.merit <= (1.0 - 2.0 * config.armijo * alpha) * cur.merit ||
          next.defect_sup < config.tol) {
        out.phi = std::move(trial);
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw SolverError("line search failed at t = " + std::to_string(t), out.trace);
    }
  }
}

ContinuityPath run_continuity_path(const MetricState& base, const PathPolicy& policy) {
  if (!(policy.t_start > 0.0 && policy.t_start <= policy.t_end && policy.t_end <= 1.0)) {
    throw ConfigError("need 0 < t_start <= t_end <= 1");
  }
  if (!(policy.dt > 0.0 && policy.dt_min > 0.0)) throw ConfigError("steps must be positive");

  ContinuityPath path;
  path.policy = policy;
  const double m = base.m();

  auto make_record = [&](double t, NewtonResult&& res) {
    PathRecord rec;
    rec.t = t;
    rec.phi = std::move(res.phi);
    rec.residual = res.residual;
    rec.c0_norm = rec.phi.sup_norm();
    char tag[32];
    std::snprintf(tag, sizeof tag, "t=%.6f", t);
    rec.ledger = evaluate_ledger(rec.phi, base, tag, policy.with_K);
    const MetricState st = deform(base, rec.phi);
    const Field expect =
        2.0 * (m + 1.0) * (m - 0.25 * (1.0 - t) * st.laplacian(rec.phi.values).array());
    rec.identity_residual = (st.scalar_curvature() - expect).cwiseAbs().maxCoeff();
    path.records.push_back(std::move(rec));
  };

  try {
    make_record(policy.t_start,
                solve_ma_at_t(policy.t_start, base, BasicPotential::zero(base.grid()),
                              policy.newton));
  } catch (const Error& e) {
    path.failed_at = policy.t_start;
    path.failure = e.what();
    return path;
  }

  double dt = policy.dt;
  while (path.records.back().t < policy.t_end) {
    const PathRecord& last = path.records.back();
    double t_next = last.t + dt;
    if (t_next > policy.t_end - 1e-6 * dt) t_next = policy.t_end;

    BasicPotential guess = last.phi;
    if (path.records.size() >= 2) {
      const PathRecord& prev = path.records[path.records.size() - 2];
      const double w = (t_next - last.t) / (last.t - prev.t);
      BasicPotential extrap{last.phi.grid, last.phi.values + w * (last.phi.values - prev.phi.values)};
      if (admissibility(base.potential() + extrap).margin > policy.newton.min_margin) {
        guess = std::move(extrap);
      }
    }
    try {
      make_record(t_next, solve_ma_at_t(t_next, base, guess, policy.newton));
      dt = std::min(policy.dt, 2.0 * dt);
    } catch (const Error& e) {
      dt *= 0.5;
      if (dt < policy.dt_min) {
        path.failed_at = t_next;
        path.failure = e.what();
        return path;
      }
    }
  }
  path.complete = true;
  return path;
}

PathDiagnostics path_diagnostics(const ContinuityPath& path, const MetricState& base,
                                 int head_nodes) {
  PathDiagnostics d;
  const double m = base.m();
  d.alpha = 1.0 - 1.0 / (4.0 * m + 2.0);
  const auto& recs = path.records;
  if (recs.empty()) return d;

  auto ij = [](const PathRecord& r) { return r.ledger.I - r.ledger.J; };
  d.min_increment = 0.0;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    d.max_identity_residual = std::max(d.max_identity_residual, recs[k].identity_residual);
    if (k > 0) {
      const double inc = ij(recs[k]) - ij(recs[k - 1]);
      d.min_increment = (k == 1) ? inc : std::min(d.min_increment, inc);
    }
    if (recs[k].t < 1.0) {
      d.fitted_C1 = std::max(d.fitted_C1, recs[k].ledger.F * recs[k].t / (1.0 - recs[k].t));
    }
  }

  const PathRecord& end = recs.back();
  d.reaches_one = path.complete && end.t == 1.0;

  // Pairwise Osc bounds on J and I - J.
  d.j_pair_slack = 0.0;
  d.ij_pair_slack = 0.0;
  bool first = true;
  for (std::size_t a = 0; a < recs.size(); ++a) {
    for (std::size_t b = a + 1; b < recs.size(); ++b) {
      const double osc = (recs[a].phi - recs[b].phi).oscillation();
      const double sj = osc - std::abs(recs[a].ledger.J - recs[b].ledger.J);
      const double sij = m * osc - std::abs(ij(recs[a]) - ij(recs[b]));
      d.j_pair_slack = first ? sj : std::min(d.j_pair_slack, sj);
      d.ij_pair_slack = first ? sij : std::min(d.ij_pair_slack, sij);
      first = false;
    }
  }

  for (const auto& r : recs) {
    const double s = 1.0 - r.t;
    d.f_values.push_back(std::pow(s, 1.0 - d.alpha) *
                         std::pow(1.0 + 2.0 * s * r.c0_norm, d.alpha));
  }

  if (!d.reaches_one) return d;

  for (const auto& r : recs) {
    const double denom = (1.0 - r.t) * r.c0_norm;
    const double excess = (end.phi - r.phi).sup_norm() - 1.0;
    if (excess > 0.0) {
      d.fitted_A = denom > 0.0 ? std::max(d.fitted_A, excess / denom) : HUGE_VAL;
    }
  }

  // \int_0^{t_0} by Gauss nodes with fresh solves, then trapezoid on records.
  const double t0 = recs.front().t;
  const Quadrature q = gauss_legendre_unit(head_nodes);
  double head = 0.0;
  BasicPotential guess = BasicPotential::zero(base.grid());
  for (int j = 0; j < head_nodes; ++j) {
    const double s = t0 * q.nodes(j);
    const NewtonResult res = solve_ma_at_t(s, base, guess, path.policy.newton);
    head += q.weights(j) * (eval_I(res.phi, base) - eval_J(res.phi, base));
    guess = res.phi;
  }
  double body = 0.0;
  for (std::size_t k = 1; k < recs.size(); ++k) {
    body += 0.5 * (recs[k].t - recs[k - 1].t) * (ij(recs[k]) + ij(recs[k - 1]));
  }
  d.ij_integral = t0 * head + body;
  d.F_einstein = eval_F(-end.phi, deform(base, end.phi)).F;
  d.integral_residual = std::abs(d.F_einstein - d.ij_integral);
  return d;
}

ScanReport mt_scan(const std::vector<PotentialFamily>& families, const MetricState& base) {
  ScanReport rep;
  for (const auto& fam : families) {
    for (double p : fam.params) {
      const BasicPotential phi = fam.make(p);
      ScanRow row;
      row.family = fam.name;
      row.param = p;
      row.I = eval_I(phi, base);
      row.J = eval_J(phi, base);
      row.F = eval_F(phi, base).F;
      rep.rows.push_back(row);
    }
  }
  // Least squares for F = C1 J - C2.
  const int k = static_cast<int>(rep.rows.size());
  if (k >= 2) {
    Eigen::MatrixXd a(k, 2);
    Field b(k);
    for (int i = 0; i < k; ++i) {
      a(i, 0) = rep.rows[i].J;
      a(i, 1) = -1.0;
      b(i) = rep.rows[i].F;
    }
    const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
    if (c.allFinite()) {
      rep.C1 = c(0);
      rep.C2 = c(1);
    }
  }
  return rep;
}

PotentialFamily mobius_family(const GridPtr& grid, std::vector<double> lambdas) {
  return {"mobius", std::move(lambdas),
          [grid](double l) { return mobius_potential(grid, l); }};
}

PotentialFamily bump_family(const GridPtr& grid, std::vector<double> eps) {
  return {"bump", std::move(eps), [grid](double e) { return legendre_bump(grid, e); }};
}

}  // namespace sasaki
