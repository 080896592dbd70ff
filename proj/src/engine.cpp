#include "fairwork/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fairwork/error.hpp"
#include "fairwork/kernels.hpp"

namespace fairwork::engine {

double SparseRow::eval(std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) s += coef[k] * y[index[k]];
  return s;
}

// ---------------------------------------------------------------------------
// LogSumObjective

void LogSumObjective::add_term(double weight, SparseRow row, double offset) {
  terms_.push_back({weight, std::move(row), offset});
}

double LogSumObjective::value(std::span<const double> y) const {
  double f = kernels::dot(linear_, y);
  for (const auto& t : terms_) f += t.weight * std::log(t.row.eval(y) - t.offset);
  return f;
}

void LogSumObjective::gradient(std::span<const double> y, std::span<double> grad) const {
  std::copy(linear_.begin(), linear_.end(), grad.begin());
  for (const auto& t : terms_) {
    const double s = t.weight / (t.row.eval(y) - t.offset);
    for (std::size_t k = 0; k < t.row.size(); ++k) grad[t.row.index[k]] += s * t.row.coef[k];
  }
}

void LogSumObjective::add_neg_hessian(std::span<const double> y, DenseMatrix& h) const {
  for (const auto& t : terms_) {
    const double u = t.row.eval(y) - t.offset;
    const double s = t.weight / (u * u);
    for (std::size_t a = 0; a < t.row.size(); ++a) {
      const double ca = s * t.row.coef[a];
      for (std::size_t b = 0; b < t.row.size(); ++b) h(t.row.index[a], t.row.index[b]) += ca * t.row.coef[b];
    }
  }
}

bool LogSumObjective::in_domain(std::span<const double> y) const {
  return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.row.eval(y) - t.offset > 0.0; });
}

// ---------------------------------------------------------------------------
// Convex constraints

ExpUtilityBound::ExpUtilityBound(std::size_t level_var, double weight, const SparseRow& utility, double offset)
    : level_(level_var), weight_(weight), utility_(utility), offset_(offset) {
  support_.push_back(level_);
  support_.insert(support_.end(), utility_.index.begin(), utility_.index.end());
}

double ExpUtilityBound::value(std::span<const double> y) const {
  return std::exp(y[level_] / weight_) - (utility_.eval(y) - offset_);
}

void ExpUtilityBound::gradient(std::span<const double> y, std::span<double> g) const {
  g[0] = std::exp(y[level_] / weight_) / weight_;
  for (std::size_t k = 0; k < utility_.size(); ++k) g[k + 1] = -utility_.coef[k];
}

void ExpUtilityBound::hessian(std::span<const double> y, std::span<double> h) const {
  std::fill(h.begin(), h.end(), 0.0);
  h[0] = std::exp(y[level_] / weight_) / (weight_ * weight_);
}

bool RelativeEntropyBound::defined_at(std::span<const double> y) const {
  return y[support_[0]] + eps_ > 0.0 && y[support_[1]] + eps_ > 0.0;
}

double RelativeEntropyBound::value(std::span<const double> y) const {
  const double a = y[support_[0]] + eps_, b = y[support_[1]] + eps_;
  return a * std::log(a / b) - y[support_[2]];
}

void RelativeEntropyBound::gradient(std::span<const double> y, std::span<double> g) const {
  const double a = y[support_[0]] + eps_, b = y[support_[1]] + eps_;
  g[0] = std::log(a / b) + 1.0;
  g[1] = -a / b;
  g[2] = -1.0;
}

void RelativeEntropyBound::hessian(std::span<const double> y, std::span<double> h) const {
  const double a = y[support_[0]] + eps_, b = y[support_[1]] + eps_;
  std::fill(h.begin(), h.end(), 0.0);
  h[0] = 1.0 / a;
  h[1] = h[3] = -1.0 / b;
  h[4] = a / (b * b);
}

// ---------------------------------------------------------------------------
// Primal-dual barrier method

namespace {

struct Workspace {
  std::vector<double> slack;
  std::vector<double> cval;
  std::vector<double> grad_f;
  std::vector<double> rhs;
  std::vector<double> step;
  std::vector<double> trial;
  std::vector<double> cgrad;
  std::vector<double> chess;
  std::vector<double> resid;
  DenseMatrix hess;
  // Explicit duals and their Newton directions.
  std::vector<double> lam, eta, zeta;
  std::vector<double> dlam, deta, dzeta;
};

bool nonlinear_ok(const Problem& p, std::span<const double> y, std::vector<double>* values) {
  for (std::size_t c = 0; c < p.nonlinear.size(); ++c) {
    const auto& con = *p.nonlinear[c];
    if (!con.defined_at(y)) return false;
    const double v = con.value(y);
    if (!(v < 0.0)) return false;
    if (values) (*values)[c] = v;
  }
  return true;
}

bool strictly_inside(const Problem& p, std::span<const double> y, Workspace& ws) {
  for (std::size_t k = 0; k < p.num_vars; ++k) {
    if (!std::isfinite(y[k])) return false;
    if (p.lower_bounded[k] && !(y[k] > 0.0)) return false;
  }
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    ws.slack[r] = p.rows[r].rhs - p.rows[r].row.eval(y);
    if (!(ws.slack[r] > 0.0)) return false;
  }
  if (!nonlinear_ok(p, y, &ws.cval)) return false;
  return !p.objective || p.objective->in_domain(y);
}

double objective_value(const Problem& p, std::span<const double> y) {
  return p.objective ? p.objective->value(y) : 0.0;
}

/// Barrier merit -f(y) - mu * sum log(...). Assumes strictly_inside was checked.
double merit(const Problem& p, std::span<const double> y, double mu, const Workspace& ws) {
  double phi = -objective_value(p, y);
  double logs = 0.0;
  for (std::size_t k = 0; k < p.num_vars; ++k) {
    if (p.lower_bounded[k]) logs += std::log(y[k]);
  }
  for (double s : ws.slack) logs += std::log(s);
  for (double c : ws.cval) logs += std::log(-c);
  return phi - mu * logs;
}

void objective_gradient(const Problem& p, std::span<const double> y, Workspace& ws) {
  std::fill(ws.grad_f.begin(), ws.grad_f.end(), 0.0);
  if (p.objective) p.objective->gradient(y, ws.grad_f);
}

/// Lagrangian gradient grad f - A^T lam - J^T eta + zeta with the explicit duals.
void dual_residual(const Problem& p, std::span<const double> y, Workspace& ws) {
  ws.resid = ws.grad_f;
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r].row;
    for (std::size_t a = 0; a < row.size(); ++a) ws.resid[row.index[a]] -= ws.lam[r] * row.coef[a];
  }
  for (std::size_t c = 0; c < p.nonlinear.size(); ++c) {
    const auto& con = *p.nonlinear[c];
    ws.cgrad.resize(con.support().size());
    con.gradient(y, ws.cgrad);
    for (std::size_t a = 0; a < ws.cgrad.size(); ++a) ws.resid[con.support()[a]] -= ws.eta[c] * ws.cgrad[a];
  }
  for (std::size_t k = 0; k < p.num_vars; ++k) {
    if (p.lower_bounded[k]) ws.resid[k] += ws.zeta[k];
  }
}

/// Largest |dual * slack / mu - 1| over all complementarity pairs.
double centrality(const Problem& p, std::span<const double> y, double mu, const Workspace& ws) {
  double dev = 0.0;
  for (std::size_t r = 0; r < p.rows.size(); ++r) dev = std::max(dev, std::fabs(ws.lam[r] * ws.slack[r] / mu - 1.0));
  for (std::size_t c = 0; c < p.nonlinear.size(); ++c) {
    dev = std::max(dev, std::fabs(ws.eta[c] * -ws.cval[c] / mu - 1.0));
  }
  for (std::size_t k = 0; k < p.num_vars; ++k) {
    if (p.lower_bounded[k]) dev = std::max(dev, std::fabs(ws.zeta[k] * y[k] / mu - 1.0));
  }
  return dev;
}

/// Reduced primal-dual Newton system: ws.hess dy = ws.rhs, where rhs is the
/// negative barrier-merit gradient.
void assemble(const Problem& p, std::span<const double> y, double mu, Workspace& ws) {
  const std::size_t n = p.num_vars;
  ws.hess.set_zero();
  if (p.objective) p.objective->add_neg_hessian(y, ws.hess);

  for (std::size_t k = 0; k < n; ++k) {
    ws.rhs[k] = ws.grad_f[k];
    if (p.lower_bounded[k]) {
      ws.rhs[k] += mu / y[k];
      ws.hess(k, k) += ws.zeta[k] / y[k];
    }
  }
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r].row;
    const double s = ws.slack[r];
    const double g = mu / s, h = ws.lam[r] / s;
    for (std::size_t a = 0; a < row.size(); ++a) {
      ws.rhs[row.index[a]] -= g * row.coef[a];
      const double ca = h * row.coef[a];
      for (std::size_t b = 0; b < row.size(); ++b) ws.hess(row.index[a], row.index[b]) += ca * row.coef[b];
    }
  }
  for (std::size_t c = 0; c < p.nonlinear.size(); ++c) {
    const auto& con = *p.nonlinear[c];
    const auto sup = con.support();
    const std::size_t q = sup.size();
    ws.cgrad.resize(q);
    ws.chess.resize(q * q);
    con.gradient(y, ws.cgrad);
    con.hessian(y, ws.chess);
    const double w = -ws.cval[c];
    const double eta = ws.eta[c];
    for (std::size_t a = 0; a < q; ++a) {
      ws.rhs[sup[a]] -= mu * ws.cgrad[a] / w;
      for (std::size_t b = 0; b < q; ++b) {
        ws.hess(sup[a], sup[b]) += eta * ws.chess[a * q + b] + eta * ws.cgrad[a] * ws.cgrad[b] / w;
      }
    }
  }
}

bool solve_newton(Workspace& ws) {
  const std::size_t n = ws.rhs.size();
  DenseMatrix saved = ws.hess;
  double shift = 0.0;
  double max_diag = 0.0;
  for (std::size_t k = 0; k < n; ++k) max_diag = std::max(max_diag, std::fabs(saved(k, k)));
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (attempt > 0) {
      shift = shift == 0.0 ? 1e-12 * std::max(1.0, max_diag) : shift * 100.0;
      ws.hess = saved;
      for (std::size_t k = 0; k < n; ++k) ws.hess(k, k) += shift;
    }
    if (cholesky_factor(ws.hess) >= 0) {
      ws.step = ws.rhs;
      cholesky_solve(ws.hess, ws.step);
      return true;
    }
  }
  return false;
}

/// Dual directions implied by the primal step; returns the largest dual step in (0, 1].
double dual_directions(const Problem& p, std::span<const double> y, double mu, Workspace& ws) {
  double alpha = 1.0;
  auto limit = [&alpha](double v, double dv) {
    if (dv < 0.0) alpha = std::min(alpha, -0.995 * v / dv);
  };
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const double s = ws.slack[r];
    ws.dlam[r] = (mu / s - ws.lam[r]) + ws.lam[r] / s * p.rows[r].row.eval(ws.step);
    limit(ws.lam[r], ws.dlam[r]);
  }
  for (std::size_t c = 0; c < p.nonlinear.size(); ++c) {
    const auto& con = *p.nonlinear[c];
    const auto sup = con.support();
    ws.cgrad.resize(sup.size());
    con.gradient(y, ws.cgrad);
    double gd = 0.0;
    for (std::size_t a = 0; a < sup.size(); ++a) gd += ws.cgrad[a] * ws.step[sup[a]];
    const double w = -ws.cval[c];
    ws.deta[c] = (mu / w - ws.eta[c]) + ws.eta[c] / w * gd;
    limit(ws.eta[c], ws.deta[c]);
  }
  for (std::size_t k = 0; k < p.num_vars; ++k) {
    if (!p.lower_bounded[k]) continue;
    ws.dzeta[k] = (mu / y[k] - ws.zeta[k]) - ws.zeta[k] / y[k] * ws.step[k];
    limit(ws.zeta[k], ws.dzeta[k]);
  }
  return alpha;
}

double max_step_to_boundary(const Problem& p, std::span<const double> y, std::span<const double> d,
                            const Workspace& ws) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.num_vars; ++k) {
    if (p.lower_bounded[k] && d[k] < 0.0) alpha = std::min(alpha, -y[k] / d[k]);
  }
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const double ad = p.rows[r].row.eval(d);
    if (ad > 0.0) alpha = std::min(alpha, ws.slack[r] / ad);
  }
  return alpha;
}

double initial_mu(const Problem& p, std::span<const double> y, const Workspace& ws) {
  double scale = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < p.num_vars; ++k) {
    if (p.lower_bounded[k]) {
      scale += std::fabs(ws.grad_f[k]) * y[k];
      ++count;
    }
  }
  if (count == 0) return 0.1;
  return std::clamp(0.1 * scale / static_cast<double>(count), 1e-4, 10.0);
}

void reset_duals(const Problem& p, std::span<const double> y, double mu, Workspace& ws) {
  for (std::size_t r = 0; r < p.rows.size(); ++r) ws.lam[r] = mu / ws.slack[r];
  for (std::size_t c = 0; c < p.nonlinear.size(); ++c) ws.eta[c] = mu / -ws.cval[c];
  for (std::size_t k = 0; k < p.num_vars; ++k) ws.zeta[k] = p.lower_bounded[k] ? mu / y[k] : 0.0;
}

}  // namespace

bool strictly_feasible(const Problem& problem, std::span<const double> y) {
  Workspace ws;
  ws.slack.resize(problem.rows.size());
  ws.cval.resize(problem.nonlinear.size());
  return y.size() == problem.num_vars && strictly_inside(problem, y, ws);
}

SolveResult maximize(const Problem& p, std::span<const double> start, const Options& opt) {
  const std::size_t n = p.num_vars;
  if (start.size() != n) {
    throw Error(ErrorKind::domain_guard_violated, "start point has wrong dimension");
  }
  Workspace ws;
  ws.slack.resize(p.rows.size());
  ws.cval.resize(p.nonlinear.size());
  ws.grad_f.assign(n, 0.0);
  ws.rhs.assign(n, 0.0);
  ws.step.assign(n, 0.0);
  ws.trial.assign(n, 0.0);
  ws.hess.resize(n);
  ws.lam.assign(p.rows.size(), 0.0);
  ws.dlam.assign(p.rows.size(), 0.0);
  ws.eta.assign(p.nonlinear.size(), 0.0);
  ws.deta.assign(p.nonlinear.size(), 0.0);
  ws.zeta.assign(n, 0.0);
  ws.dzeta.assign(n, 0.0);

  SolveResult res;
  res.y.assign(start.begin(), start.end());
  if (!strictly_inside(p, res.y, ws)) {
    throw Error(ErrorKind::domain_guard_violated, "no strictly feasible start: a bound, row, or log guard is not strictly satisfied");
  }

  const double mu_final = opt.mu_final > 0.0 ? opt.mu_final : 1e-4 * opt.tol;
  objective_gradient(p, res.y, ws);
  double mu = std::max(initial_mu(p, res.y, ws), mu_final);
  reset_duals(p, res.y, mu, ws);

  int iterations = 0;
  bool done = false;
  while (!done && iterations < opt.max_iterations) {
    const bool last = mu <= mu_final;
    int inner = 0;
    double best_stat = std::numeric_limits<double>::infinity();
    int stalled = 0;
    while (iterations < opt.max_iterations) {
      objective_gradient(p, res.y, ws);
      dual_residual(p, res.y, ws);
      const double fscale = std::max(1.0, kernels::max_abs(ws.grad_f));
      const double stat = kernels::max_abs(ws.resid) / fscale;
      const double dev = centrality(p, res.y, mu, ws);
      if (last) {
        if (stat <= 1e-2 * opt.tol && dev <= 0.5) break;
        if (stat < 0.5 * best_stat) {
          best_stat = stat;
          stalled = 0;
        } else if (++stalled >= 5) {
          break;
        }
      } else if (stat <= std::max(1e-2 * opt.tol, 10.0 * mu) && dev <= 0.5) {
        break;
      }

      assemble(p, res.y, mu, ws);
      if (!solve_newton(ws)) break;
      const double decrement = kernels::dot(ws.rhs, ws.step);
      const double alpha_dual = dual_directions(p, res.y, mu, ws);

      double alpha = std::min(1.0, 0.995 * max_step_to_boundary(p, res.y, ws.step, ws));
      const double phi0 = merit(p, res.y, mu, ws);
      bool accepted = false;
      std::vector<double> slack_saved = ws.slack, cval_saved = ws.cval;
      while (alpha > 1e-14) {
        for (std::size_t k = 0; k < n; ++k) ws.trial[k] = res.y[k] + alpha * ws.step[k];
        if (strictly_inside(p, ws.trial, ws)) {
          const double phi = merit(p, ws.trial, mu, ws);
          if (phi <= phi0 - 1e-4 * alpha * decrement + 1e-13 * std::fabs(phi0)) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      ++iterations;
      ++inner;
      if (opt.record_trace) {
        res.trace.push_back({iterations, mu, objective_value(p, res.y), decrement, accepted ? alpha : 0.0});
      }
      if (!accepted) {
        ws.slack = slack_saved;
        ws.cval = cval_saved;
        break;
      }
      res.y.swap(ws.trial);
      for (std::size_t r = 0; r < ws.lam.size(); ++r) ws.lam[r] += alpha_dual * ws.dlam[r];
      for (std::size_t c = 0; c < ws.eta.size(); ++c) ws.eta[c] += alpha_dual * ws.deta[c];
      for (std::size_t k = 0; k < n; ++k) {
        if (p.lower_bounded[k]) ws.zeta[k] += alpha_dual * ws.dzeta[k];
      }
      if (inner > 80) break;
    }
    if (last) {
      done = true;
    } else {
      mu = std::max(mu_final, mu * (inner <= 2 ? 0.05 : 0.2));
    }
  }

  strictly_inside(p, res.y, ws);
  objective_gradient(p, res.y, ws);
  dual_residual(p, res.y, ws);

  res.iterations = iterations;
  res.objective = objective_value(p, res.y);
  res.row_duals = ws.lam;
  // a row touching no variable can never bind
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    if (p.rows[r].row.size() == 0) res.row_duals[r] = 0.0;
  }
  res.nonlinear_duals = ws.eta;
  res.bound_duals = ws.zeta;

  double comp = 0.0, infeas = 0.0;
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    comp = std::max(comp, ws.lam[r] * ws.slack[r]);
    infeas = std::max(infeas, -ws.slack[r]);
  }
  for (std::size_t c = 0; c < p.nonlinear.size(); ++c) {
    comp = std::max(comp, ws.eta[c] * -ws.cval[c]);
    infeas = std::max(infeas, ws.cval[c]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (p.lower_bounded[k]) {
      comp = std::max(comp, ws.zeta[k] * res.y[k]);
      infeas = std::max(infeas, -res.y[k]);
    }
  }
  res.kkt.stationarity = kernels::max_abs(ws.resid) / std::max(1.0, kernels::max_abs(ws.grad_f));
  res.kkt.primal_infeasibility = std::max(0.0, infeas);
  res.kkt.complementarity = comp;
  res.converged = res.kkt.stationarity <= opt.tol && res.kkt.primal_infeasibility <= opt.tol &&
                  res.kkt.complementarity <= opt.tol;
  return res;
}

// ---------------------------------------------------------------------------
// Phase I: max-min margin

MarginResult max_margin(const Problem& polytope, std::span<const AffineGuard> guards,
                        std::span<const double> interior, const Options& options) {
  Problem lp;
  lp.num_vars = polytope.num_vars;
  lp.lower_bounded = polytope.lower_bounded;
  lp.rows = polytope.rows;
  const std::size_t tau = lp.add_var(false);
  for (const auto& g : guards) {
    LinearConstraint c;
    c.row.add(tau, 1.0);
    for (std::size_t k = 0; k < g.row.size(); ++k) c.row.add(g.row.index[k], -g.row.coef[k]);
    c.rhs = -g.offset;
    lp.rows.push_back(std::move(c));
  }
  auto obj = std::make_shared<LogSumObjective>(lp.num_vars);
  obj->set_linear(tau, 1.0);
  lp.objective = obj;

  std::vector<double> start(interior.begin(), interior.end());
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& g : guards) lowest = std::min(lowest, g.row.eval(interior) - g.offset);
  if (guards.empty()) lowest = 0.0;
  start.push_back(lowest - 1.0);

  SolveResult sol = maximize(lp, start, options);
  MarginResult out;
  out.converged = sol.converged;
  out.witness.assign(sol.y.begin(), sol.y.begin() + static_cast<std::ptrdiff_t>(polytope.num_vars));

  double witness_min = std::numeric_limits<double>::infinity();
  for (const auto& g : guards) witness_min = std::min(witness_min, g.row.eval(out.witness) - g.offset);
  if (guards.empty()) witness_min = 0.0;
  out.margin = witness_min;

  // Blend toward the interior point so the start is well inside every row
  // while each guard keeps at least half the margin.
  double theta = 0.5;
  if (witness_min > 0.0) {
    for (const auto& g : guards) {
      const double gw = g.row.eval(out.witness) - g.offset;
      const double gu = g.row.eval(interior) - g.offset;
      if (gu < gw) theta = std::min(theta, (gw - 0.5 * witness_min) / (gw - gu));
    }
  }
  out.start.resize(polytope.num_vars);
  for (std::size_t k = 0; k < polytope.num_vars; ++k) {
    out.start[k] = (1.0 - theta) * out.witness[k] + theta * interior[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Max-min stage

void add_frozen_rows(Problem& problem, std::span<const Entity> entities, std::span<const FrozenBound> frozen) {
  for (const auto& f : frozen) {
    const auto& e = entities[f.entity];
    LinearConstraint c;
    for (std::size_t k = 0; k < e.row.size(); ++k) c.row.add(e.row.index[k], -e.row.coef[k]);
    c.rhs = -(f.min_utility + e.offset);
    problem.rows.push_back(std::move(c));
  }
}

MaxMinResult maxmin(const Problem& polytope, std::span<const Entity> entities,
                    std::span<const std::size_t> free_set, std::span<const FrozenBound> frozen,
                    std::span<const double> interior, const Options& options, double tie_tol) {
  if (free_set.empty()) throw Error(ErrorKind::precondition, "max-min stage needs at least one free entity");

  std::vector<AffineGuard> guards;
  for (std::size_t e : free_set) guards.push_back({entities[e].row, entities[e].offset});
  for (const auto& f : frozen) guards.push_back({entities[f.entity].row, entities[f.entity].offset + f.min_utility});
  MarginResult phase1 = max_margin(polytope, guards, interior, options);
  if (!(phase1.margin > 0.0)) {
    throw Error(ErrorKind::infeasible, "max-min stage: frozen bounds and positivity cannot hold together (margin " +
                                           std::to_string(phase1.margin) + ")");
  }

  Problem stage;
  stage.num_vars = polytope.num_vars;
  stage.lower_bounded = polytope.lower_bounded;
  stage.rows = polytope.rows;
  add_frozen_rows(stage, entities, frozen);
  const std::size_t level = stage.add_var(false);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t e : free_set) {
    const auto& ent = entities[e];
    stage.nonlinear.push_back(std::make_shared<ExpUtilityBound>(level, ent.weight, ent.row, ent.offset));
    lowest = std::min(lowest, ent.weight * std::log(ent.row.eval(phase1.start) - ent.offset));
  }
  auto obj = std::make_shared<LogSumObjective>(stage.num_vars);
  obj->set_linear(level, 1.0);
  stage.objective = obj;

  std::vector<double> start = phase1.start;
  start.push_back(lowest - 1.0);

  MaxMinResult out;
  out.solve = maximize(stage, start, options);
  out.t_star = out.solve.y[level];
  out.y.assign(out.solve.y.begin(), out.solve.y.begin() + static_cast<std::ptrdiff_t>(polytope.num_vars));
  for (std::size_t e : free_set) {
    const auto& ent = entities[e];
    const double val = ent.weight * std::log(ent.row.eval(out.y) - ent.offset);
    if (val <= out.t_star + tie_tol) out.tight.push_back(e);
  }
  return out;
}

}  // namespace fairwork::engine
