#include "fairwork/programs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairwork/assumption.hpp"
#include "fairwork/error.hpp"
#include "fairwork/layout.hpp"

namespace fairwork {

std::string_view program_name(ProgramKind kind) {
  switch (kind) {
    case ProgramKind::eg: return "eg";
    case ProgramKind::eg_demand: return "eg-demand";
    case ProgramKind::eg_time_sum: return "eg-time-sum";
    case ProgramKind::eg_time_geo_mean: return "eg-time-geo";
    case ProgramKind::eg_smooth: return "eg-smooth";
  }
  return "eg";
}

ProgramKind parse_program(std::string_view text) {
  if (text == "eg") return ProgramKind::eg;
  if (text == "eg-demand") return ProgramKind::eg_demand;
  if (text == "eg-time-sum") return ProgramKind::eg_time_sum;
  if (text == "eg-time-geo" || text == "eg-time-geo-mean") return ProgramKind::eg_time_geo_mean;
  if (text == "eg-smooth") return ProgramKind::eg_smooth;
  throw Error(ErrorKind::parse, "program: unknown value '" + std::string(text) + "'");
}

double kl_epsilon(const MarketInstance& inst) {
  double s = 0.0;
  for (const auto& item : inst.items) {
    for (double v : item.supply_per_period) s = std::max(s, v);
  }
  return 1e-6 * s;
}

namespace {

double kl_branch(double a, double b) { return a * std::log(a / b); }

bool per_period_program(ProgramKind kind) {
  return kind == ProgramKind::eg_time_geo_mean || kind == ProgramKind::eg_smooth;
}

}  // namespace

double smoothness_penalty(Penalty penalty, double next, double prev, double eps) {
  switch (penalty) {
    case Penalty::none: return 0.0;
    case Penalty::abs_dev: return std::fabs(next - prev);
    case Penalty::kl: {
      const double a = next + eps, b = prev + eps;
      return std::max(kl_branch(a, b), kl_branch(b, a));
    }
  }
  return 0.0;
}

std::vector<engine::LogSumObjective::Term> program_log_terms(const MarketInstance& inst, ProgramKind kind) {
  AllocationLayout layout(inst);
  std::vector<engine::LogSumObjective::Term> terms;
  const std::size_t T = inst.num_periods();
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    const auto& b = inst.buyers[i];
    switch (kind) {
      case ProgramKind::eg:
      case ProgramKind::eg_demand:
      case ProgramKind::eg_time_sum:
        terms.push_back({b.budget, layout.total_value_row(i), b.total_demand()});
        break;
      case ProgramKind::eg_time_geo_mean:
        for (std::size_t t = 0; t < T; ++t) {
          terms.push_back({b.budget / static_cast<double>(T), layout.value_row(i, t), b.demand[t]});
        }
        break;
      case ProgramKind::eg_smooth:
        for (std::size_t t = 0; t < T; ++t) terms.push_back({b.budget, layout.value_row(i, t), b.demand[t]});
        break;
    }
  }
  return terms;
}

// ---------------------------------------------------------------------------

ProgramObjective::ProgramObjective(const MarketInstance& inst, const ProgramSpec& spec)
    : dimension_(inst.valuations.size() * inst.num_periods()),
      periods_(inst.num_periods()),
      num_edges_(inst.valuations.size()),
      penalty_(spec.kind == ProgramKind::eg_smooth ? spec.penalty : Penalty::none),
      gamma_(spec.kind == ProgramKind::eg_smooth ? spec.gamma : 0.0),
      eps_(kl_epsilon(inst)) {
  for (auto& t : program_log_terms(inst, spec.kind)) terms_.push_back({t.weight, std::move(t.row), t.offset});
}

bool ProgramObjective::in_domain(std::span<const double> x) const {
  for (const auto& t : terms_) {
    if (!(t.row.eval(x) - t.offset > 0.0)) return false;
  }
  return true;
}

double ProgramObjective::utility_part(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.weight * std::log(t.row.eval(x) - t.offset);
  return v;
}

double ProgramObjective::penalty_part(std::span<const double> x) const {
  double r = 0.0;
  for (std::size_t e = 0; e < num_edges_; ++e) {
    for (std::size_t t = 0; t + 1 < periods_; ++t) {
      r += smoothness_penalty(penalty_, x[e * periods_ + t + 1], x[e * periods_ + t], eps_);
    }
  }
  return r;
}

double ProgramObjective::value(std::span<const double> x) const {
  return utility_part(x) - gamma_ * penalty_part(x);
}

void ProgramObjective::gradient(std::span<const double> x, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  for (const auto& t : terms_) {
    const double s = t.weight / (t.row.eval(x) - t.offset);
    for (std::size_t k = 0; k < t.row.size(); ++k) grad[t.row.index[k]] += s * t.row.coef[k];
  }
  if (gamma_ == 0.0 || penalty_ == Penalty::none) return;
  for (std::size_t e = 0; e < num_edges_; ++e) {
    for (std::size_t t = 0; t + 1 < periods_; ++t) {
      const std::size_t kn = e * periods_ + t + 1, kp = e * periods_ + t;
      double dn = 0.0, dp = 0.0;
      if (penalty_ == Penalty::abs_dev) {
        const double d = x[kn] - x[kp];
        dn = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
        dp = -dn;
      } else {
        const double a = x[kn] + eps_, b = x[kp] + eps_;
        if (kl_branch(a, b) >= kl_branch(b, a)) {
          dn = std::log(a / b) + 1.0;
          dp = -a / b;
        } else {
          dp = std::log(b / a) + 1.0;
          dn = -b / a;
        }
      }
      grad[kn] -= gamma_ * dn;
      grad[kp] -= gamma_ * dp;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

void check_spec(const MarketInstance& inst, const ProgramSpec& spec) {
  if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)) {
    throw Error(ErrorKind::bad_gamma, "gamma: must be a finite nonnegative number, got " + std::to_string(spec.gamma));
  }
  if (spec.gamma > 0.0 && spec.kind != ProgramKind::eg_smooth) {
    throw Error(ErrorKind::bad_gamma, "gamma: only meaningful for eg-smooth");
  }
  if (spec.gamma > 0.0 && spec.penalty == Penalty::none) {
    throw Error(ErrorKind::bad_gamma, "gamma: a positive gamma needs a penalty (absdev or kl)");
  }
  if (spec.kind == ProgramKind::eg || spec.kind == ProgramKind::eg_demand) {
    if (inst.periods != 1) {
      throw Error(ErrorKind::precondition, std::string(program_name(spec.kind)) +
                                               ": needs a single-period market (T = " + std::to_string(inst.periods) +
                                               "); use eg-time-sum or eg-time-geo");
    }
    if (spec.variation_band) throw Error(ErrorKind::precondition, "variation-band: needs a multi-period program");
  }
  if (spec.kind == ProgramKind::eg && inst.has_demands()) {
    throw Error(ErrorKind::precondition, "eg: every demand must be zero; use eg-demand");
  }
  if (spec.variation_band && !(*spec.variation_band > 0.0 && *spec.variation_band < 1.0)) {
    throw Error(ErrorKind::precondition, "variation-band: r must lie in (0, 1)");
  }
}

std::string blocking_list(const AssumptionCheck& check) {
  std::string out;
  for (const auto& b : check.blocking) {
    if (!out.empty()) out += ", ";
    out += b;
  }
  return out;
}

}  // namespace

SolveReport solve_program(const MarketInstance& raw, const ProgramSpec& spec, const engine::Options& options) {
  check_spec(raw, spec);
  const MarketInstance inst = resolve_budgets(raw);
  const std::size_t T = inst.num_periods();
  AllocationLayout layout(inst);
  const bool smooth = spec.kind == ProgramKind::eg_smooth && spec.gamma > 0.0 && spec.penalty != Penalty::none;

  engine::Problem problem = layout.polytope();
  const std::size_t supply_rows = problem.rows.size();

  auto terms = program_log_terms(inst, spec.kind);
  std::vector<engine::AffineGuard> guards;
  for (const auto& t : terms) guards.push_back({t.row, t.offset});
  const auto interior = layout.interior_point(options.seed);

  // Positive-surplus gate, then the optional band on top of it.
  engine::MarginResult margin = engine::max_margin(problem, guards, interior, options);
  if (!(margin.margin > kFeasibilityTol)) {
    const SurplusRule rule = per_period_program(spec.kind) ? SurplusRule::per_period : SurplusRule::aggregate;
    const AssumptionCheck gate = check_assumption_pos(inst, rule, options);
    throw Error(ErrorKind::assumption_violated, "no allocation gives every buyer a positive surplus (margin " +
                                                    std::to_string(margin.margin) + "; blocking: " +
                                                    blocking_list(gate) + ")");
  }
  if (spec.variation_band) {
    layout.add_variation_band(problem, *spec.variation_band);
    margin = engine::max_margin(problem, guards, interior, options);
    if (!(margin.margin > kFeasibilityTol)) {
      throw Error(ErrorKind::infeasible, "variation-band: no allocation within the band keeps every surplus positive");
    }
  }
  std::vector<double> start = margin.start;

  const double eps = kl_epsilon(inst);
  double max_supply = 0.0;
  for (const auto& item : inst.items) {
    for (double s : item.supply_per_period) max_supply = std::max(max_supply, s);
  }
  std::vector<std::size_t> aux;
  if (smooth) {
    const double cap = spec.penalty == Penalty::abs_dev
                           ? 2.0 * max_supply + 1.0
                           : 2.0 * (max_supply + eps) * std::log((max_supply + eps) / eps) + 1.0;
    for (std::size_t e = 0; e < inst.valuations.size(); ++e) {
      for (std::size_t t = 0; t + 1 < T; ++t) {
        const std::size_t kp = layout.var(e, t), kn = layout.var(e, t + 1);
        const std::size_t z = problem.add_var(true);
        aux.push_back(z);
        if (spec.penalty == Penalty::abs_dev) {
          engine::LinearConstraint up, down;
          up.row.add(kn, 1.0);
          up.row.add(kp, -1.0);
          up.row.add(z, -1.0);
          down.row.add(kp, 1.0);
          down.row.add(kn, -1.0);
          down.row.add(z, -1.0);
          problem.rows.push_back(std::move(up));
          problem.rows.push_back(std::move(down));
          start.push_back(std::fabs(start[kn] - start[kp]) + 1.0);
        } else {
          problem.nonlinear.push_back(std::make_shared<engine::RelativeEntropyBound>(kn, kp, z, eps));
          problem.nonlinear.push_back(std::make_shared<engine::RelativeEntropyBound>(kp, kn, z, eps));
          start.push_back(smoothness_penalty(Penalty::kl, start[kn], start[kp], eps) + 1.0);
        }
        engine::LinearConstraint capped;
        capped.row.add(z, 1.0);
        capped.rhs = cap;
        problem.rows.push_back(std::move(capped));
      }
    }
  }

  auto objective = std::make_shared<engine::LogSumObjective>(problem.num_vars);
  for (auto& t : terms) objective->add_term(t.weight, std::move(t.row), t.offset);
  for (std::size_t z : aux) objective->set_linear(z, -spec.gamma);
  problem.objective = objective;

  engine::Options opt = options;
  // entropy epigraphs stop at a looser barrier weight
  if (!problem.nonlinear.empty() && opt.mu_final <= 0.0) opt.mu_final = 1e-2 * opt.tol;
  const engine::SolveResult sol = engine::maximize(problem, start, opt);

  SolveReport rep;
  rep.program = std::string(program_name(spec.kind));
  rep.gamma = spec.kind == ProgramKind::eg_smooth ? spec.gamma : 0.0;
  rep.penalty = spec.kind == ProgramKind::eg_smooth ? spec.penalty : Penalty::none;
  rep.variation_band = spec.variation_band;
  rep.budget_mode = inst.budget_mode;
  rep.periods = inst.periods;
  for (const auto& b : inst.buyers) {
    rep.budgets.push_back(b.budget);
    rep.buyer_ids.push_back(b.id);
    rep.demand_split_uniform = rep.demand_split_uniform || b.demand_split_uniform;
  }
  for (const auto& item : inst.items) rep.item_ids.push_back(item.id);

  const std::span<const double> x(sol.y.data(), layout.num_vars());
  rep.allocation = layout.to_allocation(x);

  PriceSystem prices;
  prices.price.assign(inst.num_items(), std::vector<double>(T, 0.0));
  prices.lambda_period.assign(inst.num_items(), std::vector<double>(T, 0.0));
  prices.lambda_total.assign(inst.num_items(), 0.0);
  const auto& tags = layout.row_tags();
  for (std::size_t r = 0; r < supply_rows; ++r) {
    if (tags[r].period >= 0) {
      prices.lambda_period[tags[r].item][static_cast<std::size_t>(tags[r].period)] = sol.row_duals[r];
    } else {
      prices.lambda_total[tags[r].item] = sol.row_duals[r];
    }
  }
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    for (std::size_t t = 0; t < T; ++t) prices.price[j][t] = prices.lambda_period[j][t] + prices.lambda_total[j];
  }
  rep.prices = std::move(prices);

  rep.aggregation = per_period_program(spec.kind) ? Aggregation::geometric_mean : Aggregation::sum;
  rep.utilities = compute_utilities(inst, rep.allocation, rep.aggregation);

  ProgramSpec eval_spec = spec;
  if (spec.kind == ProgramKind::eg_smooth && spec.penalty == Penalty::none) eval_spec.penalty = Penalty::abs_dev;
  const ProgramObjective po(inst, eval_spec);
  rep.objective_unpenalized = po.utility_part(x);
  rep.penalty_value = spec.kind == ProgramKind::eg_smooth ? po.penalty_part(x) : 0.0;
  rep.objective = rep.objective_unpenalized - rep.gamma * rep.penalty_value;
  rep.total_variation = total_variation(rep.allocation);

  rep.kkt = sol.kkt;
  rep.iterations = sol.iterations;
  rep.converged = sol.converged;
  rep.trace = sol.trace;
  return rep;
}

SolveReport solve_eg(const MarketInstance& inst, const engine::Options& options) {
  return solve_program(inst, {ProgramKind::eg, Penalty::none, 0.0, std::nullopt}, options);
}

SolveReport solve_eg_demand(const MarketInstance& inst, const engine::Options& options) {
  return solve_program(inst, {ProgramKind::eg_demand, Penalty::none, 0.0, std::nullopt}, options);
}

SolveReport solve_eg_time_sum(const MarketInstance& inst, const engine::Options& options) {
  return solve_program(inst, {ProgramKind::eg_time_sum, Penalty::none, 0.0, std::nullopt}, options);
}

SolveReport solve_eg_time_geo_mean(const MarketInstance& inst, const engine::Options& options) {
  return solve_program(inst, {ProgramKind::eg_time_geo_mean, Penalty::none, 0.0, std::nullopt}, options);
}

SolveReport solve_eg_smooth(const MarketInstance& inst, Penalty penalty, double gamma, const engine::Options& options) {
  return solve_program(inst, {ProgramKind::eg_smooth, penalty, gamma, std::nullopt}, options);
}

PriceSystem price_system(const SolveReport& report) {
  if (!report.prices) throw Error(ErrorKind::missing_prices, "report carries no prices");
  if (!report.converged) throw Error(ErrorKind::not_converged, "report did not converge; duals are not prices");
  return *report.prices;
}

}  // namespace fairwork
