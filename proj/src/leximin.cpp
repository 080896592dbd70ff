#include "fairwork/leximin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairwork/error.hpp"
#include "fairwork/layout.hpp"
#include "fairwork/parallel.hpp"

namespace fairwork {

std::string_view leximin_mode_name(LeximinMode mode) {
  switch (mode) {
    case LeximinMode::single: return "single";
    case LeximinMode::time_sum: return "time_sum";
    case LeximinMode::time_indexed: return "time_indexed";
  }
  return "single";
}

LeximinMode parse_leximin_mode(std::string_view text) {
  if (text == "single") return LeximinMode::single;
  if (text == "time_sum" || text == "time-sum") return LeximinMode::time_sum;
  if (text == "time_indexed" || text == "time-indexed") return LeximinMode::time_indexed;
  throw Error(ErrorKind::parse, "mode: unknown value '" + std::string(text) + "' (expected single, time-sum or time-indexed)");
}

std::vector<engine::Entity> leximin_entities(const MarketInstance& inst, LeximinMode mode,
                                             std::vector<std::string>* labels) {
  AllocationLayout layout(inst);
  std::vector<engine::Entity> out;
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    const auto& b = inst.buyers[i];
    if (mode == LeximinMode::time_indexed) {
      for (std::size_t t = 0; t < inst.num_periods(); ++t) {
        out.push_back({b.budget, layout.value_row(i, t), b.demand[t]});
        if (labels) labels->push_back(b.id + "@" + std::to_string(t));
      }
    } else {
      out.push_back({b.budget, layout.total_value_row(i), b.total_demand()});
      if (labels) labels->push_back(b.id);
    }
  }
  return out;
}

namespace {

double relax(double t_star) { return 1e-9 * std::max(1.0, std::fabs(t_star)); }

double log_value(const engine::Entity& e, std::span<const double> y) {
  return e.weight * std::log(e.row.eval(y) - e.offset);
}

}  // namespace

std::vector<std::size_t> freeze_critical(const engine::Problem& polytope, std::span<const engine::Entity> entities,
                                         std::span<const std::size_t> free_set,
                                         std::span<const engine::FrozenBound> frozen, double t_star,
                                         std::span<const double> y, const engine::Options& options,
                                         double tie_tol) {
  if (free_set.size() == 1) return {free_set[0]};

  std::vector<std::size_t> candidates;
  for (std::size_t e : free_set) {
    if (log_value(entities[e], y) <= t_star + tie_tol) candidates.push_back(e);
  }
  const double floor_level = t_star - relax(t_star);
  std::vector<char> critical(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t c) {
    const std::size_t target = candidates[c];
    engine::Problem probe;
    probe.num_vars = polytope.num_vars;
    probe.lower_bounded = polytope.lower_bounded;
    probe.rows = polytope.rows;
    engine::add_frozen_rows(probe, entities, frozen);
    std::vector<engine::FrozenBound> others;
    for (std::size_t e : free_set) {
      if (e != target) others.push_back({e, std::exp(floor_level / entities[e].weight)});
    }
    engine::add_frozen_rows(probe, entities, others);
    auto obj = std::make_shared<engine::LogSumObjective>(probe.num_vars);
    obj->add_term(1.0, entities[target].row, entities[target].offset);
    probe.objective = obj;
    const auto sol = engine::maximize(probe, y, options);
    critical[c] = log_value(entities[target], sol.y) <= t_star + tie_tol;
  });

  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (critical[c]) out.push_back(candidates[c]);
  }
  return out;
}

LeximinResult leximin_solve(const MarketInstance& raw, LeximinMode mode, const engine::Options& options) {
  if (mode == LeximinMode::single && raw.periods != 1) {
    throw Error(ErrorKind::precondition, "leximin single mode needs T = 1 (got " + std::to_string(raw.periods) +
                                             "); use time-sum or time-indexed");
  }
  const MarketInstance inst = resolve_budgets(raw);
  AllocationLayout layout(inst);
  const engine::Problem polytope = layout.polytope();

  LeximinResult out;
  const auto entities = leximin_entities(inst, mode, &out.labels);

  std::vector<engine::AffineGuard> guards;
  for (const auto& e : entities) guards.push_back({e.row, e.offset});
  const auto gate = engine::max_margin(polytope, guards, layout.interior_point(options.seed), options);
  if (!(gate.margin > kFeasibilityTol)) {
    std::string blocking;
    for (std::size_t e = 0; e < entities.size(); ++e) {
      if (guards[e].row.eval(gate.witness) - guards[e].offset <= gate.margin + kFeasibilityTol) {
        blocking += (blocking.empty() ? "" : ", ") + out.labels[e];
      }
    }
    throw Error(ErrorKind::assumption_violated, "no allocation gives every entity a positive surplus (margin " +
                                                    std::to_string(gate.margin) + "; blocking: " + blocking + ")");
  }

  std::vector<std::size_t> free_set(entities.size());
  std::iota(free_set.begin(), free_set.end(), 0);
  std::vector<engine::FrozenBound> frozen;
  std::vector<double> y = gate.start;
  SolveReport& rep = out.report;
  bool converged = true;
  int iterations = 0;

  while (!free_set.empty()) {
    const auto stage = engine::maxmin(polytope, entities, free_set, frozen, y, options);
    converged = converged && stage.solve.converged;
    iterations += stage.solve.iterations;
    rep.kkt.stationarity = std::max(rep.kkt.stationarity, stage.solve.kkt.stationarity);
    rep.kkt.primal_infeasibility = std::max(rep.kkt.primal_infeasibility, stage.solve.kkt.primal_infeasibility);
    rep.kkt.complementarity = std::max(rep.kkt.complementarity, stage.solve.kkt.complementarity);
    if (options.record_trace) rep.trace.insert(rep.trace.end(), stage.solve.trace.begin(), stage.solve.trace.end());

    auto newly = freeze_critical(polytope, entities, free_set, frozen, stage.t_star, stage.y, options);
    if (newly.empty()) newly = stage.tight;
    if (newly.empty()) {
      // Numerical corner: freeze the smallest value so the loop always advances.
      std::size_t arg = free_set[0];
      for (std::size_t e : free_set) {
        if (log_value(entities[e], stage.y) < log_value(entities[arg], stage.y)) arg = e;
      }
      newly = {arg};
    }

    LeximinStage log;
    log.log_optimum = stage.t_star;
    log.optimum = std::exp(stage.t_star);
    const double floor_level = stage.t_star - relax(stage.t_star);
    for (std::size_t e : newly) {
      frozen.push_back({e, std::exp(floor_level / entities[e].weight)});
      log.frozen.push_back(out.labels[e]);
    }
    rep.stages.push_back(std::move(log));
    std::erase_if(free_set, [&](std::size_t e) { return std::find(newly.begin(), newly.end(), e) != newly.end(); });
    y = stage.y;
  }

  rep.program = "leximin";
  rep.budget_mode = inst.budget_mode;
  rep.periods = inst.periods;
  for (const auto& b : inst.buyers) {
    rep.budgets.push_back(b.budget);
    rep.buyer_ids.push_back(b.id);
    rep.demand_split_uniform = rep.demand_split_uniform || b.demand_split_uniform;
  }
  for (const auto& item : inst.items) rep.item_ids.push_back(item.id);
  rep.allocation = layout.to_allocation(y);
  rep.aggregation = mode == LeximinMode::time_indexed ? Aggregation::geometric_mean : Aggregation::sum;
  rep.utilities = compute_utilities(inst, rep.allocation, rep.aggregation);
  rep.total_variation = total_variation(rep.allocation);
  rep.iterations = iterations;
  rep.converged = converged;

  for (const auto& e : entities) out.log_values.push_back(log_value(e, y));
  rep.objective = std::accumulate(out.log_values.begin(), out.log_values.end(), 0.0);
  rep.objective_unpenalized = rep.objective;
  for (double v : out.log_values) out.sorted_r.push_back(std::exp(v));
  std::sort(out.sorted_r.begin(), out.sorted_r.end());
  return out;
}

}  // namespace fairwork
