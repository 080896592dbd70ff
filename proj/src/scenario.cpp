#include "fairwork/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fairwork/error.hpp"
#include "fairwork/parallel.hpp"
#include "fairwork/programs.hpp"

namespace fairwork {

std::string_view valuation_mode_name(ValuationMode m) {
  switch (m) {
    case ValuationMode::binary: return "binary";
    case ValuationMode::bivalued: return "bivalued";
    case ValuationMode::general: return "general";
  }
  return "binary";
}

ValuationMode parse_valuation_mode(std::string_view text) {
  if (text == "binary") return ValuationMode::binary;
  if (text == "bivalued") return ValuationMode::bivalued;
  if (text == "general") return ValuationMode::general;
  throw Error(ErrorKind::parse, "valuations: unknown value '" + std::string(text) + "'");
}

std::string_view trend_name(Trend t) {
  switch (t) {
    case Trend::flat: return "flat";
    case Trend::upward: return "upward";
    case Trend::downward: return "downward";
    case Trend::mixed: return "mixed";
  }
  return "flat";
}

Trend parse_trend(std::string_view text) {
  if (text == "flat") return Trend::flat;
  if (text == "upward") return Trend::upward;
  if (text == "downward") return Trend::downward;
  if (text == "mixed") return Trend::mixed;
  throw Error(ErrorKind::parse, "trend: unknown value '" + std::string(text) + "'");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::unsatisfiable_config, what);
}

double trend_factor(Trend trend, std::size_t t, std::size_t T) {
  const double s = T > 1 ? static_cast<double>(t) / static_cast<double>(T - 1) : 0.0;
  switch (trend) {
    case Trend::upward: return 0.7 + 0.6 * s;
    case Trend::downward: return 1.3 - 0.6 * s;
    default: return 1.0;
  }
}

}  // namespace

MarketInstance generate(const GeneratorConfig& cfg) {
  require(cfg.buyers >= 1, "buyers: need at least one");
  require(cfg.items >= 1, "items: need at least one");
  require(cfg.periods >= 1, "periods: need at least one");
  require(cfg.density >= 0.0 && cfg.density <= 1.0, "density: must lie in [0, 1]");
  require(cfg.headroom > 0.0, "headroom: must be positive");
  require(cfg.demand_scale > 0.0, "demand-scale: must be positive");
  require(cfg.overall_cap_factor > 0.0, "overall-cap: must be positive");
  if (cfg.valuation == ValuationMode::bivalued) {
    require(cfg.alpha > cfg.beta && cfg.beta > 0.0, "bivalued: need alpha > beta > 0");
  }
  const std::size_t n = cfg.buyers, m = cfg.items, T = static_cast<std::size_t>(cfg.periods);
  const bool lone = cfg.lone_edge_buyer && n >= 10;
  const bool zero = cfg.zero_demand_buyer && n >= 10;
  require(!lone || m >= 2, "items: a lone-edge buyer needs at least two items");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  MarketInstance inst;
  inst.periods = cfg.periods;
  inst.budget_mode = cfg.budget_mode;

  // Compatibility graph.
  std::vector<std::vector<char>> adj(n, std::vector<char>(m, 0));
  const std::size_t first_shared = lone ? 1 : 0;
  const std::size_t shared_buyers = lone ? n - 1 : n;
  if (lone) adj[n - 1][0] = 1;
  for (std::size_t i = 0; i < shared_buyers; ++i) {
    const std::size_t pick = first_shared + static_cast<std::size_t>(unit(rng) * static_cast<double>(m - first_shared));
    adj[i][std::min(pick, m - 1)] = 1;
    for (std::size_t j = first_shared; j < m; ++j) {
      if (unit(rng) < cfg.density) adj[i][j] = 1;
    }
  }
  for (std::size_t j = first_shared; j < m; ++j) {
    bool seen = false;
    for (std::size_t i = 0; i < shared_buyers; ++i) seen = seen || adj[i][j];
    if (!seen) {
      const std::size_t i = std::min(shared_buyers - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(shared_buyers)));
      adj[i][j] = 1;
    }
  }

  std::vector<Valuation> edges;
  std::vector<std::vector<double>> value(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!adj[i][j]) continue;
      double v = 1.0;
      if (cfg.valuation == ValuationMode::bivalued) v = unit(rng) < 0.5 ? cfg.alpha : cfg.beta;
      if (cfg.valuation == ValuationMode::general) v = 0.5 + 1.5 * unit(rng);
      value[i][j] = v;
      edges.push_back({i, j, v});
    }
  }
  inst.valuations = ValuationMatrix(std::move(edges));

  // Demands.
  std::vector<double> peak(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Buyer b;
    char name[32];
    std::snprintf(name, sizeof name, "w%02zu", i + 1);
    b.id = name;
    const double base = cfg.demand_scale * (0.5 + unit(rng));
    Trend trend = cfg.trend;
    if (trend == Trend::mixed) {
      const double r = unit(rng);
      trend = r < 1.0 / 3.0 ? Trend::flat : (r < 2.0 / 3.0 ? Trend::upward : Trend::downward);
    }
    for (std::size_t t = 0; t < T; ++t) {
      const double jitter = 0.95 + 0.1 * unit(rng);
      b.demand.push_back(base * trend_factor(trend, t, T) * jitter);
    }
    if (zero && i == n - 2) std::fill(b.demand.begin(), b.demand.end(), 0.0);
    peak[i] = *std::max_element(b.demand.begin(), b.demand.end());
    if (peak[i] == 0.0) peak[i] = cfg.demand_scale;
    b.budget = cfg.budget_mode == BudgetMode::explicit_budgets ? 0.5 + unit(rng) : 1.0;
    inst.buyers.push_back(std::move(b));
  }

  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) degree[i] += adj[i][j] ? 1 : 0;
  }
  for (std::size_t j = 0; j < m; ++j) {
    double need = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (adj[i][j]) need += peak[i] / (static_cast<double>(degree[i]) * value[i][j]);
    }
    Item item;
    char name[32];
    std::snprintf(name, sizeof name, "p%02zu", j + 1);
    item.id = name;
    item.supply_per_period.assign(T, cfg.headroom * need);
    item.supply_total = T == 1 ? item.supply_per_period[0]
                               : cfg.overall_cap_factor * cfg.headroom * need * static_cast<double>(T);
    inst.items.push_back(std::move(item));
  }
  return inst;
}

RealizationBatch sample_realizations(const MarketInstance& inst, std::size_t count, const NoiseModel& noise,
                                     std::uint64_t seed) {
  if (!(noise.sigma >= 0.0) || !(noise.spike_probability >= 0.0 && noise.spike_probability <= 1.0) ||
      !(noise.spike_factor >= 0.0)) {
    throw Error(ErrorKind::precondition, "noise: sigma >= 0, spike probability in [0, 1], spike factor >= 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = inst.num_buyers(), T = inst.num_periods();
  RealizationBatch batch;
  batch.demand.resize(count);
  for (auto& real : batch.demand) {
    real.assign(n, std::vector<double>(T, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < T; ++t) real[i][t] = inst.buyers[i].demand[t] * std::exp(noise.sigma * z(rng));
    }
    if (n > 0 && unit(rng) < noise.spike_probability) {
      const std::size_t i = std::min(n - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(n)));
      const std::size_t t = std::min(T - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(T)));
      real[i][t] *= noise.spike_factor;
    }
  }
  return batch;
}

RobustnessMetrics evaluate_robustness(const MarketInstance& inst, const Allocation& x, const RealizationBatch& batch) {
  const std::size_t n = inst.num_buyers(), m = inst.num_items(), T = inst.num_periods();
  if (x.num_buyers() != n || x.num_items() != m || x.num_periods() != T) {
    throw Error(ErrorKind::shape_mismatch, "allocation: shape does not match the instance");
  }
  for (const auto& real : batch.demand) {
    if (real.size() != n) throw Error(ErrorKind::shape_mismatch, "realizations: wrong buyer count");
    for (const auto& row : real) {
      if (row.size() != T) throw Error(ErrorKind::shape_mismatch, "realizations: wrong period count");
    }
  }

  std::vector<double> served(n, 0.0);
  for (const auto& e : inst.valuations.edges()) {
    for (std::size_t t = 0; t < T; ++t) served[e.buyer] += e.value * x.at(e.buyer, e.item, t);
  }

  RobustnessMetrics out;
  std::vector<double> all;
  std::size_t covered = 0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double need = 0.0;
      for (double d : batch.demand[k][i]) need += d;
      const double s = std::max(0.0, need - served[i]);
      const bool ok = s <= kFeasibilityTol;
      covered += ok ? 1 : 0;
      out.rows.push_back({k, i, s, ok});
      all.push_back(s);
    }
  }
  if (!all.empty()) {
    out.coverage = static_cast<double>(covered) / static_cast<double>(all.size());
    double sum = 0.0;
    for (double s : all) sum += s;
    out.mean_shortfall = sum / static_cast<double>(all.size());
    std::sort(all.begin(), all.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(all.size())));
    out.p95_shortfall = all[std::max<std::size_t>(rank, 1) - 1];
  }
  for (std::size_t j = 0; j < m; ++j) {
    double used = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < T; ++t) used += x.at(i, j, t);
    }
    out.idle_capacity += std::max(0.0, inst.items[j].usable_supply() - used);
  }
  return out;
}

std::vector<SweepRow> sweep_gamma(const MarketInstance& inst, Penalty penalty, const std::vector<double>& gammas,
                                  const engine::Options& options) {
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    if (!(gammas[k] >= 0.0) || !std::isfinite(gammas[k])) {
      throw Error(ErrorKind::bad_gamma, "gammas: every value must be finite and nonnegative");
    }
    if (k > 0 && gammas[k] < gammas[k - 1]) throw Error(ErrorKind::bad_gamma, "gammas: must be sorted ascending");
  }
  if (penalty == Penalty::none) throw Error(ErrorKind::bad_gamma, "penalty: a sweep needs absdev or kl");
  std::vector<SweepRow> rows(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t k) {
    SweepRow& row = rows[k];
    row.gamma = gammas[k];
    try {
      const SolveReport rep = solve_program(inst, {ProgramKind::eg_smooth, penalty, gammas[k], std::nullopt}, options);
      row.objective = rep.objective_unpenalized;
      row.total_variation = rep.total_variation;
      row.penalty_value = rep.penalty_value;
      row.converged = rep.converged;
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.failed = true;
      row.error = e.what();
      row.objective = row.total_variation = row.penalty_value = nan;
    }
  });
  return rows;
}

}  // namespace fairwork
