#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairwork/layout.hpp"
#include "fairwork/market.hpp"
#include "fairwork/programs.hpp"
#include "fairwork/scenario.hpp"

namespace fwtest {

using fairwork::BudgetMode;
using fairwork::MarketInstance;

inline fairwork::Buyer buyer(std::string id, double budget, std::vector<double> demand) {
  fairwork::Buyer b;
  b.id = std::move(id);
  b.budget = budget;
  b.demand = std::move(demand);
  return b;
}

inline fairwork::Item item(std::string id, double total, std::vector<double> per_period) {
  fairwork::Item it;
  it.id = std::move(id);
  it.supply_total = total;
  it.supply_per_period = std::move(per_period);
  return it;
}

// Two buyers, two unit items, v11 = 2, every other value 1, no demands.
inline MarketInstance example1() {
  MarketInstance in;
  in.budget_mode = BudgetMode::unit;
  in.buyers = {buyer("b1", 1, {0}), buyer("b2", 1, {0})};
  in.items = {item("i1", 1, {1}), item("i2", 1, {1})};
  in.valuations = fairwork::ValuationMatrix({{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  return in;
}

// b1 only sees i1, b2 sees both; demands 0.1 and 0.2.
inline MarketInstance example2(BudgetMode mode) {
  MarketInstance in;
  in.budget_mode = mode;
  in.buyers = {buyer("b1", 1, {0.1}), buyer("b2", 1, {0.2})};
  in.items = {item("i1", 1, {1}), item("i2", 1, {1})};
  in.valuations = fairwork::ValuationMatrix({{0, 0, 1}, {1, 0, 1}, {1, 1, 1}});
  return in;
}

// 2 x 2 x 3, all values one, unit per-period supply, overall cap 3.
inline MarketInstance smooth_example() {
  MarketInstance in;
  in.periods = 3;
  in.budget_mode = BudgetMode::unit;
  in.buyers = {buyer("b1", 1, {0, 0, 0}), buyer("b2", 1, {0, 0, 0})};
  in.items = {item("i1", 3, {1, 1, 1}), item("i2", 3, {1, 1, 1})};
  in.valuations = fairwork::ValuationMatrix({{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  return in;
}

// n buyers sharing one unit item, v = 1.
inline MarketInstance shared_item(std::size_t n, double demand = 0.0) {
  MarketInstance in;
  in.budget_mode = BudgetMode::unit;
  std::vector<fairwork::Valuation> edges;
  for (std::size_t i = 0; i < n; ++i) {
    in.buyers.push_back(buyer("b" + std::to_string(i + 1), 1, {demand}));
    edges.push_back({i, 0, 1.0});
  }
  in.items = {item("i1", 1, {1})};
  in.valuations = fairwork::ValuationMatrix(std::move(edges));
  return in;
}

// Random market through the generator, small enough for the equivalence suites.
inline MarketInstance random_market(std::uint64_t seed, int periods, fairwork::ValuationMode valuation,
                                    BudgetMode budgets, std::size_t max_side = 8) {
  std::mt19937_64 rng(seed * 7919 + 17);
  std::uniform_int_distribution<std::size_t> side(2, max_side);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  fairwork::GeneratorConfig cfg;
  cfg.buyers = side(rng);
  cfg.items = side(rng);
  cfg.periods = periods;
  cfg.density = 0.2 + 0.6 * unit(rng);
  cfg.valuation = valuation;
  cfg.trend = static_cast<fairwork::Trend>(rng() % 4);
  cfg.headroom = 1.2 + unit(rng);
  cfg.overall_cap_factor = unit(rng) < 0.5 ? 1.0 : 0.85;
  cfg.lone_edge_buyer = false;
  cfg.zero_demand_buyer = false;
  cfg.budget_mode = budgets;
  cfg.seed = seed;
  return fairwork::generate(cfg);
}

// Every buyer sees every item with value one; random demands, T = 1.
inline MarketInstance complete_binary(std::uint64_t seed, BudgetMode mode) {
  std::mt19937_64 rng(seed + 1000);
  std::uniform_int_distribution<std::size_t> side(2, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = side(rng), m = side(rng);
  MarketInstance in;
  in.budget_mode = mode;
  double need = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = 0.05 + unit(rng);
    need += d;
    in.buyers.push_back(buyer("b" + std::to_string(i + 1), 1, {d}));
  }
  std::vector<double> raw(m);
  double sum = 0.0;
  for (auto& r : raw) sum += (r = 0.2 + unit(rng));
  std::vector<fairwork::Valuation> edges;
  for (std::size_t j = 0; j < m; ++j) {
    const double s = raw[j] / sum * need * (1.2 + unit(rng));
    in.items.push_back(item("i" + std::to_string(j + 1), s, {s}));
    for (std::size_t i = 0; i < n; ++i) edges.push_back({i, j, 1.0});
  }
  in.valuations = fairwork::ValuationMatrix(std::move(edges));
  return in;
}

// Random points in the objective's domain: a solution jittered per
// coordinate plus a little interior mass, so no two periods tie.
inline std::vector<std::vector<double>> domain_points(const MarketInstance& in, const fairwork::ProgramObjective& f,
                                                      const fairwork::Allocation& center, int count,
                                                      std::uint64_t seed) {
  fairwork::AllocationLayout layout(in);
  const auto base = layout.from_allocation(center);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  std::vector<std::vector<double>> out;
  for (int tries = 0; static_cast<int>(out.size()) < count && tries < 50 * count; ++tries) {
    const auto interior = layout.interior_point(rng());
    std::vector<double> y(base.size());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = base[k] * jitter(rng) + 0.05 * interior[k] * jitter(rng);
    if (f.in_domain(y)) out.push_back(std::move(y));
  }
  return out;
}

}  // namespace fwtest
