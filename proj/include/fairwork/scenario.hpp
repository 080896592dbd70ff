#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fairwork/engine.hpp"
#include "fairwork/market.hpp"
#include "fairwork/report.hpp"

namespace fairwork {

enum class ValuationMode { binary, bivalued, general };
enum class Trend { flat, upward, downward, mixed };

std::string_view valuation_mode_name(ValuationMode m);
ValuationMode parse_valuation_mode(std::string_view text);
std::string_view trend_name(Trend t);
Trend parse_trend(std::string_view text);

struct GeneratorConfig {
  std::size_t buyers = 10;
  std::size_t items = 4;
  int periods = 4;
  /// Probability of each extra compatibility edge beyond the one that
  /// guarantees every buyer and item is connected.
  double density = 0.5;
  ValuationMode valuation = ValuationMode::binary;
  double alpha = 2.0;  // bivalued high value
  double beta = 1.0;   // bivalued low value
  double demand_scale = 1.0;
  Trend trend = Trend::flat;
  /// Per-period supply is headroom times what every buyer needs at its
  /// peak period, spread over its items.
  double headroom = 1.3;
  /// s_j = factor * sum_t s_j^t; below one makes the overall cap bind.
  double overall_cap_factor = 1.0;
  /// With at least 10 buyers: the last buyer only sees item 0, which no one
  /// else sees, and the second-to-last buyer has zero demand.
  bool lone_edge_buyer = true;
  bool zero_demand_buyer = true;
  BudgetMode budget_mode = BudgetMode::unit;
  std::uint64_t seed = 0;
};

/// Deterministic in the config. Throws Error(unsatisfiable_config).
MarketInstance generate(const GeneratorConfig& config);

/// realized[k][i][t]
struct RealizationBatch {
  std::vector<std::vector<std::vector<double>>> demand;
  std::size_t size() const { return demand.size(); }
};

struct NoiseModel {
  /// Lognormal multiplicative noise exp(sigma Z) on every d_i^t.
  double sigma = 0.2;
  /// Chance per realization that one random (buyer, period) is multiplied.
  double spike_probability = 0.05;
  double spike_factor = 2.0;
};

RealizationBatch sample_realizations(const MarketInstance& inst, std::size_t count, const NoiseModel& noise,
                                     std::uint64_t seed);

struct ShortfallRow {
  std::size_t realization = 0;
  std::size_t buyer = 0;
  double shortfall = 0.0;
  bool covered = false;
};

struct RobustnessMetrics {
  /// Fraction of (realization, buyer) pairs with no shortfall.
  double coverage = 0.0;
  double mean_shortfall = 0.0;
  double p95_shortfall = 0.0;
  /// sum_j (min(s_j, sum_t s_j^t) - allocated_j), never negative.
  double idle_capacity = 0.0;
  std::vector<ShortfallRow> rows;
};

/// shortfall_ki = max(0, sum_t realized_kit - sum_{j,t} v_ij x_ijt).
/// Throws Error(shape_mismatch).
RobustnessMetrics evaluate_robustness(const MarketInstance& inst, const Allocation& x, const RealizationBatch& batch);

struct SweepRow {
  double gamma = 0.0;
  /// Unpenalized part of the objective.
  double objective = 0.0;
  double total_variation = 0.0;
  double penalty_value = 0.0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

/// One eg-smooth solve per gamma, in input order. A failing solve yields a
/// row with failed = true and NaN values. Throws Error(bad_gamma) for a
/// negative or unsorted list.
std::vector<SweepRow> sweep_gamma(const MarketInstance& inst, Penalty penalty, const std::vector<double>& gammas,
                                  const engine::Options& options = {});

}  // namespace fairwork
