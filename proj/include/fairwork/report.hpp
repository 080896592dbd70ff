#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairwork/engine.hpp"
#include "fairwork/market.hpp"

namespace fairwork {

enum class Penalty { none, abs_dev, kl };

std::string_view penalty_name(Penalty p);
/// "none", "absdev", "kl"
Penalty parse_penalty(std::string_view text);

/// Item prices p_j^t = lambda_j^t + lambda_j.
struct PriceSystem {
  std::vector<std::vector<double>> price;          // [j][t]
  std::vector<std::vector<double>> lambda_period;  // [j][t]
  std::vector<double> lambda_total;                // [j]
};

struct LeximinStage {
  /// Stage optimum on the r = u^B scale.
  double optimum = 0.0;
  /// Same optimum in log scale, min of B log u.
  double log_optimum = 0.0;
  /// Entity labels frozen at this stage.
  std::vector<std::string> frozen;
};

/// Everything a solve produces. Leximin results reuse it with no prices and
/// a non-empty stage log.
struct SolveReport {
  std::string program;
  double gamma = 0.0;
  Penalty penalty = Penalty::none;
  std::optional<double> variation_band;

  BudgetMode budget_mode = BudgetMode::explicit_budgets;
  std::vector<double> budgets;
  std::vector<std::string> buyer_ids;
  std::vector<std::string> item_ids;
  int periods = 1;
  bool demand_split_uniform = false;

  Allocation allocation;
  std::optional<PriceSystem> prices;
  Aggregation aggregation = Aggregation::sum;
  UtilityProfile utilities;

  double objective = 0.0;
  double objective_unpenalized = 0.0;
  double total_variation = 0.0;
  double penalty_value = 0.0;

  engine::KktResiduals kkt;
  int iterations = 0;
  bool converged = false;

  std::vector<LeximinStage> stages;
  std::vector<engine::TraceEntry> trace;
};

/// sum over edges and consecutive periods of |x^{t+1} - x^t|.
double total_variation(const Allocation& x);

}  // namespace fairwork
