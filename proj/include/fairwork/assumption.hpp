#pragma once

#include <string>
#include <vector>

#include "fairwork/engine.hpp"
#include "fairwork/market.hpp"

namespace fairwork {

/// Which surpluses must be positive: one aggregate per buyer
/// (sum_j v_ij sum_t x_ij^t - d_i), or every per-period u_i^t.
enum class SurplusRule { aggregate, per_period };

struct AssumptionCheck {
  /// max over feasible x of the smallest surplus.
  double feasible_margin = 0.0;
  Allocation witness;
  /// Buyers (or "buyer@t" labels) whose surplus sits at the margin when it is
  /// not positive.
  std::vector<std::string> blocking;

  bool holds() const { return feasible_margin > kFeasibilityTol; }
};

/// Positive-surplus check solved as a max-min linear program. Never throws
/// for infeasibility; a non-positive margin is reported instead.
AssumptionCheck check_assumption_pos(const MarketInstance& inst, SurplusRule rule,
                                     const engine::Options& options = {});

}  // namespace fairwork
