#include "fairwork/assumption.hpp"

#include "fairwork/layout.hpp"

namespace fairwork {

AssumptionCheck check_assumption_pos(const MarketInstance& inst, SurplusRule rule, const engine::Options& options) {
  AllocationLayout layout(inst);
  engine::Problem polytope = layout.polytope();

  std::vector<engine::AffineGuard> guards;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    const auto& b = inst.buyers[i];
    if (rule == SurplusRule::aggregate) {
      guards.push_back({layout.total_value_row(i), b.total_demand()});
      labels.push_back(b.id);
    } else {
      for (std::size_t t = 0; t < inst.num_periods(); ++t) {
        guards.push_back({layout.value_row(i, t), b.demand[t]});
        labels.push_back(b.id + "@" + std::to_string(t));
      }
    }
  }

  AssumptionCheck out;
  if (guards.empty()) {
    out.feasible_margin = 0.0;
    out.witness = Allocation(0, inst.num_items(), inst.num_periods());
    return out;
  }
  const auto result = engine::max_margin(polytope, guards, layout.interior_point(options.seed), options);
  out.feasible_margin = result.margin;
  out.witness = layout.to_allocation(result.witness);
  if (!out.holds()) {
    for (std::size_t g = 0; g < guards.size(); ++g) {
      const double v = guards[g].row.eval(result.witness) - guards[g].offset;
      if (v <= result.margin + kFeasibilityTol) out.blocking.push_back(labels[g]);
    }
  }
  return out;
}

}  // namespace fairwork
