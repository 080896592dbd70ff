#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fairwork {

/// Absolute tolerance on supply constraints and on "strictly positive" utility.
inline constexpr double kFeasibilityTol = 1e-7;

enum class BudgetMode { explicit_budgets, unit, equal_to_demand };

std::string_view budget_mode_name(BudgetMode mode);
/// Accepts "explicit", "unit", "equal-to-demand" (and "demand" as a CLI alias).
BudgetMode parse_budget_mode(std::string_view text);

struct Buyer {
  std::string id;
  double budget = 0.0;
  /// Per-period hard demand d_i^t.
  std::vector<double> demand;
  /// Set when the input gave only a total demand for a multi-period market;
  /// `demand` then holds that total split uniformly over the periods.
  bool demand_split_uniform = false;

  double total_demand() const;
};

struct Item {
  std::string id;
  double supply_total = 0.0;
  std::vector<double> supply_per_period;

  /// min(s_j, sum_t s_j^t): the most that can ever be handed out.
  double usable_supply() const;
  /// True when the overall cap can bind, i.e. s_j < sum_t s_j^t.
  bool overall_cap_binds() const;
};

struct Valuation {
  std::size_t buyer = 0;
  std::size_t item = 0;
  double value = 0.0;
};

/// Sparse buyer-by-item valuations. Absent pairs are worth zero.
class ValuationMatrix {
 public:
  ValuationMatrix() = default;
  /// Edges are kept sorted by (buyer, item). Duplicates are preserved so that
  /// validation can report them.
  explicit ValuationMatrix(std::vector<Valuation> edges);

  const std::vector<Valuation>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  double value(std::size_t buyer, std::size_t item) const;

  /// Indices into edges() for one buyer / one item. Empty for unknown indices.
  const std::vector<std::size_t>& edges_of_buyer(std::size_t buyer) const;
  const std::vector<std::size_t>& edges_of_item(std::size_t item) const;

  /// All stored values equal one.
  bool is_binary() const;
  /// At most two distinct stored values.
  bool is_bivalued() const;

 private:
  std::vector<Valuation> edges_;
  std::vector<std::vector<std::size_t>> by_buyer_;
  std::vector<std::vector<std::size_t>> by_item_;
};

struct MarketInstance {
  int periods = 1;
  BudgetMode budget_mode = BudgetMode::explicit_budgets;
  std::vector<Buyer> buyers;
  std::vector<Item> items;
  ValuationMatrix valuations;

  std::size_t num_buyers() const { return buyers.size(); }
  std::size_t num_items() const { return items.size(); }
  std::size_t num_periods() const { return static_cast<std::size_t>(periods); }
  bool has_demands() const;
  bool unit_budgets() const;
  /// Every item has at least one compatible buyer.
  bool every_item_reachable() const;
};

struct Violation {
  std::string rule;    // e.g. "DuplicateId", "BadLength"
  std::string entity;  // offending id or "instance"
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Empty iff all structural invariants hold. Never throws.
std::vector<Violation> validate_instance(const MarketInstance& inst);

/// Applies the budget mode and returns the frozen instance. Throws
/// Error(equal_to_demand_with_zero_demand) when B_i = d_i would be zero.
MarketInstance resolve_budgets(const MarketInstance& inst);

/// Single-period market with s_j = min(s_j, sum_t s_j^t) and d_i = sum_t d_i^t.
MarketInstance collapse_periods(const MarketInstance& inst);

/// Dense x[i][j][t].
class Allocation {
 public:
  Allocation() = default;
  Allocation(std::size_t buyers, std::size_t items, std::size_t periods)
      : n_(buyers), m_(items), t_(periods), data_(buyers * items * periods, 0.0) {}

  std::size_t num_buyers() const { return n_; }
  std::size_t num_items() const { return m_; }
  std::size_t num_periods() const { return t_; }

  double& at(std::size_t i, std::size_t j, std::size_t t) { return data_[(i * m_ + j) * t_ + t]; }
  double at(std::size_t i, std::size_t j, std::size_t t) const { return data_[(i * m_ + j) * t_ + t]; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Allocation&) const = default;

 private:
  std::size_t n_ = 0, m_ = 0, t_ = 0;
  std::vector<double> data_;
};

/// Supply layers, nonnegativity and zero mass on incompatible pairs.
std::vector<Violation> check_feasibility(const MarketInstance& inst, const Allocation& x,
                                         double tol = kFeasibilityTol);

enum class Aggregation { sum, geometric_mean };

struct UtilityProfile {
  /// u_i^t = sum_j v_ij x_ij^t - d_i^t
  std::vector<std::vector<double>> per_period;
  /// sum over t, or the geometric mean over t (NaN if some u_i^t <= 0).
  std::vector<double> aggregate;
};

UtilityProfile compute_utilities(const MarketInstance& inst, const Allocation& x, Aggregation rule);

}  // namespace fairwork
