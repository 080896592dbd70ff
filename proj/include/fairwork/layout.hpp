#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairwork/engine.hpp"
#include "fairwork/market.hpp"

namespace fairwork {

/// Maps the compatible (buyer, item) edges and periods onto solver variables
/// and builds the supply polytope shared by every program.
class AllocationLayout {
 public:
  /// Supply row bookkeeping: period >= 0 is a per-period row, -1 the overall row.
  struct RowTag {
    std::size_t item = 0;
    int period = 0;
  };

  explicit AllocationLayout(const MarketInstance& inst);

  std::size_t num_vars() const { return inst_->valuations.size() * periods_; }
  std::size_t var(std::size_t edge, std::size_t t) const { return edge * periods_ + t; }
  std::size_t periods() const { return periods_; }

  /// Per-period supply rows for every (j, t), then overall rows for the items
  /// whose overall cap can bind (s_j < sum_t s_j^t). Non-binding overall caps
  /// are implied by the per-period rows and carry a zero dual.
  engine::Problem polytope() const;
  const std::vector<RowTag>& row_tags() const { return tags_; }

  /// x^{t+1} >= (1 - band) x^t and x^{t+1} <= (1 + band) x^t for every edge.
  void add_variation_band(engine::Problem& problem, double band) const;

  /// Strictly interior point, constant over periods, edge weights drawn from seed.
  std::vector<double> interior_point(std::uint64_t seed) const;

  /// sum_j v_ij x_ij^t for one period.
  engine::SparseRow value_row(std::size_t buyer, std::size_t t) const;
  /// sum_j v_ij sum_t x_ij^t
  engine::SparseRow total_value_row(std::size_t buyer) const;

  Allocation to_allocation(std::span<const double> y) const;
  std::vector<double> from_allocation(const Allocation& x) const;

 private:
  const MarketInstance* inst_;
  std::size_t periods_;
  std::vector<RowTag> tags_;
};

}  // namespace fairwork
