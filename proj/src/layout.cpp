#include "fairwork/layout.hpp"

#include <algorithm>
#include <random>

namespace fairwork {

AllocationLayout::AllocationLayout(const MarketInstance& inst) : inst_(&inst), periods_(inst.num_periods()) {
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    for (std::size_t t = 0; t < periods_; ++t) tags_.push_back({j, static_cast<int>(t)});
  }
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    if (inst.items[j].overall_cap_binds()) tags_.push_back({j, -1});
  }
}

engine::Problem AllocationLayout::polytope() const {
  engine::Problem p;
  for (std::size_t k = 0; k < num_vars(); ++k) p.add_var(true);
  for (const auto& tag : tags_) {
    const auto& item = inst_->items[tag.item];
    engine::LinearConstraint c;
    for (std::size_t e : inst_->valuations.edges_of_item(tag.item)) {
      if (tag.period >= 0) {
        c.row.add(var(e, static_cast<std::size_t>(tag.period)), 1.0);
      } else {
        for (std::size_t t = 0; t < periods_; ++t) c.row.add(var(e, t), 1.0);
      }
    }
    c.rhs = tag.period >= 0 ? item.supply_per_period[static_cast<std::size_t>(tag.period)] : item.supply_total;
    p.rows.push_back(std::move(c));
  }
  return p;
}

void AllocationLayout::add_variation_band(engine::Problem& problem, double band) const {
  for (std::size_t e = 0; e < inst_->valuations.size(); ++e) {
    for (std::size_t t = 0; t + 1 < periods_; ++t) {
      engine::LinearConstraint lower;  // (1 - band) x^t - x^{t+1} <= 0
      lower.row.add(var(e, t), 1.0 - band);
      lower.row.add(var(e, t + 1), -1.0);
      problem.rows.push_back(std::move(lower));
      engine::LinearConstraint upper;  // x^{t+1} - (1 + band) x^t <= 0
      upper.row.add(var(e, t + 1), 1.0);
      upper.row.add(var(e, t), -(1.0 + band));
      problem.rows.push_back(std::move(upper));
    }
  }
}

std::vector<double> AllocationLayout::interior_point(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.5, 1.0);
  std::vector<double> y(num_vars(), 0.0);
  const auto& edges = inst_->valuations.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& item = inst_->items[edges[e].item];
    const double share = 1.0 / static_cast<double>(inst_->valuations.edges_of_item(edges[e].item).size() + 1);
    double base = item.supply_total / static_cast<double>(periods_);
    for (double s : item.supply_per_period) base = std::min(base, s);
    const double w = weight(rng);
    for (std::size_t t = 0; t < periods_; ++t) y[var(e, t)] = w * share * base;
  }
  return y;
}

engine::SparseRow AllocationLayout::value_row(std::size_t buyer, std::size_t t) const {
  engine::SparseRow row;
  for (std::size_t e : inst_->valuations.edges_of_buyer(buyer)) row.add(var(e, t), inst_->valuations.edges()[e].value);
  return row;
}

engine::SparseRow AllocationLayout::total_value_row(std::size_t buyer) const {
  engine::SparseRow row;
  for (std::size_t e : inst_->valuations.edges_of_buyer(buyer)) {
    for (std::size_t t = 0; t < periods_; ++t) row.add(var(e, t), inst_->valuations.edges()[e].value);
  }
  return row;
}

Allocation AllocationLayout::to_allocation(std::span<const double> y) const {
  Allocation x(inst_->num_buyers(), inst_->num_items(), periods_);
  const auto& edges = inst_->valuations.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (std::size_t t = 0; t < periods_; ++t) x.at(edges[e].buyer, edges[e].item, t) = y[var(e, t)];
  }
  return x;
}

std::vector<double> AllocationLayout::from_allocation(const Allocation& x) const {
  std::vector<double> y(num_vars(), 0.0);
  const auto& edges = inst_->valuations.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (std::size_t t = 0; t < periods_; ++t) y[var(e, t)] = x.at(edges[e].buyer, edges[e].item, t);
  }
  return y;
}

}  // namespace fairwork
