#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairwork/engine.hpp"
#include "fairwork/market.hpp"
#include "fairwork/report.hpp"

namespace fairwork {

/// single: one entity per buyer, T = 1.
/// time_sum: one entity per buyer, utility summed over periods.
/// time_indexed: one entity per (buyer, period), weight B_i.
enum class LeximinMode { single, time_sum, time_indexed };

std::string_view leximin_mode_name(LeximinMode mode);
LeximinMode parse_leximin_mode(std::string_view text);

struct LeximinResult {
  /// Allocation, utilities and the stage log; prices are absent.
  SolveReport report;
  /// r_e = u_e^{B_e} sorted ascending.
  std::vector<double> sorted_r;
  /// Entity labels in entity order ("id" or "id@t").
  std::vector<std::string> labels;
  /// B_e log u_e per entity.
  std::vector<double> log_values;
};

/// Entities of a mode over an instance with resolved budgets.
std::vector<engine::Entity> leximin_entities(const MarketInstance& inst, LeximinMode mode,
                                             std::vector<std::string>* labels = nullptr);

/// Free entities that cannot rise above t_star while every other free entity
/// stays at t_star and the frozen bounds hold. Each candidate is tested by
/// maximizing its own utility; frozen iff w log(max) <= t_star + tie_tol.
/// `y` is the stage solution and must satisfy every bound strictly.
std::vector<std::size_t> freeze_critical(const engine::Problem& polytope, std::span<const engine::Entity> entities,
                                         std::span<const std::size_t> free_set,
                                         std::span<const engine::FrozenBound> frozen, double t_star,
                                         std::span<const double> y, const engine::Options& options,
                                         double tie_tol = 1e-7);

/// Staged max-min with critical-set freezing. Throws Error(assumption_violated).
LeximinResult leximin_solve(const MarketInstance& inst, LeximinMode mode, const engine::Options& options = {});

}  // namespace fairwork
