#pragma once

// The four Eisenberg-Gale style programs over the supply polytope:
//
//   eg / eg-demand : sum_i B_i log(sum_j v_ij x_ij - d_i)                    (T = 1)
//   eg-time-sum    : sum_i B_i log(sum_j v_ij sum_t x_ij^t - d_i)
//   eg-time-geo    : sum_i B_i (1/T) sum_t log(sum_j v_ij x_ij^t - d_i^t)
//   eg-smooth      : sum_i B_i sum_t log(sum_j v_ij x_ij^t - d_i^t)
//                    - gamma sum_{i,j,t} R(x_ij^{t+1}, x_ij^t)
//
// subject to sum_i x_ij^t <= s_j^t and sum_{i,t} x_ij^t <= s_j.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fairwork/engine.hpp"
#include "fairwork/market.hpp"
#include "fairwork/report.hpp"

namespace fairwork {

enum class ProgramKind { eg, eg_demand, eg_time_sum, eg_time_geo_mean, eg_smooth };

std::string_view program_name(ProgramKind kind);
/// Accepts the CLI names: eg, eg-demand, eg-time-sum, eg-time-geo, eg-smooth.
ProgramKind parse_program(std::string_view text);

struct ProgramSpec {
  ProgramKind kind = ProgramKind::eg_demand;
  Penalty penalty = Penalty::none;
  double gamma = 0.0;
  /// Hard alternative to the penalty: (1 - r) x^t <= x^{t+1} <= (1 + r) x^t.
  std::optional<double> variation_band;
};

/// Smoothing offset for the KL penalty: 1e-6 times the largest per-period supply.
double kl_epsilon(const MarketInstance& inst);

/// R(next, prev) for a penalty kind; eps only applies to KL.
double smoothness_penalty(Penalty penalty, double next, double prev, double eps);

/// The program's objective as a function of the allocation variables, in
/// AllocationLayout order, with the smoothness penalty evaluated directly.
class ProgramObjective {
 public:
  ProgramObjective(const MarketInstance& inst, const ProgramSpec& spec);

  std::size_t dimension() const { return dimension_; }
  bool in_domain(std::span<const double> x) const;
  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> grad) const;
  /// Log-surplus part only.
  double utility_part(std::span<const double> x) const;
  /// sum R(x^{t+1}, x^t), unweighted.
  double penalty_part(std::span<const double> x) const;

 private:
  struct Term {
    double weight;
    engine::SparseRow row;
    double offset;
  };
  std::size_t dimension_ = 0;
  std::size_t periods_ = 1;
  std::size_t num_edges_ = 0;
  std::vector<Term> terms_;
  Penalty penalty_ = Penalty::none;
  double gamma_ = 0.0;
  double eps_ = 0.0;
};

/// Buyers' log terms for a program (weights already include 1/T where printed).
std::vector<engine::LogSumObjective::Term> program_log_terms(const MarketInstance& inst, ProgramKind kind);

/// Solves a program on an instance whose budgets are already resolved.
/// Throws Error(assumption_violated), Error(infeasible) for an empty variation
/// band, Error(bad_gamma), or Error(precondition) for shape mismatches.
SolveReport solve_program(const MarketInstance& inst, const ProgramSpec& spec, const engine::Options& options = {});

SolveReport solve_eg(const MarketInstance& inst, const engine::Options& options = {});
SolveReport solve_eg_demand(const MarketInstance& inst, const engine::Options& options = {});
SolveReport solve_eg_time_sum(const MarketInstance& inst, const engine::Options& options = {});
SolveReport solve_eg_time_geo_mean(const MarketInstance& inst, const engine::Options& options = {});
SolveReport solve_eg_smooth(const MarketInstance& inst, Penalty penalty, double gamma,
                            const engine::Options& options = {});

/// p_j^t = lambda_j^t + lambda_j. Throws Error(not_converged) or
/// Error(missing_prices).
PriceSystem price_system(const SolveReport& report);

}  // namespace fairwork
