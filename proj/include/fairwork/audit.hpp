#pragma once

#include <string>
#include <vector>

#include "fairwork/market.hpp"
#include "fairwork/report.hpp"

namespace fairwork {

inline constexpr double kAuditTol = 1e-5;
/// x above this counts as "on the support".
inline constexpr double kSupportTol = 1e-7;

/// One failing location. Unused coordinates are -1: (i, j, t) for
/// allocation entries, (i, -1, -1) for per-buyer identities, (i, k, -1) for
/// envy pairs, (-1, j, t) / (-1, j, -1) for supply rows.
struct Witness {
  int i = -1;
  int j = -1;
  int t = -1;
  double residual = 0.0;

  bool operator==(const Witness&) const = default;
};

struct CheckRecord {
  std::string check;
  bool applicable = true;
  /// Meaningless when not applicable.
  bool passed = true;
  double max_residual = 0.0;
  std::vector<Witness> witnesses;
  /// Why a check is not applicable.
  std::string note;
};

/// Report and instance describe the same market (ids, periods, budgets).
/// Throws Error(instance_mismatch).
void require_same_market(const MarketInstance& inst, const SolveReport& report);

/// The following throw Error(missing_prices) when the report has no prices,
/// and Error(instance_mismatch) when it belongs to another market.
CheckRecord audit_bang_per_buck(const MarketInstance& inst, const SolveReport& report, double tol = kAuditTol);
CheckRecord audit_budget_identity(const MarketInstance& inst, const SolveReport& report, double tol = kAuditTol);
CheckRecord audit_price_complementarity(const MarketInstance& inst, const SolveReport& report, double tol = kAuditTol);

CheckRecord audit_ceei_properties(const MarketInstance& inst, const SolveReport& report, double tol = kAuditTol);
CheckRecord audit_claim_totals(const MarketInstance& inst, const SolveReport& report, double tol = kAuditTol);
/// Supply layers, nonnegativity, incompatible mass.
CheckRecord audit_feasibility(const MarketInstance& inst, const SolveReport& report);
/// Stored utilities match a recomputation from the allocation (1e-9 relative).
CheckRecord audit_utilities(const MarketInstance& inst, const SolveReport& report);

/// Every check; the ones that cannot run are returned as not applicable.
std::vector<CheckRecord> run_all_audits(const MarketInstance& inst, const SolveReport& report,
                                        double tol = kAuditTol);

/// True when no applicable check failed.
bool audits_pass(const std::vector<CheckRecord>& records);

struct Comparison {
  bool equivalent = false;
  double max_profile_gap = 0.0;
  /// "aggregate" or "per_period".
  std::string profile;
};

/// Sorted utility profiles compared entrywise; equivalent iff gap <= tol.
/// Per-period profiles are used when either side aggregates by geometric
/// mean over several periods. Throws Error(instance_mismatch).
Comparison compare_solutions(const SolveReport& a, const SolveReport& b, double tol = 1e-4);

}  // namespace fairwork
