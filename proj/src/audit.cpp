#include "fairwork/audit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairwork/error.hpp"

namespace fairwork {

namespace {

enum class Form { aggregate, geo_mean, per_period_sum, none };

Form price_form(const SolveReport& r) {
  if (r.variation_band) return Form::none;
  if (r.program == "eg" || r.program == "eg-demand" || r.program == "eg-time-sum") return Form::aggregate;
  if (r.program == "eg-time-geo") return Form::geo_mean;
  if (r.program == "eg-smooth" && r.gamma == 0.0) return Form::per_period_sum;
  return Form::none;
}

std::string form_note(const SolveReport& r) {
  if (r.variation_band) return "variation band adds duals outside the price system";
  if (r.program == "eg-smooth") return "smoothness penalty is active (gamma > 0)";
  return "no price identity for program " + r.program;
}

const PriceSystem& prices_of(const SolveReport& r) {
  if (!r.prices) throw Error(ErrorKind::missing_prices, "report for '" + r.program + "' carries no prices");
  return *r.prices;
}

void record(CheckRecord& c, double residual, double tol, Witness w) {
  c.max_residual = std::max(c.max_residual, residual);
  if (residual > tol) {
    c.passed = false;
    w.residual = residual;
    c.witnesses.push_back(w);
  }
}

CheckRecord not_applicable(std::string name, std::string note) {
  CheckRecord c;
  c.check = std::move(name);
  c.applicable = false;
  c.passed = false;
  c.note = std::move(note);
  return c;
}

int as_int(std::size_t k) { return static_cast<int>(k); }

/// u_i^t recomputed from the allocation.
std::vector<std::vector<double>> surpluses(const MarketInstance& inst, const SolveReport& r) {
  return compute_utilities(inst, r.allocation, Aggregation::sum).per_period;
}

double budget_of(const SolveReport& r, std::size_t i) { return r.budgets[i]; }

}  // namespace

void require_same_market(const MarketInstance& inst, const SolveReport& r) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::instance_mismatch, "report does not match instance: " + what); };
  if (r.periods != inst.periods) fail("periods");
  if (r.buyer_ids.size() != inst.num_buyers() || r.budgets.size() != inst.num_buyers()) fail("buyer count");
  if (r.item_ids.size() != inst.num_items()) fail("item count");
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    if (r.buyer_ids[i] != inst.buyers[i].id) fail("buyer id '" + r.buyer_ids[i] + "'");
  }
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    if (r.item_ids[j] != inst.items[j].id) fail("item id '" + r.item_ids[j] + "'");
  }
  if (r.allocation.num_buyers() != inst.num_buyers() || r.allocation.num_items() != inst.num_items() ||
      r.allocation.num_periods() != inst.num_periods()) {
    fail("allocation shape");
  }
  if (r.prices) {
    if (r.prices->price.size() != inst.num_items() || r.prices->lambda_total.size() != inst.num_items() ||
        r.prices->lambda_period.size() != inst.num_items()) {
      fail("price shape");
    }
    for (std::size_t j = 0; j < inst.num_items(); ++j) {
      if (r.prices->price[j].size() != inst.num_periods() || r.prices->lambda_period[j].size() != inst.num_periods()) {
        fail("price shape");
      }
    }
  }
}

CheckRecord audit_bang_per_buck(const MarketInstance& inst, const SolveReport& r, double tol) {
  require_same_market(inst, r);
  const PriceSystem& ps = prices_of(r);
  const Form form = price_form(r);
  if (form == Form::none) return not_applicable("bang_per_buck", form_note(r));

  CheckRecord c;
  c.check = "bang_per_buck";
  const auto u = surpluses(inst, r);
  const std::size_t T = inst.num_periods();
  for (const auto& edge : inst.valuations.edges()) {
    const std::size_t i = edge.buyer, j = edge.item;
    double total = 0.0;
    for (double v : u[i]) total += v;
    for (std::size_t t = 0; t < T; ++t) {
      // Marginal utility per unit of budget-weighted objective at (i, j, t).
      double g = 0.0;
      switch (form) {
        case Form::aggregate: g = budget_of(r, i) * edge.value / total; break;
        case Form::geo_mean: g = budget_of(r, i) * edge.value / (static_cast<double>(T) * u[i][t]); break;
        case Form::per_period_sum: g = budget_of(r, i) * edge.value / u[i][t]; break;
        case Form::none: break;
      }
      const double p = ps.price[j][t];
      const double scale = std::max(1.0, std::fabs(p));
      double residual = std::isfinite(g) ? std::max(0.0, g - p) / scale : INFINITY;
      if (r.allocation.at(i, j, t) > kSupportTol) residual = std::isfinite(g) ? std::fabs(g - p) / scale : INFINITY;
      record(c, residual, tol, {as_int(i), as_int(j), as_int(t)});
    }
  }
  return c;
}

CheckRecord audit_budget_identity(const MarketInstance& inst, const SolveReport& r, double tol) {
  require_same_market(inst, r);
  const PriceSystem& ps = prices_of(r);
  const Form form = price_form(r);
  if (form == Form::none) return not_applicable("budget_identity", form_note(r));

  CheckRecord c;
  c.check = "budget_identity";
  const auto u = surpluses(inst, r);
  const std::size_t T = inst.num_periods();
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    double spend = 0.0;
    for (std::size_t j = 0; j < inst.num_items(); ++j) {
      for (std::size_t t = 0; t < T; ++t) spend += ps.price[j][t] * r.allocation.at(i, j, t);
    }
    const auto& b = inst.buyers[i];
    double target = 0.0;
    if (form == Form::aggregate) {
      double total = 0.0;
      for (double v : u[i]) total += v;
      target = budget_of(r, i) * (1.0 + b.total_demand() / total);
    } else {
      double acc = 0.0;
      for (std::size_t t = 0; t < T; ++t) acc += 1.0 + b.demand[t] / u[i][t];
      if (form == Form::geo_mean) acc /= static_cast<double>(T);
      target = budget_of(r, i) * acc;
    }
    const double residual = std::isfinite(target) ? std::fabs(spend - target) / std::max(1.0, std::fabs(target)) : INFINITY;
    record(c, residual, tol, {as_int(i), -1, -1});
  }
  return c;
}

CheckRecord audit_price_complementarity(const MarketInstance& inst, const SolveReport& r, double tol) {
  require_same_market(inst, r);
  const PriceSystem& ps = prices_of(r);
  CheckRecord c;
  c.check = "price_complementarity";
  const std::size_t T = inst.num_periods();
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    const auto& item = inst.items[j];
    double overall = 0.0;
    std::vector<double> per(T, 0.0);
    for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
      for (std::size_t t = 0; t < T; ++t) {
        per[t] += r.allocation.at(i, j, t);
        overall += r.allocation.at(i, j, t);
      }
    }
    const double overall_gap = std::fabs(item.supply_total - overall) / std::max(1.0, item.supply_total);
    // Each dual layer sits on its own row.
    if (ps.lambda_total[j] > tol) record(c, overall_gap, tol, {-1, as_int(j), -1});
    for (std::size_t t = 0; t < T; ++t) {
      const double s = item.supply_per_period[t];
      const double period_gap = std::fabs(s - per[t]) / std::max(1.0, s);
      if (ps.lambda_period[j][t] > tol) record(c, period_gap, tol, {-1, as_int(j), as_int(t)});
      // A positive price needs at least one tight layer.
      if (ps.price[j][t] > tol) record(c, std::min(period_gap, overall_gap), tol, {-1, as_int(j), as_int(t)});
      const double split = std::fabs(ps.price[j][t] - ps.lambda_period[j][t] - ps.lambda_total[j]);
      record(c, split / std::max(1.0, std::fabs(ps.price[j][t])), tol, {-1, as_int(j), as_int(t)});
      if (ps.lambda_period[j][t] < 0.0) record(c, -ps.lambda_period[j][t], 0.0, {-1, as_int(j), as_int(t)});
    }
    if (ps.lambda_total[j] < 0.0) record(c, -ps.lambda_total[j], 0.0, {-1, as_int(j), -1});
  }
  return c;
}

CheckRecord audit_ceei_properties(const MarketInstance& inst, const SolveReport& r, double tol) {
  require_same_market(inst, r);
  if (inst.periods != 1) return not_applicable("ceei_properties", "needs a single-period market");
  if (inst.has_demands()) return not_applicable("ceei_properties", "hard demands are present");
  if (!r.prices) return not_applicable("ceei_properties", "not a market-equilibrium report");
  if (price_form(r) == Form::none) return not_applicable("ceei_properties", form_note(r));

  CheckRecord c;
  c.check = "ceei_properties";
  const std::size_t n = inst.num_buyers();
  double budget_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) budget_total += budget_of(r, i);
  for (std::size_t i = 0; i < n; ++i) {
    auto value_of = [&](std::size_t k) {
      double v = 0.0;
      for (std::size_t e : inst.valuations.edges_of_buyer(i)) {
        const auto& edge = inst.valuations.edges()[e];
        v += edge.value * r.allocation.at(k, edge.item, 0);
      }
      return v;
    };
    const double own = value_of(i);
    const double scale = std::max(1.0, own);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double envy = budget_of(r, i) / budget_of(r, k) * value_of(k) - own;
      record(c, std::max(0.0, envy) / scale, tol, {as_int(i), as_int(k), -1});
    }
    double worth = 0.0;
    for (std::size_t e : inst.valuations.edges_of_buyer(i)) {
      const auto& edge = inst.valuations.edges()[e];
      worth += edge.value * inst.items[edge.item].usable_supply();
    }
    const double share = budget_of(r, i) / budget_total * worth - own;
    record(c, std::max(0.0, share) / scale, tol, {as_int(i), -1, -1});
  }
  // Pareto optimality rides on the price certificate.
  const CheckRecord bpb = audit_bang_per_buck(inst, r, tol);
  c.max_residual = std::max(c.max_residual, bpb.max_residual);
  if (!bpb.passed) {
    c.passed = false;
    c.witnesses.insert(c.witnesses.end(), bpb.witnesses.begin(), bpb.witnesses.end());
  }
  return c;
}

CheckRecord audit_claim_totals(const MarketInstance& inst, const SolveReport& r, double tol) {
  require_same_market(inst, r);
  if (!inst.valuations.is_binary()) return not_applicable("claim_totals", "valuations are not binary");
  if (std::any_of(r.budgets.begin(), r.budgets.end(), [](double b) { return b != 1.0; })) {
    return not_applicable("claim_totals", "budgets are not all one");
  }
  if (!inst.every_item_reachable()) return not_applicable("claim_totals", "some item has no compatible buyer");
  if (r.program == "eg-smooth" && r.gamma > 0.0) return not_applicable("claim_totals", form_note(r));
  if (r.variation_band) return not_applicable("claim_totals", form_note(r));

  CheckRecord c;
  c.check = "claim_totals";
  double expected = 0.0;
  for (const auto& item : inst.items) expected += item.usable_supply();
  for (const auto& b : inst.buyers) expected -= b.total_demand();
  double total = 0.0;
  for (const auto& row : surpluses(inst, r)) {
    for (double v : row) total += v;
  }
  record(c, std::fabs(total - expected) / std::max(1.0, std::fabs(expected)), tol, {-1, -1, -1});
  return c;
}

CheckRecord audit_feasibility(const MarketInstance& inst, const SolveReport& r) {
  require_same_market(inst, r);
  CheckRecord c;
  c.check = "feasibility";
  const std::size_t T = inst.num_periods();
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    double overall = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      double per = 0.0;
      for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
        const double x = r.allocation.at(i, j, t);
        per += x;
        record(c, std::max(0.0, -x), kFeasibilityTol, {as_int(i), as_int(j), as_int(t)});
        if (inst.valuations.value(i, j) == 0.0) record(c, std::fabs(x), kFeasibilityTol, {as_int(i), as_int(j), as_int(t)});
      }
      overall += per;
      record(c, std::max(0.0, per - inst.items[j].supply_per_period[t]), kFeasibilityTol, {-1, as_int(j), as_int(t)});
    }
    record(c, std::max(0.0, overall - inst.items[j].supply_total), kFeasibilityTol, {-1, as_int(j), -1});
  }
  return c;
}

CheckRecord audit_utilities(const MarketInstance& inst, const SolveReport& r) {
  require_same_market(inst, r);
  CheckRecord c;
  c.check = "utilities";
  const auto fresh = compute_utilities(inst, r.allocation, r.aggregation);
  const auto& stored = r.utilities;
  if (stored.per_period.size() != inst.num_buyers() || stored.aggregate.size() != inst.num_buyers()) {
    c.passed = false;
    c.max_residual = INFINITY;
    return c;
  }
  auto rel = [](double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return 0.0;
    return std::fabs(a - b) / std::max(1.0, std::fabs(b));
  };
  for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
    if (stored.per_period[i].size() != inst.num_periods()) {
      record(c, INFINITY, 1e-9, {as_int(i), -1, -1});
      continue;
    }
    for (std::size_t t = 0; t < inst.num_periods(); ++t) {
      record(c, rel(stored.per_period[i][t], fresh.per_period[i][t]), 1e-9, {as_int(i), -1, as_int(t)});
    }
    record(c, rel(stored.aggregate[i], fresh.aggregate[i]), 1e-9, {as_int(i), -1, -1});
  }
  return c;
}

std::vector<CheckRecord> run_all_audits(const MarketInstance& inst, const SolveReport& r, double tol) {
  require_same_market(inst, r);
  std::vector<CheckRecord> out;
  out.push_back(audit_feasibility(inst, r));
  out.push_back(audit_utilities(inst, r));
  if (r.prices) {
    out.push_back(audit_bang_per_buck(inst, r, tol));
    out.push_back(audit_budget_identity(inst, r, tol));
    out.push_back(audit_price_complementarity(inst, r, tol));
  } else {
    out.push_back(not_applicable("bang_per_buck", "MissingPrices: report carries no prices"));
    out.push_back(not_applicable("budget_identity", "MissingPrices: report carries no prices"));
    out.push_back(not_applicable("price_complementarity", "MissingPrices: report carries no prices"));
  }
  out.push_back(audit_ceei_properties(inst, r, tol));
  out.push_back(audit_claim_totals(inst, r, tol));
  return out;
}

bool audits_pass(const std::vector<CheckRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& c) { return !c.applicable || c.passed; });
}

namespace {

std::vector<double> profile(const SolveReport& r, bool per_period) {
  std::vector<double> out;
  for (const auto& row : r.utilities.per_period) {
    if (per_period) {
      out.insert(out.end(), row.begin(), row.end());
    } else {
      double s = 0.0;
      for (double v : row) s += v;
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Comparison compare_solutions(const SolveReport& a, const SolveReport& b, double tol) {
  if (a.periods != b.periods || a.buyer_ids != b.buyer_ids || a.item_ids != b.item_ids) {
    throw Error(ErrorKind::instance_mismatch, "compare: the two reports describe different markets");
  }
  Comparison out;
  const bool per_period = a.periods > 1 && (a.aggregation == Aggregation::geometric_mean ||
                                            b.aggregation == Aggregation::geometric_mean);
  out.profile = per_period ? "per_period" : "aggregate";
  const auto pa = profile(a, per_period), pb = profile(b, per_period);
  if (pa.size() != pb.size()) throw Error(ErrorKind::instance_mismatch, "compare: utility profiles differ in length");
  for (std::size_t k = 0; k < pa.size(); ++k) out.max_profile_gap = std::max(out.max_profile_gap, std::fabs(pa[k] - pb[k]));
  out.equivalent = out.max_profile_gap <= tol;
  return out;
}

}  // namespace fairwork
