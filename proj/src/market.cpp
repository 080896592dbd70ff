#include "fairwork/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "fairwork/error.hpp"

namespace fairwork {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
      return "ParseError";
    case ErrorKind::invalid_instance:
      return "InvalidInstance";
    case ErrorKind::equal_to_demand_with_zero_demand:
      return "EqualToDemandWithZeroDemand";
    case ErrorKind::assumption_violated:
      return "AssumptionViolated";
    case ErrorKind::infeasible:
      return "Infeasible";
    case ErrorKind::domain_guard_violated:
      return "DomainGuardViolated";
    case ErrorKind::not_converged:
      return "NotConverged";
    case ErrorKind::missing_prices:
      return "MissingPrices";
    case ErrorKind::instance_mismatch:
      return "InstanceMismatch";
    case ErrorKind::bad_gamma:
      return "BadGamma";
    case ErrorKind::shape_mismatch:
      return "ShapeMismatch";
    case ErrorKind::unsatisfiable_config:
      return "UnsatisfiableConfig";
    case ErrorKind::precondition:
      return "PreconditionViolated";
  }
  return "Error";
}

std::string_view budget_mode_name(BudgetMode mode) {
  switch (mode) {
    case BudgetMode::explicit_budgets:
      return "explicit";
    case BudgetMode::unit:
      return "unit";
    case BudgetMode::equal_to_demand:
      return "equal-to-demand";
  }
  return "explicit";
}

BudgetMode parse_budget_mode(std::string_view text) {
  if (text == "explicit") return BudgetMode::explicit_budgets;
  if (text == "unit") return BudgetMode::unit;
  if (text == "equal-to-demand" || text == "demand") return BudgetMode::equal_to_demand;
  throw Error(ErrorKind::parse, "budget_mode: unknown value '" + std::string(text) + "'");
}

double Buyer::total_demand() const { return std::accumulate(demand.begin(), demand.end(), 0.0); }

double Item::usable_supply() const {
  const double per_period = std::accumulate(supply_per_period.begin(), supply_per_period.end(), 0.0);
  return std::min(supply_total, per_period);
}

bool Item::overall_cap_binds() const {
  const double per_period = std::accumulate(supply_per_period.begin(), supply_per_period.end(), 0.0);
  return supply_total < per_period;
}

ValuationMatrix::ValuationMatrix(std::vector<Valuation> edges) : edges_(std::move(edges)) {
  std::stable_sort(edges_.begin(), edges_.end(), [](const Valuation& a, const Valuation& b) {
    return a.buyer != b.buyer ? a.buyer < b.buyer : a.item < b.item;
  });
  std::size_t nb = 0, ni = 0;
  for (const auto& e : edges_) {
    nb = std::max(nb, e.buyer + 1);
    ni = std::max(ni, e.item + 1);
  }
  by_buyer_.resize(nb);
  by_item_.resize(ni);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    by_buyer_[edges_[k].buyer].push_back(k);
    by_item_[edges_[k].item].push_back(k);
  }
}

double ValuationMatrix::value(std::size_t buyer, std::size_t item) const {
  for (std::size_t k : edges_of_buyer(buyer)) {
    if (edges_[k].item == item) return edges_[k].value;
  }
  return 0.0;
}

const std::vector<std::size_t>& ValuationMatrix::edges_of_buyer(std::size_t buyer) const {
  static const std::vector<std::size_t> kEmpty;
  return buyer < by_buyer_.size() ? by_buyer_[buyer] : kEmpty;
}

const std::vector<std::size_t>& ValuationMatrix::edges_of_item(std::size_t item) const {
  static const std::vector<std::size_t> kEmpty;
  return item < by_item_.size() ? by_item_[item] : kEmpty;
}

bool ValuationMatrix::is_binary() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Valuation& e) { return e.value == 1.0; });
}

bool ValuationMatrix::is_bivalued() const {
  std::set<double> distinct;
  for (const auto& e : edges_) distinct.insert(e.value);
  return distinct.size() <= 2;
}

bool MarketInstance::has_demands() const {
  for (const auto& b : buyers) {
    for (double d : b.demand) {
      if (d != 0.0) return true;
    }
  }
  return false;
}

bool MarketInstance::unit_budgets() const {
  return std::all_of(buyers.begin(), buyers.end(), [](const Buyer& b) { return b.budget == 1.0; });
}

bool MarketInstance::every_item_reachable() const {
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (valuations.edges_of_item(j).empty()) return false;
  }
  return true;
}

std::vector<Violation> validate_instance(const MarketInstance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, std::string entity, std::string detail) {
    out.push_back({std::move(rule), std::move(entity), std::move(detail)});
  };
  auto finite = [](double v) { return std::isfinite(v); };

  if (inst.periods < 1) add("BadPeriods", "instance", "periods must be >= 1");
  const std::size_t T = inst.periods < 1 ? 0 : inst.num_periods();

  std::set<std::string> seen;
  for (const auto& b : inst.buyers) {
    if (!seen.insert(b.id).second) add("DuplicateId", b.id, "buyer id repeated");
    if (b.demand.size() != T) {
      add("BadLength", b.id, "demand: expected " + std::to_string(T));
    }
    for (double d : b.demand) {
      if (!finite(d) || d < 0.0) {
        add("BadDemand", b.id, "demand entries must be finite and >= 0");
        break;
      }
    }
    if (!finite(b.budget) || b.budget < 0.0) {
      add("BadBudget", b.id, "budget must be finite and >= 0");
    } else if (inst.budget_mode == BudgetMode::explicit_budgets && b.budget <= 0.0) {
      add("BadBudget", b.id, "explicit budget must be > 0");
    }
  }

  seen.clear();
  for (const auto& it : inst.items) {
    if (!seen.insert(it.id).second) add("DuplicateId", it.id, "item id repeated");
    if (it.supply_per_period.size() != T) {
      add("BadLength", it.id, "supply_per_period: expected " + std::to_string(T));
    }
    if (!finite(it.supply_total) || it.supply_total <= 0.0) {
      add("BadSupply", it.id, "supply_total must be finite and > 0");
    }
    for (double s : it.supply_per_period) {
      if (!finite(s) || s <= 0.0) {
        add("BadSupply", it.id, "supply_per_period entries must be finite and > 0");
        break;
      }
    }
    if (T == 1 && it.supply_per_period.size() == 1 && it.supply_total != it.supply_per_period[0]) {
      add("SinglePeriodSupplyMismatch", it.id, "T = 1 requires supply_total == supply_per_period[0]");
    }
  }

  const auto& edges = inst.valuations.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const bool buyer_ok = e.buyer < inst.buyers.size();
    const bool item_ok = e.item < inst.items.size();
    const std::string label = (buyer_ok ? inst.buyers[e.buyer].id : "#" + std::to_string(e.buyer)) + "/" +
                              (item_ok ? inst.items[e.item].id : "#" + std::to_string(e.item));
    if (!buyer_ok || !item_ok) add("DanglingEdge", label, "valuation references unknown buyer or item");
    if (!finite(e.value) || e.value <= 0.0) add("BadValue", label, "stored valuations must be finite and > 0");
    if (k > 0 && edges[k - 1].buyer == e.buyer && edges[k - 1].item == e.item) {
      add("DuplicateEdge", label, "pair listed twice");
    }
  }
  return out;
}

MarketInstance resolve_budgets(const MarketInstance& inst) {
  MarketInstance out = inst;
  switch (inst.budget_mode) {
    case BudgetMode::explicit_budgets:
      break;
    case BudgetMode::unit:
      for (auto& b : out.buyers) b.budget = 1.0;
      break;
    case BudgetMode::equal_to_demand:
      for (auto& b : out.buyers) {
        const double d = b.total_demand();
        if (!(d > 0.0)) {
          throw Error(ErrorKind::equal_to_demand_with_zero_demand,
                      "buyer '" + b.id + "' has zero total demand; budget_mode equal-to-demand would give it budget 0");
        }
        b.budget = d;
      }
      break;
  }
  return out;
}

MarketInstance collapse_periods(const MarketInstance& inst) {
  MarketInstance out = inst;
  out.periods = 1;
  for (auto& b : out.buyers) {
    b.demand = {b.total_demand()};
    b.demand_split_uniform = false;
  }
  for (auto& it : out.items) {
    const double s = it.usable_supply();
    it.supply_total = s;
    it.supply_per_period = {s};
  }
  return out;
}

std::vector<Violation> check_feasibility(const MarketInstance& inst, const Allocation& x, double tol) {
  std::vector<Violation> out;
  const std::size_t n = inst.num_buyers(), m = inst.num_items(), T = inst.num_periods();
  if (x.num_buyers() != n || x.num_items() != m || x.num_periods() != T) {
    out.push_back({"ShapeMismatch", "allocation", "allocation shape does not match instance"});
    return out;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const auto& item = inst.items[j];
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      double per = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = x.at(i, j, t);
        if (v < -tol) {
          out.push_back({"Negative", inst.buyers[i].id + "/" + item.id, "period " + std::to_string(t)});
        }
        if (v != 0.0 && inst.valuations.value(i, j) == 0.0) {
          out.push_back({"IncompatibleMass", inst.buyers[i].id + "/" + item.id, "period " + std::to_string(t)});
        }
        per += v;
      }
      if (per > item.supply_per_period[t] + tol) {
        out.push_back({"PeriodSupply", item.id, "period " + std::to_string(t)});
      }
      total += per;
    }
    if (total > item.supply_total + tol) out.push_back({"TotalSupply", item.id, "overall cap exceeded"});
  }
  return out;
}

UtilityProfile compute_utilities(const MarketInstance& inst, const Allocation& x, Aggregation rule) {
  const std::size_t n = inst.num_buyers(), T = inst.num_periods();
  UtilityProfile p;
  p.per_period.assign(n, std::vector<double>(T, 0.0));
  p.aggregate.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      double value = 0.0;
      for (std::size_t k : inst.valuations.edges_of_buyer(i)) {
        const auto& e = inst.valuations.edges()[k];
        value += e.value * x.at(i, e.item, t);
      }
      p.per_period[i][t] = value - inst.buyers[i].demand[t];
    }
    if (rule == Aggregation::sum) {
      p.aggregate[i] = std::accumulate(p.per_period[i].begin(), p.per_period[i].end(), 0.0);
    } else {
      double log_sum = 0.0;
      bool positive = true;
      for (double u : p.per_period[i]) {
        if (!(u > 0.0)) positive = false;
        log_sum += std::log(u);
      }
      p.aggregate[i] = positive ? std::exp(log_sum / static_cast<double>(T)) : std::nan("");
    }
  }
  return p;
}

}  // namespace fairwork
