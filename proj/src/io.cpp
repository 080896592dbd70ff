#include "fairwork/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fairwork/error.hpp"

namespace fairwork::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::parse, field + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

double finite_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(field, "must be finite");
  return d;
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<std::vector<double>> matrix(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array");
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(numbers(v[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

json parse_json(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    fail("json", e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const std::vector<double>& v) {
  json a = json::array();
  for (double d : v) a.push_back(nan_to_null(d));
  return a;
}

json mat(const std::vector<std::vector<double>>& m) {
  json a = json::array();
  for (const auto& row : m) a.push_back(vec(row));
  return a;
}

}  // namespace

MarketInstance parse_instance(const std::string& s) {
  const json root = parse_json(s);
  if (!root.is_object()) fail("instance", "expected an object");
  MarketInstance inst;
  const json& periods = member(root, "periods", "");
  if (!periods.is_number_integer()) fail("periods", "expected an integer");
  inst.periods = periods.get<int>();
  if (inst.periods < 1) fail("periods", "must be >= 1");
  const std::size_t T = inst.num_periods();
  inst.budget_mode = root.contains("budget_mode") ? parse_budget_mode(text(root["budget_mode"], "budget_mode"))
                                                  : BudgetMode::explicit_budgets;

  const json& buyers = member(root, "buyers", "");
  if (!buyers.is_array()) fail("buyers", "expected an array");
  std::map<std::string, std::size_t> buyer_index, item_index;
  for (std::size_t i = 0; i < buyers.size(); ++i) {
    const std::string where = "buyers[" + std::to_string(i) + "]";
    const json& b = buyers[i];
    Buyer buyer;
    buyer.id = text(member(b, "id", where), where + ".id");
    if (b.contains("budget")) {
      buyer.budget = finite_number(b["budget"], where + ".budget");
    } else if (inst.budget_mode == BudgetMode::explicit_budgets) {
      fail(where + ".budget", "missing (required when budget_mode is explicit)");
    }
    const json& d = member(b, "demand", where);
    if (d.is_number()) {
      const double total = finite_number(d, where + ".demand");
      buyer.demand.assign(T, total / static_cast<double>(T));
      buyer.demand_split_uniform = T > 1;
    } else if (d.is_array()) {
      for (std::size_t t = 0; t < d.size(); ++t) {
        buyer.demand.push_back(finite_number(d[t], where + ".demand[" + std::to_string(t) + "]"));
      }
    } else {
      fail(where + ".demand", "expected a number or an array");
    }
    buyer_index.emplace(buyer.id, i);
    inst.buyers.push_back(std::move(buyer));
  }

  const json& items = member(root, "items", "");
  if (!items.is_array()) fail("items", "expected an array");
  for (std::size_t j = 0; j < items.size(); ++j) {
    const std::string where = "items[" + std::to_string(j) + "]";
    const json& it = items[j];
    Item item;
    item.id = text(member(it, "id", where), where + ".id");
    const bool has_total = it.contains("supply_total"), has_per = it.contains("supply_per_period");
    if (!has_total && !has_per) fail(where + ".supply_total", "missing");
    if (has_per) {
      const json& per = it["supply_per_period"];
      if (per.is_number()) {
        item.supply_per_period.assign(T, finite_number(per, where + ".supply_per_period"));
      } else if (per.is_array()) {
        for (std::size_t t = 0; t < per.size(); ++t) {
          item.supply_per_period.push_back(finite_number(per[t], where + ".supply_per_period[" + std::to_string(t) + "]"));
        }
      } else {
        fail(where + ".supply_per_period", "expected a number or an array");
      }
    }
    if (has_total) {
      item.supply_total = finite_number(it["supply_total"], where + ".supply_total");
      if (!has_per && T == 1) item.supply_per_period = {item.supply_total};
      if (!has_per && T > 1) fail(where + ".supply_per_period", "missing (required when periods > 1)");
    } else {
      // Overall cap defaults to the per-period sum (never binding).
      double sum = 0.0;
      for (double v : item.supply_per_period) sum += v;
      item.supply_total = sum;
    }
    item_index.emplace(item.id, j);
    inst.items.push_back(std::move(item));
  }

  std::vector<Valuation> edges;
  if (root.contains("valuations")) {
    const json& vals = root["valuations"];
    if (!vals.is_array()) fail("valuations", "expected an array");
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const std::string where = "valuations[" + std::to_string(k) + "]";
      const std::string b = text(member(vals[k], "buyer", where), where + ".buyer");
      const std::string it = text(member(vals[k], "item", where), where + ".item");
      const double v = finite_number(member(vals[k], "value", where), where + ".value");
      auto bi = buyer_index.find(b);
      auto ii = item_index.find(it);
      if (bi == buyer_index.end()) fail(where + ".buyer", "unknown buyer id '" + b + "'");
      if (ii == item_index.end()) fail(where + ".item", "unknown item id '" + it + "'");
      edges.push_back({bi->second, ii->second, v});
    }
  }
  inst.valuations = ValuationMatrix(std::move(edges));
  return inst;
}

std::string instance_to_json(const MarketInstance& inst) {
  json root;
  root["periods"] = inst.periods;
  root["budget_mode"] = std::string(budget_mode_name(inst.budget_mode));
  json buyers = json::array();
  for (const auto& b : inst.buyers) {
    json o;
    o["id"] = b.id;
    o["budget"] = b.budget;
    if (inst.periods == 1 && b.demand.size() == 1) {
      o["demand"] = b.demand[0];
    } else if (b.demand_split_uniform) {
      o["demand"] = b.total_demand();
    } else {
      o["demand"] = vec(b.demand);
    }
    buyers.push_back(std::move(o));
  }
  root["buyers"] = std::move(buyers);
  json items = json::array();
  for (const auto& it : inst.items) {
    json o;
    o["id"] = it.id;
    o["supply_total"] = it.supply_total;
    o["supply_per_period"] = vec(it.supply_per_period);
    items.push_back(std::move(o));
  }
  root["items"] = std::move(items);
  json vals = json::array();
  for (const auto& e : inst.valuations.edges()) {
    json o;
    o["buyer"] = inst.buyers.at(e.buyer).id;
    o["item"] = inst.items.at(e.item).id;
    o["value"] = e.value;
    vals.push_back(std::move(o));
  }
  root["valuations"] = std::move(vals);
  return dump(root);
}

std::string report_to_json(const SolveReport& r) {
  json root;
  root["program"] = r.program;
  root["gamma"] = r.gamma;
  root["penalty"] = std::string(penalty_name(r.penalty));
  root["variation_band"] = r.variation_band ? json(*r.variation_band) : json(nullptr);
  root["budget_mode"] = std::string(budget_mode_name(r.budget_mode));
  root["budgets"] = vec(r.budgets);
  root["buyers"] = r.buyer_ids;
  root["items"] = r.item_ids;
  root["periods"] = r.periods;
  root["demand_split"] = r.demand_split_uniform ? "uniform" : "as-given";

  json alloc = json::array();
  for (std::size_t i = 0; i < r.allocation.num_buyers(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.allocation.num_items(); ++j) {
      json cell = json::array();
      for (std::size_t t = 0; t < r.allocation.num_periods(); ++t) cell.push_back(r.allocation.at(i, j, t));
      row.push_back(std::move(cell));
    }
    alloc.push_back(std::move(row));
  }
  root["allocation"] = std::move(alloc);

  if (r.prices) {
    root["prices"] = mat(r.prices->price);
    root["lambda_period"] = mat(r.prices->lambda_period);
    root["lambda_total"] = vec(r.prices->lambda_total);
  } else {
    root["prices"] = nullptr;
    root["lambda_period"] = nullptr;
    root["lambda_total"] = nullptr;
  }
  root["utilities"] = {{"per_period", mat(r.utilities.per_period)},
                       {"aggregate", vec(r.utilities.aggregate)},
                       {"aggregation", r.aggregation == Aggregation::sum ? "sum" : "geometric_mean"}};
  root["objective"] = nan_to_null(r.objective);
  root["objective_unpenalized"] = nan_to_null(r.objective_unpenalized);
  root["total_variation"] = r.total_variation;
  root["penalty_value"] = r.penalty_value;
  root["kkt_residuals"] = {{"stationarity", r.kkt.stationarity},
                           {"primal_infeasibility", r.kkt.primal_infeasibility},
                           {"complementarity", r.kkt.complementarity}};
  root["iterations"] = r.iterations;
  root["converged"] = r.converged;
  if (!r.stages.empty()) {
    json stages = json::array();
    for (const auto& s : r.stages) {
      stages.push_back({{"optimum", s.optimum}, {"log_optimum", s.log_optimum}, {"frozen", s.frozen}});
    }
    root["stages"] = std::move(stages);
  }
  if (!r.trace.empty()) {
    json trace = json::array();
    for (const auto& e : r.trace) {
      trace.push_back({{"iteration", e.iteration},
                       {"mu", e.mu},
                       {"objective", nan_to_null(e.objective)},
                       {"decrement", e.decrement},
                       {"step", e.step}});
    }
    root["trace"] = std::move(trace);
  }
  return dump(root);
}

SolveReport parse_report(const std::string& s) {
  const json root = parse_json(s);
  if (!root.is_object()) fail("report", "expected an object");
  SolveReport r;
  r.program = text(member(root, "program", ""), "program");
  r.gamma = root.contains("gamma") ? finite_number(root["gamma"], "gamma") : 0.0;
  if (root.contains("penalty")) r.penalty = parse_penalty(text(root["penalty"], "penalty"));
  if (root.contains("variation_band") && !root["variation_band"].is_null()) {
    r.variation_band = finite_number(root["variation_band"], "variation_band");
  }
  r.budget_mode = parse_budget_mode(text(member(root, "budget_mode", ""), "budget_mode"));
  r.budgets = numbers(member(root, "budgets", ""), "budgets");
  const json& buyers = member(root, "buyers", "");
  const json& items = member(root, "items", "");
  if (!buyers.is_array()) fail("buyers", "expected an array of ids");
  if (!items.is_array()) fail("items", "expected an array of ids");
  for (std::size_t k = 0; k < buyers.size(); ++k) r.buyer_ids.push_back(text(buyers[k], "buyers[" + std::to_string(k) + "]"));
  for (std::size_t k = 0; k < items.size(); ++k) r.item_ids.push_back(text(items[k], "items[" + std::to_string(k) + "]"));
  const json& periods = member(root, "periods", "");
  if (!periods.is_number_integer() || periods.get<int>() < 1) fail("periods", "expected a positive integer");
  r.periods = periods.get<int>();
  if (root.contains("demand_split")) r.demand_split_uniform = text(root["demand_split"], "demand_split") == "uniform";

  const std::size_t n = r.buyer_ids.size(), m = r.item_ids.size(), T = static_cast<std::size_t>(r.periods);
  const json& alloc = member(root, "allocation", "");
  if (!alloc.is_array() || alloc.size() != n) fail("allocation", "expected " + std::to_string(n) + " buyer rows");
  r.allocation = Allocation(n, m, T);
  for (std::size_t i = 0; i < n; ++i) {
    const auto rows = matrix(alloc[i], "allocation[" + std::to_string(i) + "]");
    if (rows.size() != m) fail("allocation[" + std::to_string(i) + "]", "expected " + std::to_string(m) + " items");
    for (std::size_t j = 0; j < m; ++j) {
      if (rows[j].size() != T) {
        fail("allocation[" + std::to_string(i) + "][" + std::to_string(j) + "]", "expected " + std::to_string(T) + " periods");
      }
      for (std::size_t t = 0; t < T; ++t) r.allocation.at(i, j, t) = rows[j][t];
    }
  }

  const json& prices = member(root, "prices", "");
  if (!prices.is_null()) {
    PriceSystem ps;
    ps.price = matrix(prices, "prices");
    ps.lambda_period = matrix(member(root, "lambda_period", ""), "lambda_period");
    ps.lambda_total = numbers(member(root, "lambda_total", ""), "lambda_total");
    r.prices = std::move(ps);
  }

  const json& util = member(root, "utilities", "");
  r.utilities.per_period = matrix(member(util, "per_period", "utilities"), "utilities.per_period");
  r.utilities.aggregate = numbers(member(util, "aggregate", "utilities"), "utilities.aggregate");
  if (util.contains("aggregation")) {
    const std::string agg = text(util["aggregation"], "utilities.aggregation");
    if (agg == "sum") {
      r.aggregation = Aggregation::sum;
    } else if (agg == "geometric_mean") {
      r.aggregation = Aggregation::geometric_mean;
    } else {
      fail("utilities.aggregation", "expected sum or geometric_mean");
    }
  }
  r.objective = number(member(root, "objective", ""), "objective");
  r.objective_unpenalized = root.contains("objective_unpenalized") ? number(root["objective_unpenalized"], "objective_unpenalized") : r.objective;
  r.total_variation = root.contains("total_variation") ? number(root["total_variation"], "total_variation") : 0.0;
  r.penalty_value = root.contains("penalty_value") ? number(root["penalty_value"], "penalty_value") : 0.0;
  const json& kkt = member(root, "kkt_residuals", "");
  r.kkt.stationarity = number(member(kkt, "stationarity", "kkt_residuals"), "kkt_residuals.stationarity");
  r.kkt.primal_infeasibility = number(member(kkt, "primal_infeasibility", "kkt_residuals"), "kkt_residuals.primal_infeasibility");
  r.kkt.complementarity = number(member(kkt, "complementarity", "kkt_residuals"), "kkt_residuals.complementarity");
  r.iterations = root.contains("iterations") ? root["iterations"].get<int>() : 0;
  const json& conv = member(root, "converged", "");
  if (!conv.is_boolean()) fail("converged", "expected true or false");
  r.converged = conv.get<bool>();
  if (root.contains("stages")) {
    const json& stages = root["stages"];
    if (!stages.is_array()) fail("stages", "expected an array");
    for (std::size_t k = 0; k < stages.size(); ++k) {
      const std::string where = "stages[" + std::to_string(k) + "]";
      LeximinStage st;
      st.optimum = number(member(stages[k], "optimum", where), where + ".optimum");
      st.log_optimum = stages[k].contains("log_optimum") ? number(stages[k]["log_optimum"], where + ".log_optimum") : std::log(st.optimum);
      const json& fz = member(stages[k], "frozen", where);
      if (!fz.is_array()) fail(where + ".frozen", "expected an array");
      for (std::size_t q = 0; q < fz.size(); ++q) st.frozen.push_back(text(fz[q], where + ".frozen"));
      r.stages.push_back(std::move(st));
    }
  }
  return r;
}

std::string audit_to_json(const std::vector<CheckRecord>& records) {
  json arr = json::array();
  for (const auto& c : records) {
    json o;
    o["check"] = c.check;
    o["applicable"] = c.applicable;
    o["passed"] = c.applicable ? json(c.passed) : json(nullptr);
    o["max_residual"] = c.applicable ? nan_to_null(c.max_residual) : json(nullptr);
    json w = json::array();
    for (const auto& x : c.witnesses) w.push_back({{"index", {x.i, x.j, x.t}}, {"residual", nan_to_null(x.residual)}});
    o["witnesses"] = std::move(w);
    if (!c.note.empty()) o["note"] = c.note;
    arr.push_back(std::move(o));
  }
  return dump(arr);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "gamma,objective,total_variation,penalty_value\n";
  for (const auto& r : rows) {
    out += format_double(r.gamma) + "," + format_double(r.objective) + "," + format_double(r.total_variation) + "," +
           format_double(r.penalty_value) + "\n";
  }
  return out;
}

std::string robustness_to_csv(const MarketInstance& inst, const RobustnessMetrics& metrics) {
  std::string out = "realization,buyer,shortfall,coverage\n";
  for (const auto& r : metrics.rows) {
    out += std::to_string(r.realization) + "," + inst.buyers.at(r.buyer).id + "," + format_double(r.shortfall) + "," +
           (r.covered ? "1" : "0") + "\n";
  }
  return out;
}

std::string robustness_summary_json(const RobustnessMetrics& m) {
  json o;
  o["coverage"] = m.coverage;
  o["mean_shortfall"] = m.mean_shortfall;
  o["p95_shortfall"] = m.p95_shortfall;
  o["idle_capacity"] = m.idle_capacity;
  o["pairs"] = m.rows.size();
  return dump(o);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::parse, path + ": cannot open for writing");
  out << text;
  if (!out) throw Error(ErrorKind::parse, path + ": write failed");
}

}  // namespace fairwork::io
