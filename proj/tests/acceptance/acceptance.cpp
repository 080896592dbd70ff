// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fairwork/audit.hpp"
#include "fairwork/error.hpp"
#include "fairwork/io.hpp"
#include "fairwork/layout.hpp"
#include "fairwork/leximin.hpp"
#include "fairwork/programs.hpp"
#include "fairwork/scenario.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fairwork;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Every converged solve from criteria 1-5 is queued here for criterion 6.
struct Audited {
  MarketInstance inst;
  SolveReport report;
  std::string tag;
};
std::vector<Audited> audit_queue;

SolveReport keep(const MarketInstance& in, SolveReport r, const std::string& tag) {
  if (r.converged) audit_queue.push_back({in, r, tag});
  return r;
}

Outcome criterion1() {
  Outcome o;
  const auto in = fwtest::example1();
  auto t0 = Clock::now();
  const auto eg = keep(in, solve_eg(in), "ex1/eg");
  const double t_eg = seconds_since(t0);
  const auto u = sorted(eg.utilities.aggregate);
  o.expect(eg.converged, "EG converged");
  o.expect(near(u[0], 1.0, 1e-4) && near(u[1], 2.0, 1e-4), "EG profile (1, 2)");
  o.expect(near(eg.allocation.at(0, 0, 0), 1.0, 1e-4), "EG x11 = 1");

  t0 = Clock::now();
  const auto lex = leximin_solve(in, LeximinMode::single);
  const double t_lex = seconds_since(t0);
  keep(in, lex.report, "ex1/leximin");
  o.expect(near(lex.sorted_r[0], 4.0 / 3.0, 1e-4) && near(lex.sorted_r[1], 4.0 / 3.0, 1e-4), "leximin (4/3, 4/3)");
  o.expect(near(lex.report.allocation.at(0, 0, 0), 2.0 / 3.0, 1e-4), "leximin x11 = 2/3");
  o.expect(t_eg < 1.0 && t_lex < 1.0, "runtime < 1 s");
  o.detail = "EG u=(" + fmt("%.6f", u[1]) + "," + fmt("%.6f", u[0]) + ") x11=" + fmt("%.6f", eg.allocation.at(0, 0, 0)) +
             "; leximin r=" + fmt("%.6f", lex.sorted_r[0]) + " x11=" + fmt("%.6f", lex.report.allocation.at(0, 0, 0)) +
             "; " + fmt("%.3fs", t_eg + t_lex);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto bd = fwtest::example2(BudgetMode::equal_to_demand);
  const auto b1 = fwtest::example2(BudgetMode::unit);
  const auto t0 = Clock::now();
  const auto rd = keep(bd, solve_eg_demand(bd), "ex2/eg B=d");
  const auto r1 = keep(b1, solve_eg_demand(b1), "ex2/eg B=1");
  const auto lex = leximin_solve(bd, LeximinMode::single);
  keep(bd, lex.report, "ex2/leximin B=d");
  const double elapsed = seconds_since(t0);

  const double a_oracle =
      oracle::bisect([](double a) { return 0.1 * std::log(a - 0.1) - 0.2 * std::log(1.8 - a); }, 0.1 + 1e-12, 1.0);
  const double a_eg_d = rd.allocation.at(0, 0, 0), a_eg_1 = r1.allocation.at(0, 0, 0);
  const double a_lex = lex.report.allocation.at(0, 0, 0);
  o.expect(near(a_eg_d, 2.0 / 3.0, 1e-4), "EG B=d x = 2/3");
  o.expect(near(a_eg_1, 0.95, 1e-4), "EG B=1 x = 0.95");
  o.expect(near(a_lex, a_oracle, 1e-3), "leximin B=d x = bisection root");
  o.expect(std::fabs(a_lex - 2.0 / 3.0) > 1e-2, "leximin B=d differs from 2/3");
  o.expect(elapsed < 3.0, "each solve < 1 s");
  o.detail = "EG B=d " + fmt("%.6f", a_eg_d) + ", EG B=1 " + fmt("%.6f", a_eg_1) + ", leximin B=d " + fmt("%.6f", a_lex) +
             " (bisection root of 0.1 log(a-0.1) = 0.2 log(1.8-a): " + fmt("%.6f", a_oracle) + ")";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto one = fwtest::random_market(100 + seed, 1, ValuationMode::binary, BudgetMode::unit);
    const auto three = fwtest::random_market(200 + seed, 3, ValuationMode::binary, BudgetMode::unit);
    const auto four = fwtest::random_market(300 + seed, 3, ValuationMode::binary, BudgetMode::unit);
    struct Pair {
      SolveReport eg, lex;
      std::string tag;
    };
    std::vector<Pair> pairs;
    pairs.push_back({keep(one, solve_eg_demand(one), "single eg"), leximin_solve(one, LeximinMode::single).report, "T=1 seed " + std::to_string(seed)});
    pairs.push_back({keep(three, solve_eg_time_sum(three), "time-sum eg"), leximin_solve(three, LeximinMode::time_sum).report,
                     "time-sum seed " + std::to_string(seed)});
    pairs.push_back({keep(four, solve_eg_time_geo_mean(four), "time-geo eg"), leximin_solve(four, LeximinMode::time_indexed).report,
                     "time-indexed seed " + std::to_string(seed)});
    keep(one, pairs[0].lex, "single leximin");
    keep(three, pairs[1].lex, "time-sum leximin");
    keep(four, pairs[2].lex, "time-indexed leximin");
    for (const auto& p : pairs) {
      const auto c = compare_solutions(p.eg, p.lex, 1e-5);
      worst = std::max(worst, c.max_profile_gap);
      o.expect(p.eg.converged && p.lex.converged, p.tag + " converged");
      o.expect(c.equivalent, p.tag + " gap " + fmt("%.2e", c.max_profile_gap));
      ++count;
    }
  }
  const double elapsed = seconds_since(t0);
  o.expect(elapsed < 300.0, "suite < 5 min");
  o.detail = std::to_string(count) + " pairs, max sorted-profile gap " + fmt("%.2e", worst) + ", " + fmt("%.1fs", elapsed);
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto v = seed % 2 ? ValuationMode::general : ValuationMode::bivalued;
    const auto bm = seed % 3 == 0 ? BudgetMode::unit : BudgetMode::explicit_budgets;
    const auto one = fwtest::random_market(400 + seed, 1, v, bm);
    const auto many = fwtest::random_market(500 + seed, 3, v, bm);
    const auto geo = fwtest::random_market(600 + seed, 3, v, bm);
    for (const auto& [in, r] : {std::pair{one, keep(one, solve_eg_demand(one), "budget eg-demand")},
                                std::pair{many, keep(many, solve_eg_time_sum(many), "budget time-sum")},
                                std::pair{geo, keep(geo, solve_eg_time_geo_mean(geo), "budget time-geo")}}) {
      const auto c = audit_budget_identity(in, r);
      worst = std::max(worst, c.max_residual);
      o.expect(r.converged && c.passed, r.program + " seed " + std::to_string(seed) + " residual " + fmt("%.2e", c.max_residual));
      ++count;
    }
  }
  o.detail = std::to_string(count) + " solves, max relative residual " + fmt("%.2e", worst);
  return o;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto unit = fwtest::complete_binary(seed, BudgetMode::unit);
    const auto r1 = keep(unit, solve_eg_demand(unit), "complete B=1");
    std::vector<double> surplus = r1.utilities.aggregate;
    const auto demand = fwtest::complete_binary(seed, BudgetMode::equal_to_demand);
    const auto rd = keep(demand, solve_eg_demand(demand), "complete B=d");
    std::vector<double> ratio;
    for (std::size_t i = 0; i < demand.num_buyers(); ++i) {
      const double d = demand.buyers[i].total_demand();
      ratio.push_back((rd.utilities.aggregate[i] + d) / d);
    }
    worst = std::max({worst, spread(surplus), spread(ratio)});
    o.expect(spread(surplus) <= 1e-5, "B=1 surplus spread seed " + std::to_string(seed));
    o.expect(spread(ratio) <= 1e-5, "B=d ratio spread seed " + std::to_string(seed));
  }

  // Market shaped like the application: 10 work types, 4 partners, a lone-edge
  // work type on partner 1.
  GeneratorConfig cfg;
  cfg.periods = 1;
  cfg.density = 1.0;
  cfg.seed = 49;
  const auto shaped = generate(cfg);
  const auto r1 = keep(shaped, solve_eg_demand(shaped), "shaped B=1");
  std::vector<double> others;
  for (std::size_t i = 0; i + 1 < shaped.num_buyers(); ++i) others.push_back(r1.utilities.aggregate[i]);
  const double lone = r1.utilities.aggregate.back();
  o.expect(spread(others) <= 1e-5, "application shape B=1: equal extra allocation");
  o.expect(std::fabs(lone - others[0]) > 1e-3, "application shape B=1: lone-edge buyer differs");

  cfg.zero_demand_buyer = false;
  cfg.budget_mode = BudgetMode::equal_to_demand;
  const auto shaped_d = generate(cfg);
  const auto rd = keep(shaped_d, solve_eg_demand(shaped_d), "shaped B=d");
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < shaped_d.num_buyers(); ++i) {
    const double d = shaped_d.buyers[i].total_demand();
    ratios.push_back((rd.utilities.aggregate[i] + d) / d);
  }
  const double lone_ratio = (rd.utilities.aggregate.back() + shaped_d.buyers.back().total_demand()) /
                            shaped_d.buyers.back().total_demand();
  o.expect(spread(ratios) <= 1e-5, "application shape B=d: equal allocation/demand ratio");
  worst = std::max({worst, spread(others), spread(ratios)});
  o.detail = "40 complete-graph solves + application shape; max spread " + fmt("%.2e", worst) + "; B=1 extra " +
             fmt("%.4f", others[0]) + " (lone " + fmt("%.4f", lone) + "), B=d ratio " + fmt("%.4f", ratios[0]) + " (lone " +
             fmt("%.4f", lone_ratio) + ")";
  return o;
}

Outcome criterion6() {
  Outcome o;
  int priced = 0, ceei = 0, claim = 0, unpriced = 0;
  for (const auto& a : audit_queue) {
    if (!a.report.prices) {
      // Leximin reports: no duals; feasibility and stored utilities still checked.
      ++unpriced;
      o.expect(audit_feasibility(a.inst, a.report).passed && audit_utilities(a.inst, a.report).passed, a.tag + " feasibility");
      const auto c = audit_claim_totals(a.inst, a.report);
      if (c.applicable) {
        ++claim;
        o.expect(c.passed, a.tag + " claim totals");
      }
      continue;
    }
    ++priced;
    o.expect(audit_bang_per_buck(a.inst, a.report).passed, a.tag + " bang-per-buck");
    o.expect(audit_price_complementarity(a.inst, a.report).passed, a.tag + " complementarity");
    const auto c = audit_claim_totals(a.inst, a.report);
    if (c.applicable) {
      ++claim;
      o.expect(c.passed, a.tag + " claim totals " + fmt("%.2e", c.max_residual));
    }
    const auto e = audit_ceei_properties(a.inst, a.report);
    if (e.applicable) {
      ++ceei;
      o.expect(e.passed, a.tag + " ceei");
    }
  }
  o.detail = std::to_string(priced) + " priced reports (bang-per-buck, complementarity), " + std::to_string(claim) +
             " claim-total and " + std::to_string(ceei) + " ceei checks applicable; " + std::to_string(unpriced) +
             " leximin reports feasibility-checked";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto in = fwtest::smooth_example();
  const auto r0 = solve_eg_smooth(in, Penalty::abs_dev, 0.0);
  const auto r = solve_eg_smooth(in, Penalty::abs_dev, 0.005);
  o.expect(r.converged, "smooth solve converged");
  o.expect(r.total_variation <= 1e-5, "total variation <= 1e-5");
  o.expect(near(r.objective_unpenalized, r0.objective_unpenalized, 1e-6), "unpenalized objective matches gamma = 0");

  int rows = 0;
  double worst_rise = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg;
    cfg.buyers = 6;
    cfg.items = 3;
    cfg.trend = seed % 2 ? Trend::upward : Trend::mixed;
    cfg.seed = 700 + seed;
    const auto inst = generate(cfg);
    const auto sweep = sweep_gamma(inst, seed % 3 == 2 ? Penalty::kl : Penalty::abs_dev, {0.0, 0.001, 0.005, 0.01, 0.05, 0.1});
    for (std::size_t k = 0; k < sweep.size(); ++k) {
      o.expect(!sweep[k].failed && sweep[k].converged, "sweep seed " + std::to_string(seed) + " row " + std::to_string(k));
      if (k > 0) {
        const double rise = sweep[k].penalty_value - sweep[k - 1].penalty_value;
        worst_rise = std::max(worst_rise, rise);
        o.expect(rise <= 1e-6, "penalty monotone seed " + std::to_string(seed));
      }
      ++rows;
    }
  }
  o.detail = "example TV " + fmt("%.2e", r.total_variation) + ", objective gap " +
             fmt("%.2e", std::fabs(r.objective_unpenalized - r0.objective_unpenalized)) + "; " + std::to_string(rows) +
             " sweep rows, largest penalty increase " + fmt("%.2e", worst_rise);
  return o;
}

// Tiny random markets the grid can cover exhaustively.
std::vector<MarketInstance> oracle_corpus(std::size_t max_dims, std::size_t want) {
  std::vector<MarketInstance> out{fwtest::example1(), fwtest::example2(BudgetMode::unit),
                                  fwtest::example2(BudgetMode::equal_to_demand)};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double values[] = {0.5, 1.0, 1.0, 2.0, 3.0};
  while (out.size() < want) {
    MarketInstance in;
    in.periods = 1 + static_cast<int>(rng() % 2);
    const std::size_t n = 1 + rng() % 3, m = 1 + rng() % 3;
    in.budget_mode = rng() % 2 ? BudgetMode::unit : BudgetMode::explicit_budgets;
    std::vector<Valuation> edges;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t must = rng() % m;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == must || u(rng) < 0.4) edges.push_back({i, j, values[rng() % 5]});
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> d(in.num_periods());
      for (auto& x : d) x = u(rng) < 0.5 ? 0.0 : 0.3 * u(rng);
      in.buyers.push_back(fwtest::buyer("b" + std::to_string(i + 1), 0.5 + u(rng), d));
    }
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> s(in.num_periods());
      double total = 0.0;
      for (auto& x : s) total += (x = 0.5 + u(rng));
      in.items.push_back(fwtest::item("i" + std::to_string(j + 1), total, s));
    }
    in.valuations = ValuationMatrix(std::move(edges));
    if (oracle::free_dims(in) == 0 || oracle::free_dims(in) > max_dims || !oracle::grid_supported(in)) continue;
    out.push_back(std::move(in));
  }
  return out;
}

Outcome criterion8() {
  Outcome o;
  int eg_checked = 0, lex_checked = 0;
  double worst_gap = 0.0;
  std::size_t points = 0;
  for (const auto& raw : oracle_corpus(3, 30)) {
    const auto in = resolve_budgets(raw);
    std::vector<std::pair<ProgramKind, oracle::Objective>> kinds;
    if (in.periods == 1) {
      kinds.push_back({ProgramKind::eg_demand, oracle::Objective::eg_demand});
    } else {
      kinds.push_back({ProgramKind::eg_time_sum, oracle::Objective::time_sum});
      kinds.push_back({ProgramKind::eg_time_geo_mean, oracle::Objective::geo_mean});
    }
    for (const auto& [kind, obj] : kinds) {
      SolveReport r;
      try {
        r = solve_program(in, {kind});
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::assumption_violated) continue;
        throw;
      }
      const double f = oracle::objective(in, r.allocation, obj);
      const auto grid = oracle::grid_objective(in, obj);
      points += grid.points;
      // First-order bound on how far the nearest grid point can sit below f.
      const auto& x = r.allocation;
      auto flat_f = [&](std::span<const double> y) {
        Allocation a(x.num_buyers(), x.num_items(), x.num_periods());
        std::size_t k = 0;
        for (std::size_t i = 0; i < a.num_buyers(); ++i)
          for (std::size_t j = 0; j < a.num_items(); ++j)
            for (std::size_t t = 0; t < a.num_periods(); ++t) a.at(i, j, t) = y[k++];
        return oracle::objective(in, a, obj);
      };
      const auto g = oracle::fd_gradient(flat_f, x.data(), 1e-7);
      double bound = 0.0;
      for (std::size_t i = 0; i < x.num_buyers(); ++i)
        for (std::size_t j = 0; j < x.num_items(); ++j)
          for (std::size_t t = 0; t < x.num_periods(); ++t) {
            const std::size_t k = (i * x.num_items() + j) * x.num_periods() + t;
            bound += std::fabs(g[k]) * 3.0 * 1e-3 * in.items[j].supply_per_period[t];
          }
      bound = 2.0 * bound + 1e-9;
      const std::string tag = std::string(program_name(kind)) + " n=" + std::to_string(in.num_buyers()) +
                              " m=" + std::to_string(in.num_items()) + " T=" + std::to_string(in.periods);
      o.expect(grid.value <= f + 1e-9 * std::max(1.0, std::fabs(f)), tag + ": grid beats solver by " + fmt("%.2e", grid.value - f));
      o.expect(f - grid.value <= bound, tag + ": solver above grid by " + fmt("%.2e", f - grid.value));
      worst_gap = std::max(worst_gap, f - grid.value);
      ++eg_checked;
    }
  }
  for (const auto& raw : oracle_corpus(2, 30)) {
    const auto in = resolve_budgets(raw);
    std::vector<std::pair<LeximinMode, oracle::Profile>> modes;
    if (in.periods == 1) {
      modes.push_back({LeximinMode::single, oracle::Profile::single});
    } else {
      modes.push_back({LeximinMode::time_sum, oracle::Profile::time_sum});
      modes.push_back({LeximinMode::time_indexed, oracle::Profile::time_indexed});
    }
    for (const auto& [mode, profile] : modes) {
      LeximinResult r;
      try {
        r = leximin_solve(in, mode);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::assumption_violated) continue;
        throw;
      }
      const auto mine = oracle::sorted_r(in, r.report.allocation, profile);
      bool same = mine.size() == r.sorted_r.size();
      for (std::size_t k = 0; same && k < mine.size(); ++k) same = near(mine[k], r.sorted_r[k], 1e-7 * std::max(1.0, mine[k]));
      const std::string tag = std::string(leximin_mode_name(mode)) + " n=" + std::to_string(in.num_buyers()) +
                              " m=" + std::to_string(in.num_items()) + " T=" + std::to_string(in.periods);
      o.expect(same, tag + ": reported r does not match allocation");
      const auto beat = oracle::grid_leximin_counterexample(in, profile, mine);
      o.expect(!beat.has_value(), tag + ": grid point is leximin-greater");
      ++lex_checked;
    }
  }
  o.detail = std::to_string(eg_checked) + " EG solves vs grid (largest solver-over-grid " + fmt("%.2e", worst_gap) + ", " +
             std::to_string(points) + " grid points), " + std::to_string(lex_checked) + " leximin solves vs 1e-3 grid";
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst = 0.0;
  int points = 0;
  const auto one = resolve_budgets(fwtest::random_market(31, 1, ValuationMode::general, BudgetMode::explicit_budgets, 5));
  const auto many = resolve_budgets(fwtest::random_market(32, 3, ValuationMode::general, BudgetMode::explicit_budgets, 5));
  struct Case {
    const MarketInstance* in;
    ProgramSpec spec;
    const char* name;
  };
  const std::vector<Case> cases{{&one, {ProgramKind::eg_demand}, "eg-demand"},
                                {&many, {ProgramKind::eg_time_sum}, "eg-time-sum"},
                                {&many, {ProgramKind::eg_time_geo_mean}, "eg-time-geo"},
                                {&many, {ProgramKind::eg_smooth, Penalty::abs_dev, 0.2}, "eg-smooth absdev"},
                                {&many, {ProgramKind::eg_smooth, Penalty::kl, 0.2}, "eg-smooth kl"}};
  const auto center_one = solve_eg_demand(one).allocation;
  const auto center_many = solve_eg_time_geo_mean(many).allocation;
  for (const auto& c : cases) {
    ProgramObjective f(*c.in, c.spec);
    const auto xs = fwtest::domain_points(*c.in, f, c.in == &one ? center_one : center_many, 20, 9);
    o.expect(xs.size() == 20, std::string(c.name) + ": could not sample 20 domain points");
    for (const auto& x : xs) {
      std::vector<double> g(x.size());
      f.gradient(x, g);
      const auto fd = oracle::fd_gradient([&](std::span<const double> y) { return f.value(y); }, x);
      for (std::size_t v = 0; v < x.size(); ++v) {
        const double rel = std::fabs(g[v] - fd[v]) / std::max(1.0, std::fabs(fd[v]));
        worst = std::max(worst, rel);
        o.expect(rel <= 1e-5, std::string(c.name) + ": gradient mismatch " + fmt("%.2e", rel));
      }
      ++points;
    }
  }
  o.detail = std::to_string(points) + " points over 5 objectives, max relative error " + fmt("%.2e", worst);
  return o;
}

Outcome criterion10() {
  Outcome o;
  int compared = 0;
  auto same = [&](const std::function<std::string()>& make, const std::string& tag) {
    const std::string a = make(), b = make();
    o.expect(a == b, tag);
    ++compared;
  };
  engine::Options opt;
  opt.seed = 12345;
  const auto gen = [] {
    GeneratorConfig c;
    c.seed = 77;
    return generate(c);
  };
  const auto in = gen();
  same([&] { return io::instance_to_json(gen()); }, "gen");
  same([&] { return io::report_to_json(solve_eg_time_sum(in, opt)); }, "eg-time-sum");
  same([&] { return io::report_to_json(solve_eg_time_geo_mean(in, opt)); }, "eg-time-geo");
  same([&] { return io::report_to_json(solve_eg_smooth(in, Penalty::kl, 0.01, opt)); }, "eg-smooth");
  same([&] { return io::report_to_json(leximin_solve(in, LeximinMode::time_sum, opt).report); }, "leximin");
  same([&] { return io::sweep_to_csv(sweep_gamma(in, Penalty::abs_dev, {0.0, 0.01}, opt)); }, "sweep");
  same([&] {
    return io::robustness_to_csv(in, evaluate_robustness(in, solve_eg_time_sum(in, opt).allocation,
                                                         sample_realizations(in, 30, {}, 4)));
  }, "evaluate");
  o.detail = std::to_string(compared) + " artifacts byte-identical across repeated runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Example 1 regression", criterion1},
      {"Example 2 regression", criterion2},
      {"leximin / EG equivalence suite", criterion3},
      {"budget identities", criterion4},
      {"equal surplus / equal ratio", criterion5},
      {"equilibrium audits on every solve", criterion6},
      {"smoothness example and gamma sweep", criterion7},
      {"brute-force grid oracles", criterion8},
      {"gradient checks", criterion9},
      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2zu: %s  %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
    for (const auto& f : o.failures) std::printf("              failed: %s\n", f.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed;
}
