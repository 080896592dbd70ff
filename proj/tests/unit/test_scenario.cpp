#include <doctest.h>

#include <cmath>

#include "fairwork/assumption.hpp"
#include "fairwork/error.hpp"
#include "fairwork/io.hpp"
#include "fairwork/programs.hpp"
#include "fairwork/scenario.hpp"
#include "fixtures.hpp"

using namespace fairwork;

TEST_CASE("generator") {
  GeneratorConfig cfg;
  cfg.seed = 7;
  const auto in = generate(cfg);
  CHECK(validate_instance(in).empty());
  CHECK(check_assumption_pos(in, SurplusRule::per_period).holds());
  CHECK(in.num_buyers() == 10);
  CHECK(in.num_items() == 4);
  CHECK(in.periods == 4);
  CHECK(in.valuations.is_binary());

  SUBCASE("deterministic") { CHECK(io::instance_to_json(in) == io::instance_to_json(generate(cfg))); }
  SUBCASE("different seeds differ") {
    auto other = cfg;
    other.seed = 8;
    CHECK(io::instance_to_json(in) != io::instance_to_json(generate(other)));
  }
  SUBCASE("lone-edge and zero-demand buyers") {
    const auto& lone = in.valuations.edges_of_buyer(9);
    REQUIRE(lone.size() == 1);
    CHECK(in.valuations.edges()[lone[0]].item == 0);
    CHECK(in.valuations.edges_of_item(0).size() == 1);
    CHECK(in.buyers[8].total_demand() == 0.0);
    auto dm = cfg;
    dm.budget_mode = BudgetMode::equal_to_demand;
    try {
      resolve_budgets(generate(dm));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::equal_to_demand_with_zero_demand);
    }
  }
  SUBCASE("undersupply fails the assumption downstream") {
    auto low = cfg;
    low.headroom = 0.5;
    CHECK(check_assumption_pos(generate(low), SurplusRule::per_period).feasible_margin < 0.0);
  }
  SUBCASE("bivalued and general valuations") {
    auto b = cfg;
    b.valuation = ValuationMode::bivalued;
    CHECK(generate(b).valuations.is_bivalued());
    b.valuation = ValuationMode::general;
    CHECK(validate_instance(generate(b)).empty());
  }
  SUBCASE("bad configs") {
    auto bad = cfg;
    bad.buyers = 0;
    CHECK_THROWS_AS(generate(bad), Error);
    bad = cfg;
    bad.density = 1.5;
    CHECK_THROWS_AS(generate(bad), Error);
  }
}

TEST_CASE("trends") {
  GeneratorConfig cfg;
  cfg.zero_demand_buyer = false;
  cfg.trend = Trend::upward;
  const auto up = generate(cfg);
  std::size_t rising = 0;
  for (const auto& b : up.buyers) rising += b.demand.back() > b.demand.front();
  CHECK(rising >= up.num_buyers() - 1);
  cfg.trend = Trend::downward;
  const auto down = generate(cfg);
  std::size_t falling = 0;
  for (const auto& b : down.buyers) falling += b.demand.back() < b.demand.front();
  CHECK(falling >= down.num_buyers() - 1);
}

TEST_CASE("realizations and robustness") {
  const auto in = fwtest::random_market(1, 3, ValuationMode::binary, BudgetMode::unit, 5);
  const auto batch = sample_realizations(in, 50, {}, 3);
  REQUIRE(batch.size() == 50);
  for (const auto& k : batch.demand)
    for (const auto& i : k)
      for (double d : i) CHECK((std::isfinite(d) && d >= 0.0));

  // allocation that exactly meets forecast demand
  Allocation exact(in.num_buyers(), in.num_items(), in.num_periods());
  for (std::size_t i = 0; i < in.num_buyers(); ++i) {
    const auto& e = in.valuations.edges()[in.valuations.edges_of_buyer(i)[0]];
    for (std::size_t t = 0; t < in.num_periods(); ++t) exact.at(i, e.item, t) = in.buyers[i].demand[t] / e.value;
  }
  RealizationBatch forecast;
  for (int k = 0; k < 3; ++k) {
    std::vector<std::vector<double>> d;
    for (const auto& b : in.buyers) d.push_back(b.demand);
    forecast.demand.push_back(d);
  }
  CHECK(evaluate_robustness(in, exact, forecast).coverage == doctest::Approx(1.0));
  const auto noisy = evaluate_robustness(in, exact, batch);
  CHECK(noisy.coverage < 1.0);
  CHECK(noisy.mean_shortfall > 0.0);
  CHECK(noisy.p95_shortfall >= noisy.mean_shortfall * 0.0);

  SUBCASE("coverage is monotone in uniform over-allocation") {
    const auto r = solve_eg_time_sum(in);
    double prev = -1.0;
    for (double c : {0.5, 0.8, 1.0}) {
      Allocation x = r.allocation;
      for (std::size_t i = 0; i < in.num_buyers(); ++i)
        for (std::size_t j = 0; j < in.num_items(); ++j)
          for (std::size_t t = 0; t < in.num_periods(); ++t) x.at(i, j, t) *= c;
      const double cov = evaluate_robustness(in, x, batch).coverage;
      CHECK(cov >= prev);
      prev = cov;
    }
  }
  SUBCASE("shape mismatch") {
    RealizationBatch bad;
    bad.demand.push_back({{1.0}});
    CHECK_THROWS_AS(evaluate_robustness(in, exact, bad), Error);
    CHECK_THROWS_AS(evaluate_robustness(in, Allocation(1, 1, 1), batch), Error);
  }
  SUBCASE("same seed, same batch") {
    CHECK(sample_realizations(in, 50, {}, 3).demand == batch.demand);
  }
}

TEST_CASE("gamma sweep") {
  GeneratorConfig cfg;
  cfg.trend = Trend::mixed;
  cfg.buyers = 5;
  cfg.items = 3;
  cfg.seed = 2;
  const auto in = generate(cfg);
  const auto rows = sweep_gamma(in, Penalty::abs_dev, {0.0, 0.005, 0.01, 0.05});
  REQUIRE(rows.size() == 4);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].penalty_value <= rows[k - 1].penalty_value + 1e-6);
    CHECK(rows[k].total_variation <= rows[k - 1].total_variation + 1e-6);
  }
  const auto geo = solve_eg_time_geo_mean(in);
  CHECK(rows[0].objective == doctest::Approx(geo.objective * static_cast<double>(in.periods)).epsilon(1e-6));

  CHECK_THROWS_AS(sweep_gamma(in, Penalty::abs_dev, {0.01, 0.0}), Error);
  CHECK_THROWS_AS(sweep_gamma(in, Penalty::abs_dev, {-1.0}), Error);

  SUBCASE("a failing row does not stop the sweep") {
    auto broken = in;
    broken.buyers[0].demand = std::vector<double>(in.num_periods(), 1e6);
    const auto bad = sweep_gamma(broken, Penalty::kl, {0.0, 0.1});
    REQUIRE(bad.size() == 2);
    CHECK(bad[0].failed);
    CHECK(std::isnan(bad[1].objective));
    CHECK_FALSE(bad[1].error.empty());
  }
}
