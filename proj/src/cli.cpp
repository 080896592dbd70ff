#include "fairwork/cli.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairwork/audit.hpp"
#include "fairwork/error.hpp"
#include "fairwork/io.hpp"
#include "fairwork/leximin.hpp"
#include "fairwork/programs.hpp"
#include "fairwork/scenario.hpp"

namespace fairwork::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string in;
  std::string out;
  std::string budgets;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool verbose = false;
};

void add_common(CLI::App* app, Common& c, bool with_budgets = true) {
  app->add_option("--in", c.in, "instance JSON")->required();
  app->add_option("--out", c.out, "output path (default: stdout)");
  if (with_budgets) app->add_option("--budgets", c.budgets, "explicit | unit | demand (overrides the instance)");
  app->add_option("--tol", c.tol, "KKT residual tolerance")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "seed for the interior start point");
  app->add_flag("--verbose", c.verbose, "print the solver trace to stderr");
}

engine::Options solver_options(const Common& c) {
  engine::Options o;
  o.tol = c.tol;
  o.seed = c.seed;
  o.record_trace = c.verbose;
  return o;
}

MarketInstance load_instance(const Common& c) {
  MarketInstance inst = io::parse_instance(io::read_file(c.in));
  if (!c.budgets.empty()) inst.budget_mode = parse_budget_mode(c.budgets);
  const auto violations = validate_instance(inst);
  if (!violations.empty()) {
    std::string msg = c.in + ": invalid instance:";
    for (const auto& v : violations) msg += " " + v.rule + "(" + v.entity + ": " + v.detail + ")";
    throw Error(ErrorKind::invalid_instance, msg);
  }
  return inst;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

void print_trace(SolveReport& r, std::ostream& err) {
  for (const auto& e : r.trace) {
    char line[160];
    std::snprintf(line, sizeof line, "iter %4d  mu %.3e  f %.12g  decrement %.3e  step %.3e\n", e.iteration, e.mu,
                  e.objective, e.decrement, e.step);
    err << line;
  }
  char line[200];
  std::snprintf(line, sizeof line, "converged %s after %d iterations; kkt stationarity %.3e infeasibility %.3e complementarity %.3e\n",
                r.converged ? "yes" : "no", r.iterations, r.kkt.stationarity, r.kkt.primal_infeasibility,
                r.kkt.complementarity);
  err << line;
  r.trace.clear();
}

void domain_error(std::ostream& err, std::string_view kind, const std::string& message) {
  nlohmann::json o;
  o["error"] = std::string(kind);
  o["message"] = message;
  err << o.dump() << "\n";
}

std::vector<double> parse_gammas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("--gammas: '" + tok + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError("--gammas: need at least one value");
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair work allocation: Fisher-market programs, leximin, and equilibrium audits"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // solve
  Common solve_c;
  std::string program = "eg-demand", penalty;
  std::optional<double> gamma, band;
  auto* solve = app.add_subcommand("solve", "solve one convex program");
  add_common(solve, solve_c);
  solve->add_option("--program", program, "eg | eg-demand | eg-time-sum | eg-time-geo | eg-smooth");
  solve->add_option("--penalty", penalty, "absdev | kl (eg-smooth only)");
  solve->add_option("--gamma", gamma, "smoothness weight (eg-smooth only)");
  solve->add_option("--variation-band", band, "hard band r: (1-r) x^t <= x^{t+1} <= (1+r) x^t");

  // leximin
  Common lex_c;
  std::string mode;
  auto* lex = app.add_subcommand("leximin", "leximin-optimal allocation by staged max-min");
  add_common(lex, lex_c);
  lex->add_option("--mode", mode, "single | time-sum | time-indexed (default: single when T = 1, else time-sum)");

  // verify
  std::string verify_in, verify_report, verify_out;
  double audit_tol = kAuditTol;
  auto* verify = app.add_subcommand("verify", "run every applicable audit on a report");
  verify->add_option("--in", verify_in, "instance JSON")->required();
  verify->add_option("--report", verify_report, "report JSON")->required();
  verify->add_option("--out", verify_out, "audit JSON path (default: stdout)");
  verify->add_option("--tol", audit_tol, "relative audit tolerance")->check(CLI::PositiveNumber);

  // compare
  std::string cmp_a, cmp_b, cmp_out;
  double cmp_tol = 1e-4;
  auto* compare = app.add_subcommand("compare", "compare two reports by sorted utility profile");
  compare->add_option("--a", cmp_a, "first report")->required();
  compare->add_option("--b", cmp_b, "second report")->required();
  compare->add_option("--tol", cmp_tol, "profile gap tolerance")->check(CLI::PositiveNumber);
  compare->add_option("--out", cmp_out, "output path (default: stdout)");

  // sweep
  Common sweep_c;
  std::string sweep_penalty = "absdev", gammas_text, sweep_format = "csv";
  auto* sweep = app.add_subcommand("sweep", "eg-smooth over a list of gammas");
  add_common(sweep, sweep_c);
  sweep->add_option("--penalty", sweep_penalty, "absdev | kl");
  sweep->add_option("--gammas", gammas_text, "comma-separated, ascending")->required();
  sweep->add_option("--format", sweep_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  // gen
  GeneratorConfig gen_cfg;
  std::string gen_out, gen_valuation = "binary", gen_trend = "flat", gen_budgets = "unit";
  bool no_lone = false, no_zero = false;
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  gen->add_option("--buyers", gen_cfg.buyers, "work types");
  gen->add_option("--items", gen_cfg.items, "partners");
  gen->add_option("--periods", gen_cfg.periods, "time periods");
  gen->add_option("--density", gen_cfg.density, "extra edge probability");
  gen->add_option("--valuations", gen_valuation, "binary | bivalued | general");
  gen->add_option("--alpha", gen_cfg.alpha, "bivalued high value");
  gen->add_option("--beta", gen_cfg.beta, "bivalued low value");
  gen->add_option("--demand-scale", gen_cfg.demand_scale, "mean demand per period");
  gen->add_option("--trend", gen_trend, "flat | upward | downward | mixed");
  gen->add_option("--headroom", gen_cfg.headroom, "supply over peak demand");
  gen->add_option("--overall-cap", gen_cfg.overall_cap_factor, "overall supply as a fraction of the per-period sum");
  gen->add_option("--budgets", gen_budgets, "explicit | unit | demand");
  gen->add_option("--seed", gen_cfg.seed, "generator seed");
  gen->add_flag("--no-lone-edge", no_lone, "skip the buyer with a single exclusive item");
  gen->add_flag("--no-zero-demand", no_zero, "skip the zero-demand buyer");
  gen->add_option("--out", gen_out, "output path (default: stdout)");

  // evaluate
  std::string eval_in, eval_report, eval_out, eval_format = "csv";
  std::size_t eval_count = 200;
  NoiseModel noise;
  std::uint64_t eval_seed = 0;
  auto* evaluate = app.add_subcommand("evaluate", "shortfall of an allocation under sampled demand realizations");
  evaluate->add_option("--in", eval_in, "instance JSON")->required();
  evaluate->add_option("--report", eval_report, "report JSON")->required();
  evaluate->add_option("--realizations", eval_count, "number of sampled demand tensors");
  evaluate->add_option("--sigma", noise.sigma, "lognormal noise scale");
  evaluate->add_option("--spike-prob", noise.spike_probability, "spike chance per realization");
  evaluate->add_option("--spike-factor", noise.spike_factor, "spike multiplier");
  evaluate->add_option("--seed", eval_seed, "sampling seed");
  evaluate->add_option("--format", eval_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  evaluate->add_option("--out", eval_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*solve) {
      ProgramSpec spec;
      try {
        spec.kind = parse_program(program);
        if (!penalty.empty()) spec.penalty = parse_penalty(penalty);
      } catch (const Error& e) {
        throw UsageError(std::string(program.empty() ? "--penalty" : "--program/--penalty") + ": " + e.what());
      }
      if (gamma && spec.kind != ProgramKind::eg_smooth) throw UsageError("--gamma requires --program eg-smooth");
      if (!penalty.empty() && spec.kind != ProgramKind::eg_smooth) throw UsageError("--penalty requires --program eg-smooth");
      if (band && (spec.kind == ProgramKind::eg || spec.kind == ProgramKind::eg_demand)) {
        throw UsageError("--variation-band requires a multi-period program (eg-time-sum, eg-time-geo or eg-smooth)");
      }
      if (spec.kind == ProgramKind::eg_smooth) {
        spec.gamma = gamma.value_or(0.0);
        if (spec.penalty == Penalty::none) spec.penalty = Penalty::abs_dev;
      }
      spec.variation_band = band;
      const MarketInstance inst = load_instance(solve_c);
      SolveReport rep = solve_program(inst, spec, solver_options(solve_c));
      if (solve_c.verbose) print_trace(rep, err);
      emit(solve_c.out, io::report_to_json(rep), out);
      if (!rep.converged) {
        domain_error(err, error_kind_name(ErrorKind::not_converged), "solver stopped before reaching the KKT tolerance");
        return 1;
      }
      return 0;
    }

    if (*lex) {
      const MarketInstance inst = load_instance(lex_c);
      LeximinMode m = inst.periods == 1 ? LeximinMode::single : LeximinMode::time_sum;
      if (!mode.empty()) {
        try {
          m = parse_leximin_mode(mode);
        } catch (const Error& e) {
          throw UsageError(std::string("--mode: ") + e.what());
        }
      }
      LeximinResult res = leximin_solve(inst, m, solver_options(lex_c));
      if (lex_c.verbose) {
        for (const auto& s : res.report.stages) {
          err << "stage optimum " << io::format_double(s.optimum) << " frozen:";
          for (const auto& f : s.frozen) err << " " << f;
          err << "\n";
        }
        print_trace(res.report, err);
      }
      emit(lex_c.out, io::report_to_json(res.report), out);
      return res.report.converged ? 0 : 1;
    }

    if (*verify) {
      const MarketInstance inst = io::parse_instance(io::read_file(verify_in));
      const SolveReport rep = io::parse_report(io::read_file(verify_report));
      const auto records = run_all_audits(inst, rep, audit_tol);
      emit(verify_out, io::audit_to_json(records), out);
      return audits_pass(records) ? 0 : 1;
    }

    if (*compare) {
      const SolveReport a = io::parse_report(io::read_file(cmp_a));
      const SolveReport b = io::parse_report(io::read_file(cmp_b));
      const Comparison c = compare_solutions(a, b, cmp_tol);
      nlohmann::json o;
      o["equivalent"] = c.equivalent;
      o["max_profile_gap"] = c.max_profile_gap;
      o["profile"] = c.profile;
      o["verdict"] = c.equivalent ? "equivalent" : "not equivalent";
      emit(cmp_out, o.dump(2) + "\n", out);
      return 0;
    }

    if (*sweep) {
      Penalty p;
      try {
        p = parse_penalty(sweep_penalty);
      } catch (const Error& e) {
        throw UsageError(std::string("--penalty: ") + e.what());
      }
      const auto gammas = parse_gammas(gammas_text);
      const MarketInstance inst = load_instance(sweep_c);
      const auto rows = sweep_gamma(inst, p, gammas, solver_options(sweep_c));
      for (const auto& r : rows) {
        if (r.failed) err << "gamma " << io::format_double(r.gamma) << " failed: " << r.error << "\n";
      }
      if (sweep_format == "csv") {
        emit(sweep_c.out, io::sweep_to_csv(rows), out);
      } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
          auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
          arr.push_back({{"gamma", r.gamma},
                         {"objective", num(r.objective)},
                         {"total_variation", num(r.total_variation)},
                         {"penalty_value", num(r.penalty_value)},
                         {"converged", r.converged},
                         {"failed", r.failed}});
        }
        emit(sweep_c.out, arr.dump(2) + "\n", out);
      }
      return 0;
    }

    if (*gen) {
      try {
        gen_cfg.valuation = parse_valuation_mode(gen_valuation);
        gen_cfg.trend = parse_trend(gen_trend);
        gen_cfg.budget_mode = parse_budget_mode(gen_budgets);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      gen_cfg.lone_edge_buyer = !no_lone;
      gen_cfg.zero_demand_buyer = !no_zero;
      emit(gen_out, io::instance_to_json(generate(gen_cfg)), out);
      return 0;
    }

    if (*evaluate) {
      const MarketInstance inst = io::parse_instance(io::read_file(eval_in));
      const SolveReport rep = io::parse_report(io::read_file(eval_report));
      require_same_market(inst, rep);
      const auto batch = sample_realizations(inst, eval_count, noise, eval_seed);
      const auto metrics = evaluate_robustness(inst, rep.allocation, batch);
      emit(eval_out, eval_format == "csv" ? io::robustness_to_csv(inst, metrics) : io::robustness_summary_json(metrics), out);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    domain_error(err, error_kind_name(e.kind()), e.what());
    return 1;
  }
  return 2;
}

}  // namespace fairwork::cli
