#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cli/csv.hpp"
#include "cli/figures.hpp"
#include "seqdisc/error.hpp"
#include "seqdisc/infotheory.hpp"
#include "seqdisc/neumark.hpp"
#include "seqdisc/optimizers.hpp"
#include "seqdisc/simulator.hpp"

namespace seqdisc::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void close_file(std::ofstream& f, const std::string& path) {
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::MinFailure: return "min-failure";
    case Scheme::SuccessOnly: return "success-only";
    case Scheme::FlipFlop: return "flip-flop";
  }
  return "";
}

Json strategy_json(const SequentialStrategy& st) {
  Json j;
  j["t"] = st.t();
  j["q1b"] = st.q1b();
  j["q2b"] = st.q2b();
  j["q1c"] = st.q1c();
  j["q2c"] = st.q2c();
  return j;
}

Json problem_json(const DiscriminationProblem& p) {
  Json j;
  j["s"] = p.s();
  j["eta1"] = p.eta1();
  j["eta2"] = p.eta2();
  return j;
}

Json matrix_json(const Matrix6c& m) {
  Json rows = Json::array();
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 6; ++k) rows.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
  }
  return rows;
}

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// Success-family optimum for the POVM schemes.
OptimizationResult povm_optimum(const DiscriminationProblem& p, Scheme scheme) {
  return scheme == Scheme::MinFailure ? optimize_minfail_success(p) : optimize_success_only(p);
}

double flip_rate(const RunConfig& cfg) { return cfg.c.value_or(cfg.eta1); }

// Closed-form counterparts of everything SimulationStats estimates.
struct Expectation {
  double p_ss = 0, p_ff = 0, bob = 0, charlie = 0;
  std::array<double, 2> bob_given{}, charlie_given{}, joint_given{};
  double mi_ab = 0, mi_ac = 0, mi_bc = 0;
};

Expectation expect_rates(const DiscriminationProblem& p, double q1b, double q2b, double q1c,
                         double q2c) {
  Expectation e;
  const double e1 = p.eta1();
  const double e2 = p.eta2();
  e.bob_given = {1 - q1b, 1 - q2b};
  e.charlie_given = {1 - q1c, 1 - q2c};
  e.joint_given = {(1 - q1b) * (1 - q1c), (1 - q2b) * (1 - q2c)};
  e.p_ss = e1 * e.joint_given[0] + e2 * e.joint_given[1];
  e.p_ff = e1 * q1b * q1c + e2 * q2b * q2c;
  e.bob = e1 * e.bob_given[0] + e2 * e.bob_given[1];
  e.charlie = e1 * e.charlie_given[0] + e2 * e.charlie_given[1];
  e.mi_ab = mi_usd_observer(p, q1b, q2b);
  e.mi_ac = mi_usd_observer(p, q1c, q2c);
  return e;
}

struct SimulationPlan {
  DiscriminationProblem problem;
  TrialKernel kernel;
  bool has_charlie = true;
  Expectation expected;
  Json setup;
};

SimulationPlan plan_simulation(const RunConfig& cfg) {
  const DiscriminationProblem p = make_problem(cfg.s, cfg.eta1);
  if (cfg.trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be at least 1");
  if (cfg.scheme == Scheme::FlipFlop) {
    const FlipFlopStrategy ff(flip_rate(cfg));
    Json setup;
    setup["c"] = ff.c();
    if (cfg.two_party) {
      const auto single = ff_single(p, ff);
      Expectation e;
      e.bob_given = {1 - single.q1, 1 - single.q2};
      e.bob = single.p_succ;
      e.p_ff = p.eta1() * single.q1 + p.eta2() * single.q2;
      e.mi_ab = mi_usd_observer(p, single.q1, single.q2);
      setup["two_party"] = true;
      return {p, flipflop_single_kernel(p, ff, cfg.seed, cfg.stream), false, e, setup};
    }
    const auto r = ff_sequential_rates(p, ff);
    Expectation e = expect_rates(p, r.q1b, r.q2b, r.q1c, r.q2c);
    e.mi_bc = mi_ff_bc(p, ff, std::sqrt(p.s()));
    setup["two_party"] = false;
    return {p, flipflop_sequential_kernel(p, ff, cfg.seed, cfg.stream), true, e, setup};
  }
  const OptimizationResult opt = povm_optimum(p, cfg.scheme);
  const auto& st = opt.strategy;
  Expectation e = expect_rates(p, st.q1b(), st.q2b(), st.q1c(), st.q2c());
  e.mi_bc = mi_usd_bc(p, st).mi;
  Json setup;
  setup["strategy"] = strategy_json(st);
  setup["regime"] = seqdisc::to_string(opt.regime);
  return {p, sequential_kernel(p, st, cfg.seed, cfg.stream), true, e, setup};
}

Json compare(const Estimate& est, double analytic) {
  Json j;
  j["estimate"] = est.value;
  j["std_error"] = est.std_error;
  j["analytic"] = analytic;
  const double sigma = std::sqrt(analytic * (1 - analytic) / static_cast<double>(std::max<std::size_t>(est.n, 1)));
  double z = 0.0;
  if (sigma > 0) z = (est.value - analytic) / sigma;
  else if (est.value != analytic) z = std::numeric_limits<double>::infinity();
  j["z"] = nullable(z);
  j["n"] = est.n;
  return j;
}

Json stats_json(const SimulationPlan& plan, const SimulationStats& st, const RunConfig& cfg) {
  const Expectation& e = plan.expected;
  Json j;
  j["command"] = cfg.command == Command::Qkd ? "qkd" : "simulate";
  j["problem"] = problem_json(plan.problem);
  j["scheme"] = to_string(cfg.scheme);
  j["setup"] = plan.setup;
  j["trials"] = st.n;
  j["seed"] = cfg.seed;
  j["stream"] = cfg.stream;
  j["misidentifications"] = st.misidentifications;
  Json est;
  est["bob_success"] = compare(st.bob_success, e.bob);
  est["bob_success_state1"] = compare(st.bob_success_given[0], e.bob_given[0]);
  est["bob_success_state2"] = compare(st.bob_success_given[1], e.bob_given[1]);
  if (plan.has_charlie) {
    est["p_ss"] = compare(st.p_ss, e.p_ss);
    est["p_ff"] = compare(st.p_ff, e.p_ff);
    est["charlie_success"] = compare(st.charlie_success, e.charlie);
    est["charlie_success_state1"] = compare(st.charlie_success_given[0], e.charlie_given[0]);
    est["charlie_success_state2"] = compare(st.charlie_success_given[1], e.charlie_given[1]);
    est["joint_success_state1"] = compare(st.joint_success_given[0], e.joint_given[0]);
    est["joint_success_state2"] = compare(st.joint_success_given[1], e.joint_given[1]);
  } else {
    // Bob alone: P_ff is his inconclusive rate.
    Estimate fail = st.bob_success;
    fail.value = 1 - fail.value;
    est["p_fail"] = compare(fail, e.p_ff);
  }
  j["estimates"] = est;
  Json info;
  info["ab"] = {{"empirical", st.mi_ab}, {"analytic", e.mi_ab}};
  if (plan.has_charlie) {
    info["ac"] = {{"empirical", st.mi_ac}, {"analytic", e.mi_ac}};
    info["bc"] = {{"empirical", st.mi_bc}, {"analytic", e.mi_bc}};
  }
  j["information"] = info;
  double worst = 0.0;
  for (const auto& [name, entry] : est.items()) {
    const auto& z = entry["z"];
    worst = std::max(worst, z.is_null() ? std::numeric_limits<double>::infinity()
                                        : std::abs(z.get<double>()));
  }
  j["max_abs_z"] = nullable(worst);
  return j;
}

void write_output(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& emit) {
  if (cfg.output.empty()) {
    emit(out);
    return;
  }
  std::ofstream f = open_file(cfg.output);
  emit(f);
  close_file(f, cfg.output);
}

void check_range(double lo, double hi, double from, double to, const char* axis) {
  if (!(from >= lo && to <= hi)) {
    std::ostringstream os;
    os << "sweep over " << axis << " must stay within [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
}

}  // namespace

Json optimize_report(const RunConfig& cfg) {
  const DiscriminationProblem p = make_problem(cfg.s, cfg.eta1);
  Json j;
  j["command"] = "optimize";
  j["problem"] = problem_json(p);
  j["scheme"] = to_string(cfg.scheme);
  Json info;
  if (cfg.scheme == Scheme::FlipFlop) {
    const FlipFlopStrategy ff(flip_rate(cfg));
    const auto rates = ff_sequential_rates(p, ff);
    Json result;
    result["c"] = ff.c();
    result["rates"] = {{"q1b", rates.q1b}, {"q2b", rates.q2b}, {"q1c", rates.q1c}, {"q2c", rates.q2c}};
    result["p_ss"] = ff_sequential_joint(p, ff);
    result["p_ff"] = p.eta1() * rates.q1b * rates.q1c + p.eta2() * rates.q2b * rates.q2c;
    const auto single = ff_single(p, ff);
    result["single"] = {{"q1", single.q1}, {"q2", single.q2}, {"p_succ", single.p_succ}};
    const auto best_ab = optimize_mi_ff_ab(p);
    result["mi_ab_optimum"] = {{"c", best_ab.optimizer_arg}, {"mi", best_ab.mi}};
    j["result"] = result;
    info["guessing_ab"] = mi_guessing(p, rates.q1b, rates.q2b);
    info["usd_ab"] = mi_usd_observer(p, rates.q1b, rates.q2b);
    info["usd_ac"] = mi_usd_observer(p, rates.q1c, rates.q2c);
    info["usd_bc"] = mi_ff_bc(p, ff, std::sqrt(p.s()));
  } else {
    const OptimizationResult opt = povm_optimum(p, cfg.scheme);
    const auto& st = opt.strategy;
    Json result;
    result["strategy"] = strategy_json(st);
    result["p_ss"] = opt.p_ss;
    result["p_ff"] = opt.p_ff;
    result["regime"] = seqdisc::to_string(opt.regime);
    result["method"] = seqdisc::to_string(opt.method);
    if (cfg.scheme == Scheme::MinFailure) result["p_ff_opt"] = min_joint_failure(p).p_ff;
    j["result"] = result;
    info["guessing_ab"] = mi_guessing(p, st.q1b(), st.q2b());
    info["usd_ab"] = mi_usd_observer(p, st.q1b(), st.q2b());
    info["usd_ac"] = mi_usd_observer(p, st.q1c(), st.q2c());
    info["usd_bc"] = mi_usd_bc(p, st).mi;
    if (cfg.dump_unitaries) {
      j["unitaries"] = {{"bob", matrix_json(build_bob_unitary(p, st).matrix)},
                        {"charlie", matrix_json(build_charlie_unitary(p, st).matrix)}};
    }
  }
  info["helstrom"] = p.eta1() == 0.5 ? Json(helstrom_mi(p)) : Json(nullptr);
  j["information"] = info;
  return j;
}

void write_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.points < 2) throw Error(ErrorCode::OutOfRange, "sweep needs at least 2 points");
  if (!(cfg.from < cfg.to)) throw Error(ErrorCode::OutOfRange, "empty sweep range");
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  const auto grid = linspace(cfg.from, cfg.to, cfg.points);

  if (cfg.axis == "s" || cfg.axis == "eta1") {
    const bool over_s = cfg.axis == "s";
    if (over_s) check_range(0.0, 1.0, cfg.from, cfg.to, "s");
    else check_range(0.0, 1.0, cfg.from, cfg.to, "eta1");
    header = {cfg.axis, "p_ss_minfail", "p_ff_opt", "p_ss_success_only", "success_only_regime",
              "i_usd_ab_max", "i_usd_bc_max", "i_ff_ab_max"};
    for (double x : grid) {
      const DiscriminationProblem p = over_s ? make_problem(x, cfg.eta1) : make_problem(cfg.s, x);
      const auto so = optimize_success_only(p);
      rows.push_back({x, optimize_minfail_success(p).p_ss, min_joint_failure(p).p_ff, so.p_ss,
                      std::string(seqdisc::to_string(so.regime)), optimize_mi_usd_ab(p).mi,
                      optimize_mi_usd_bc(p).mi, optimize_mi_ff_ab(p).mi});
    }
  } else if (cfg.axis == "q1b") {
    const DiscriminationProblem p = make_problem(cfg.s, cfg.eta1);
    check_range(p.s(), 1.0, cfg.from, cfg.to, "q1b");
    header = {"q1b", "p_ss", "i_usd_bc"};
    for (double q : grid) rows.push_back({q, symmetric_success(p, q), mi_usd_bc_symmetric(p, q).mi});
  } else if (cfg.axis == "c") {
    const DiscriminationProblem p = make_problem(cfg.s, cfg.eta1);
    check_range(0.0, 1.0, cfg.from, cfg.to, "c");
    header = {"c", "q1_single", "q2_single", "p_succ_single", "p_ss_ff", "i_ff_ab", "i_ff_bc"};
    for (double c : grid) {
      const FlipFlopStrategy ff(c);
      const auto single = ff_single(p, ff);
      rows.push_back({c, single.q1, single.q2, single.p_succ, ff_sequential_joint(p, ff),
                      mi_ff_ab(p, ff).mi, mi_ff_bc(p, ff, std::sqrt(p.s()))});
    }
  } else {
    throw Error(ErrorCode::OutOfRange, "unknown sweep axis '" + cfg.axis + "'");
  }

  if (cfg.format == Format::Json) {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json obj;
      for (std::size_t i = 0; i < header.size(); ++i) {
        std::visit([&](const auto& v) { obj[header[i]] = v; }, row[i]);
      }
      arr.push_back(obj);
    }
    out << arr.dump(2) << '\n';
    return;
  }
  CsvWriter csv(out, header);
  for (const auto& row : rows) csv.row(row);
}

Json simulate_report(const RunConfig& cfg) {
  const SimulationPlan plan = plan_simulation(cfg);
  StatsAccumulator acc;
  std::ofstream ledger_file;
  if (!cfg.ledger_path.empty()) {
    ledger_file = open_file(cfg.ledger_path);
    write_ledger_header(ledger_file);
  }
  const std::size_t block = cfg.trials > kStreamingThreshold ? 1'000'000 : cfg.trials;
  stream_trials(plan.kernel, cfg.trials, block,
                [&](std::span<const TrialRecord> records, std::uint64_t first) {
                  acc.add(records);
                  if (ledger_file.is_open()) write_ledger_rows(ledger_file, records, first, plan.has_charlie);
                });
  if (ledger_file.is_open()) close_file(ledger_file, cfg.ledger_path);
  return stats_json(plan, acc.finish(), cfg);
}

Json qkd_report(const RunConfig& cfg) {
  const SimulationPlan plan = plan_simulation(cfg);
  TrialLedger ledger;
  ledger.seed = cfg.seed;
  ledger.stream = cfg.stream;
  ledger.has_charlie = plan.has_charlie;
  ledger.records.resize(cfg.trials);
  stream_trials(plan.kernel, cfg.trials, cfg.trials,
                [&](std::span<const TrialRecord> records, std::uint64_t first) {
                  std::copy(records.begin(), records.end(), ledger.records.begin() + first);
                });
  const KeyBundle keys = sift_keys(ledger);
  if (!cfg.ledger_path.empty()) {
    std::ofstream f = open_file(cfg.ledger_path);
    write_ledger_csv(f, ledger);
    close_file(f, cfg.ledger_path);
  }
  if (!cfg.keys_path.empty()) {
    std::ofstream f = open_file(cfg.keys_path);
    write_keys(f, keys);
    close_file(f, cfg.keys_path);
    const std::string sidecar = cfg.keys_path + ".json";
    std::ofstream g = open_file(sidecar);
    g << keys_sidecar_json(keys) << '\n';
    close_file(g, sidecar);
  }
  Json j = stats_json(plan, empirical_stats(ledger), cfg);
  const auto key_json = [](const SiftedKey& k) {
    return Json{{"rate", k.rate}, {"balance", k.balance}, {"n_conclusive", k.bits.size()},
                {"errors", k.errors}};
  };
  j["keys"] = {{"ab", key_json(keys.ab)}, {"ac", key_json(keys.ac)}, {"abc", key_json(keys.abc)}};
  return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Sequential unambiguous discrimination of two qubit states: optima, "
               "information measures, Monte Carlo and key sifting.",
               "seqdisc"};
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");

  const std::map<std::string, Command> commands{{"optimize", Command::Optimize},
                                                {"sweep", Command::Sweep},
                                                {"simulate", Command::Simulate},
                                                {"qkd", Command::Qkd},
                                                {"figure", Command::Figure}};
  const std::map<std::string, Scheme> schemes{{"min-failure", Scheme::MinFailure},
                                              {"success-only", Scheme::SuccessOnly},
                                              {"flip-flop", Scheme::FlipFlop}};
  const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}};
  std::optional<Format> format;
  double c_value = 0.0;

  app.add_option("command", cfg.command, "optimize | sweep | simulate | qkd | figure")
      ->required()
      ->transform(CLI::CheckedTransformer(commands, CLI::ignore_case).description(""));
  app.add_option("--s", cfg.s, "Overlap <psi1|psi2>, 0 <= s < 1");
  app.add_option("--eta1", cfg.eta1, "Prior of |psi1>, 0 < eta1 < 1");
  app.add_option("--scheme", cfg.scheme, "min-failure | success-only | flip-flop")
      ->transform(CLI::CheckedTransformer(schemes, CLI::ignore_case).description(""));
  auto* c_opt = app.add_option("--c", c_value, "Flip-flop rate (default: eta1)");
  app.add_flag("--two-party", cfg.two_party, "Flip-flop with Bob only (projective setups)");
  app.add_option("--axis", cfg.axis, "Sweep axis: s | eta1 | q1b | c");
  app.add_option("--from", cfg.from, "Sweep start");
  app.add_option("--to", cfg.to, "Sweep end");
  app.add_option("--points", cfg.points, "Sweep resolution (>= 2)");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials");
  app.add_option("--seed", cfg.seed, "64-bit seed");
  app.add_option("--stream", cfg.stream, "Independent stream index");
  app.add_option("--output,-o", cfg.output, "Output path (default stdout)");
  app.add_option("--format", format, "csv | json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""));
  app.add_option("--id", cfg.figure, "Figure id: fig1 ... fig9, figff");
  app.add_option("--resolution", cfg.resolution, "Figure grid points (>= 2)");
  app.add_option("--ledger", cfg.ledger_path, "Write the trial ledger CSV here");
  app.add_option("--keys", cfg.keys_path, "Write sifted keys here (sidecar: <path>.json)");
  app.add_flag("--dump-unitaries", cfg.dump_unitaries, "Include Bob and Charlie unitaries");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (c_opt->count() > 0) cfg.c = c_value;
  cfg.format = format.value_or(cfg.command == Command::Sweep ? Format::Csv : Format::Json);

  try {
    switch (cfg.command) {
      case Command::Optimize: {
        const Json j = optimize_report(cfg);
        write_output(cfg, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
        break;
      }
      case Command::Sweep: {
        std::ostringstream buffer;
        write_sweep(cfg, buffer);
        write_output(cfg, out, [&](std::ostream& o) { o << buffer.str(); });
        break;
      }
      case Command::Simulate: {
        const Json j = simulate_report(cfg);
        write_output(cfg, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
        break;
      }
      case Command::Qkd: {
        const Json j = qkd_report(cfg);
        write_output(cfg, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
        break;
      }
      case Command::Figure: {
        if (cfg.figure.empty()) throw Error(ErrorCode::UnknownFigure, "--id is required");
        std::ostringstream buffer;
        write_figure(cfg.figure, cfg.resolution, buffer);
        write_output(cfg, out, [&](std::ostream& o) { o << buffer.str(); });
        break;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::NumericalDegeneracy ? kExitRuntime : kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace seqdisc::cli
