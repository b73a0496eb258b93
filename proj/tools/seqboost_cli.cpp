// Command-line front end: boosting tables, simulation presets, confidence
// sequences, without-replacement audits and conformal tests.
//
// Exit codes: 0 success, 1 usage error, 2 a boosting factor fell back to 1,
// 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqboost/conformal.hpp"
#include "seqboost/confseq.hpp"
#include "seqboost/csv.hpp"
#include "seqboost/rng.hpp"
#include "seqboost/simkit.hpp"
#include "seqboost/sprt.hpp"
#include "seqboost/wor.hpp"

namespace {

using namespace seqboost;

enum ExitCode : int { kOk = 0, kUsage = 1, kGuardFallback = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> max_samples;
  std::string out;
  unsigned parallelism = 0;
  bool log_steps = false;
};

void emit(const Globals& g, const std::string& content) {
  if (g.out.empty() || g.out == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
  } else {
    write_file(g.out, content);
  }
}

std::vector<double> read_input(const std::string& path) {
  try {
    return read_observations(path);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

std::string outcome_csv(const TestOutcome& o) {
  return "decision,stopping_time,boosted_wealth_at_stop,raw_wealth_at_stop,guard_fallbacks\n" +
         std::string(to_string(o.decision)) + "," + std::to_string(o.stopping_time) + "," +
         format_double(o.boosted_wealth_at_stop) + "," + format_double(o.raw_lr_at_stop) + "," +
         std::to_string(o.guard_fallbacks) + "\n";
}

int finish(std::size_t fallbacks) {
  if (fallbacks == 0) return kOk;
  std::cerr << "warning: " << fallbacks << " boosting factor(s) failed verification and were set to 1\n";
  return kGuardFallback;
}

int run_table(const Globals& g, double nu, bool with_nu) {
  const std::vector<BoostTableRow> rows = boost_table(g.alpha.value_or(0.05), nu);
  emit(g, boost_table_csv(rows, with_nu));
  std::size_t fallbacks = 0;
  for (const BoostTableRow& r : rows) fallbacks += r.verified_expectation > 1.0 + kGuardTolerance;
  return finish(fallbacks);
}

int run_simulate(const Globals& g, const std::string& name, const std::string& records_path) {
  if (name == "table2") return run_table(g, 0.0, false);
  if (name == "table3") return run_table(g, 0.4, true);
  ExperimentPreset p = make_preset(name);
  if (g.alpha) p.alpha = *g.alpha;
  if (g.seed) p.seed = *g.seed;
  if (g.trials) p.trials = *g.trials;
  if (g.max_samples) p.max_samples = *g.max_samples;
  if (g.beta) {
    // Collapse the two-sided part of the grid onto the requested beta.
    std::vector<GridPoint> grid;
    for (const GridPoint& pt : p.grid) {
      if (pt.beta > 0.0 && (grid.empty() || grid.back().delta != pt.delta)) grid.push_back({pt.delta, *g.beta, pt.population});
    }
    if (grid.empty()) throw UsageError("--beta does not apply to preset " + name);
    p.grid = grid;
  }
  const std::vector<TrialRecord> records = run_preset(p, g.parallelism);
  if (!records_path.empty()) write_file(records_path, records_csv(records));
  const std::vector<SummaryRow> summary = summarize(records);
  emit(g, summary_csv(summary));
  std::size_t fallbacks = 0;
  for (const SummaryRow& row : summary) fallbacks += row.guard_fallbacks;
  return finish(fallbacks);
}

int run_confseq(const Globals& g, const std::string& input, std::optional<double> delta, const std::string& side) {
  if (input.empty()) {
    ExperimentPreset p = make_preset("figS1");
    if (g.alpha) p.alpha = *g.alpha;
    if (g.seed) p.seed = *g.seed;
    if (g.trials) p.trials = *g.trials;
    if (delta) p.grid.front().delta = *delta;
    emit(g, bound_table_csv(confseq_table(p, g.parallelism)));
    return kOk;
  }
  const std::vector<double> xs = read_input(input);
  if (xs.empty()) throw UsageError(input + ": no observations");
  ConfSeqConfig cfg;
  cfg.alpha = g.alpha.value_or(0.05);
  cfg.delta = delta.value_or(tuned_delta(cfg.alpha, xs.size()));
  cfg.side = side == "lower" ? BoundSide::Lower : side == "upper" ? BoundSide::Upper : BoundSide::TwoSided;
  emit(g, trajectory_csv(confidence_trajectory(xs, cfg)));
  return kOk;
}

int run_wor(const Globals& g, const std::string& path, double mu0, double mu1, bool no_boost) {
  const std::vector<double> draws = read_input(path);
  if (draws.empty()) throw UsageError(path + ": empty population");
  WorConfig cfg;
  cfg.population = draws.size();
  cfg.mu0 = mu0;
  cfg.mu1 = mu1;
  cfg.alpha = g.alpha.value_or(0.05);
  cfg.boost = !no_boost;
  cfg.log_steps = g.log_steps;
  const TestOutcome out = run_wor_boosted(from_vector(draws), cfg);
  emit(g, g.log_steps ? steps_csv(out.steps) : outcome_csv(out));
  return finish(out.guard_fallbacks);
}

int run_conformal(const Globals& g, const std::string& path, double kappa, bool no_boost) {
  const std::vector<double> xs = read_input(path);
  ConformalConfig cfg;
  cfg.alpha = g.alpha.value_or(0.05);
  cfg.kappa = [kappa](std::size_t) { return kappa; };
  cfg.max_samples = g.max_samples.value_or(kDefaultMaxSamples);
  cfg.boost = !no_boost;
  cfg.log_steps = g.log_steps;
  Rng tie_rng = make_rng(g.seed.value_or(20240601), 0, 0, StreamRole::TieBreak);
  std::uniform_real_distribution<double> unit;
  const DistanceToMeanMeasure measure;
  const TestOutcome out = run_conformal_boosted(from_vector(xs), measure, cfg, [&] { return unit(tie_rng); });
  emit(g, g.log_steps ? steps_csv(out.steps) : outcome_csv(out));
  return finish(out.guard_fallbacks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boosted sequential tests: tables, simulations and data-driven runs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--alpha", g.alpha, "Type I error level")->check(CLI::Range(0.0, 1.0));
  app.add_option("--beta", g.beta, "Type II error level for two-sided presets")->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--trials", g.trials, "Trials per grid point");
  app.add_option("--max-samples", g.max_samples, "Observation cap per run")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output CSV path (default: standard output)");
  app.add_option("--parallelism", g.parallelism, "Worker threads (0: all cores)");
  app.add_flag("--log-steps", g.log_steps, "Emit per-step logs instead of the outcome row");

  app.add_subcommand("table2", "One-sided boosting factors on the standard grid");
  double table3_nu = 0.4;
  auto* table3 = app.add_subcommand("table3", "Boosting factors with a futility stop");
  table3->add_option("--nu", table3_nu, "Futility level")->check(CLI::NonNegativeNumber);

  std::string preset;
  std::string records_path;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation preset and print its summary");
  simulate->add_option("--preset", preset, "Preset name")->required()->check(CLI::IsMember(preset_names()));
  simulate->add_option("--records", records_path, "Also write per-trial records to this path");

  std::string cs_input;
  std::optional<double> cs_delta;
  std::string cs_side = "two";
  auto* confseq = app.add_subcommand("confseq", "Confidence sequence for a Gaussian mean");
  confseq->add_option("--input", cs_input, "Observations, one per line (default: simulated paths)");
  confseq->add_option("--delta", cs_delta, "Bet size")->check(CLI::PositiveNumber);
  confseq->add_option("--side", cs_side, "lower, upper or two")->check(CLI::IsMember({"lower", "upper", "two"}));

  std::string population;
  double mu0 = 0.5;
  double mu1 = 0.55;
  bool wor_no_boost = false;
  auto* wor = app.add_subcommand("wor", "Audit a binary population sampled without replacement");
  wor->add_option("--population", population, "0/1 draws in sampling order, one per line")->required();
  wor->add_option("--mu0", mu0, "Null mean")->check(CLI::Range(0.0, 1.0));
  wor->add_option("--mu1", mu1, "Alternative mean used by the bet")->check(CLI::Range(0.0, 1.0));
  wor->add_flag("--no-boost", wor_no_boost, "Run the plain martingale");

  std::string conformal_input;
  double kappa = 0.5;
  bool conformal_no_boost = false;
  auto* conformal = app.add_subcommand("conformal", "Test exchangeability of a sequence");
  conformal->add_option("--input", conformal_input, "Observations, one per line")->required();
  conformal->add_option("--kappa", kappa, "Power-bet exponent in (0, 1)")->check(CLI::Range(0.0, 1.0));
  conformal->add_flag("--no-boost", conformal_no_boost, "Run the plain martingale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const std::string& name = sub->get_name();
    if (name == "table2") return run_table(g, 0.0, false);
    if (name == "table3") return run_table(g, table3_nu, true);
    if (name == "simulate") return run_simulate(g, preset, records_path);
    if (name == "confseq") return run_confseq(g, cs_input, cs_delta, cs_side);
    if (name == "wor") return run_wor(g, population, mu0, mu1, wor_no_boost);
    if (name == "conformal") return run_conformal(g, conformal_input, kappa, conformal_no_boost);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
