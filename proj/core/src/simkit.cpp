#include "seqboost/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "seqboost/boost_solver.hpp"
#include "seqboost/confseq.hpp"
#include "seqboost/rng.hpp"
#include "seqboost/wor.hpp"

namespace seqboost {

namespace {

const std::vector<double> kFig1Deltas{0.2, 0.4, 0.6, 0.8, 1.0};
const std::vector<double> kFig4Betas{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
const std::vector<std::size_t> kFig3Populations{500, 1000, 2000, 5000};
constexpr double kFig4Delta = 0.3;

std::vector<GridPoint> delta_grid(double beta = 0.0) {
  std::vector<GridPoint> g;
  for (double d : kFig1Deltas) g.push_back({d, beta, 0});
  return g;
}

std::vector<GridPoint> beta_grid() {
  std::vector<GridPoint> g;
  for (double b : kFig4Betas) g.push_back({kFig4Delta, b, 0});
  return g;
}

// Replays one lazily drawn i.i.d. stream to any number of consumers, so that
// competing methods see identical observations.
class SharedStream {
 public:
  SharedStream(const GaussianLRModel& model, std::uint64_t seed, bool under_alternative)
      : model_(model), rng_(seed), alt_(under_alternative) {}

  ObservationSource cursor() {
    auto pos = std::make_shared<std::size_t>(0);
    return [this, pos]() -> std::optional<double> {
      while (*pos >= buffer_.size()) {
        buffer_.push_back(alt_ ? model_.sample_alt(rng_)->observation : model_.sample_null(rng_).observation);
      }
      return buffer_[(*pos)++];
    };
  }

 private:
  const GaussianLRModel& model_;
  Rng rng_;
  bool alt_;
  std::vector<double> buffer_;
};

TrialRecord base_record(const ExperimentPreset& p, std::size_t g, std::size_t trial, std::uint64_t seed) {
  TrialRecord r;
  r.preset = p.name;
  r.grid_index = g;
  r.point = p.grid[g];
  r.trial = trial;
  r.seed = seed;
  return r;
}

TrialRecord fill(TrialRecord r, std::string method, std::string under, const TestOutcome& o) {
  r.method = std::move(method);
  r.sampled_under = std::move(under);
  r.stopping_time = o.stopping_time;
  r.decision = o.decision;
  r.raw_lr_at_stop = o.raw_lr_at_stop;
  r.boosted_wealth_at_stop = o.boosted_wealth_at_stop;
  r.guard_fallbacks = o.guard_fallbacks;
  r.max_verified_expectation = o.max_verified_expectation;
  r.max_wealth = o.max_wealth;
  return r;
}

using Timer = std::chrono::steady_clock;

template <class Fn>
TrialRecord timed(Fn&& fn) {
  const auto start = Timer::now();
  TrialRecord r = fn();
  r.wall_seconds = std::chrono::duration<double>(Timer::now() - start).count();
  return r;
}

std::vector<TrialRecord> run_power_one_trial(const ExperimentPreset& p, std::size_t g, std::size_t trial,
                                             bool siegmund) {
  const GridPoint& pt = p.grid[g];
  const std::uint64_t seed = derive_seed(p.seed, g, trial, StreamRole::Data);
  const GaussianLRModel model(0.0, pt.delta);
  SharedStream stream(model, seed, true);
  RunOptions opt;
  opt.alpha = p.alpha;
  opt.max_samples = p.max_samples;
  const TrialRecord base = base_record(p, g, trial, seed);
  std::vector<TrialRecord> out;
  out.push_back(timed([&] { return fill(base, "boosted", "alt", run_power_one_boosted(stream.cursor(), model, opt)); }));
  if (siegmund) {
    const Thresholds th = baseline_thresholds(RuleMode::Siegmund, Level(p.alpha), pt.delta);
    out.push_back(timed([&] {
      return fill(base, "siegmund", "alt", run_baseline(stream.cursor(), model, {th.upper, 0.0}, opt));
    }));
  } else {
    opt.boost = false;
    out.push_back(timed([&] { return fill(base, "plain", "alt", run_power_one_boosted(stream.cursor(), model, opt)); }));
  }
  return out;
}

std::vector<TrialRecord> run_plugin_trial(const ExperimentPreset& p, std::size_t g, std::size_t trial) {
  const GridPoint& pt = p.grid[g];
  const std::uint64_t seed = derive_seed(p.seed, g, trial, StreamRole::Data);
  const GaussianLRModel truth(0.0, pt.delta);
  SharedStream stream(truth, seed, true);
  RunOptions opt;
  opt.alpha = p.alpha;
  opt.max_samples = p.max_samples;
  const PluginSchedule plugin = smoothed_mle_plugin(0.0);
  const TrialRecord base = base_record(p, g, trial, seed);
  std::vector<TrialRecord> out;
  out.push_back(timed([&] { return fill(base, "boosted", "alt", run_power_one_plugin(stream.cursor(), plugin, 0.0, opt)); }));
  opt.boost = false;
  out.push_back(timed([&] { return fill(base, "plain", "alt", run_power_one_plugin(stream.cursor(), plugin, 0.0, opt)); }));
  return out;
}

std::vector<TrialRecord> run_wor_trial(const ExperimentPreset& p, std::size_t g, std::size_t trial) {
  const std::size_t n = p.grid[g].population;
  const std::uint64_t seed = derive_seed(p.seed, g, trial, StreamRole::Population);
  Rng rng(seed);
  const auto ones = static_cast<std::size_t>(std::llround(p.mu1 * static_cast<double>(n)));
  const std::vector<double> pop = shuffled_population(n, ones, rng);
  WorConfig cfg;
  cfg.population = n;
  cfg.mu0 = p.mu0;
  cfg.mu1 = p.mu1;
  cfg.alpha = p.alpha;
  const TrialRecord base = base_record(p, g, trial, seed);
  std::vector<TrialRecord> out;
  out.push_back(timed([&] { return fill(base, "boosted", "alt", run_wor_boosted(from_vector(pop), cfg)); }));
  cfg.boost = false;
  out.push_back(timed([&] { return fill(base, "plain", "alt", run_wor_boosted(from_vector(pop), cfg)); }));
  return out;
}

std::vector<TrialRecord> run_two_sided_trial(const ExperimentPreset& p, std::size_t g, std::size_t trial,
                                             bool siegmund) {
  const GridPoint& pt = p.grid[g];
  const GaussianLRModel model(0.0, pt.delta);
  const Level level(p.alpha, pt.beta);
  RunOptions opt;
  opt.alpha = p.alpha;
  opt.beta = pt.beta;
  opt.max_samples = p.max_samples;
  std::vector<TrialRecord> out;
  for (const bool alt : {true, false}) {
    const std::uint64_t seed = derive_seed(p.seed, g, trial, alt ? StreamRole::Data : StreamRole::NullData);
    SharedStream stream(model, seed, alt);
    const TrialRecord base = base_record(p, g, trial, seed);
    const std::string under = alt ? "alt" : "null";
    out.push_back(timed([&] { return fill(base, "boosted", under, run_two_sided_boosted(stream.cursor(), model, opt)); }));
    const std::vector<RuleMode> baselines =
        siegmund ? std::vector<RuleMode>{RuleMode::Siegmund}
                 : std::vector<RuleMode>{RuleMode::WaldApprox, RuleMode::WaldConservative};
    for (RuleMode mode : baselines) {
      const Thresholds th = baseline_thresholds(mode, level, pt.delta);
      out.push_back(timed([&] { return fill(base, to_string(mode), under, run_baseline(stream.cursor(), model, th, opt)); }));
    }
  }
  return out;
}

std::vector<TrialRecord> run_confseq_trial(const ExperimentPreset& p, std::size_t g, std::size_t trial) {
  const std::uint64_t seed = derive_seed(p.seed, g, trial, StreamRole::Data);
  Rng rng(seed);
  std::normal_distribution<double> noise;
  std::vector<double> xs(p.horizon);
  for (double& x : xs) x = p.mu1 + noise(rng);
  ConfSeqConfig cfg;
  cfg.alpha = p.alpha;
  cfg.delta = p.grid[g].delta;
  const TrialRecord base = base_record(p, g, trial, seed);
  std::vector<TrialRecord> out;
  for (const bool boost : {true, false}) {
    cfg.boost = boost;
    out.push_back(timed([&] {
      TrialRecord r = base;
      r.method = boost ? "boosted" : "robbins";
      r.sampled_under = "null";
      const auto hit = rejection_time(xs, p.mu1, p.alpha, cfg);
      r.decision = hit ? Decision::RejectNull : Decision::Undecided;
      r.stopping_time = hit ? *hit : xs.size();
      return r;
    }));
  }
  return out;
}

std::vector<TrialRecord> run_trial(const ExperimentPreset& p, std::size_t g, std::size_t trial) {
  const std::string& n = p.name;
  if (n == "fig1" || n == "fig1_alpha001") return run_power_one_trial(p, g, trial, false);
  if (n == "fig2") return run_plugin_trial(p, g, trial);
  if (n == "fig3") return run_wor_trial(p, g, trial);
  if (n == "fig4" || n == "fig4_alpha001") return run_two_sided_trial(p, g, trial, false);
  if (n == "figS1") return run_confseq_trial(p, g, trial);
  if (n == "siegmund_compare") {
    return p.grid[g].beta > 0.0 ? run_two_sided_trial(p, g, trial, true) : run_power_one_trial(p, g, trial, true);
  }
  return {};
}

// Runs fn(i) for i in [0, n) on up to `parallelism` threads. The first
// exception is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned parallelism, Fn&& fn) {
  unsigned threads = parallelism == 0 ? std::max(1u, std::thread::hardware_concurrency()) : parallelism;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed) {
      const std::size_t i = next++;
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

Estimate mean_and_se(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

bool importance_weighted(const TrialRecord& r) {
  return (r.preset == "fig1" || r.preset == "fig1_alpha001" ||
          (r.preset == "siegmund_compare" && r.point.beta == 0.0)) &&
         r.sampled_under == "alt";
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"table2", "table3", "fig1", "fig1_alpha001", "fig2", "fig3",
                                              "fig4", "fig4_alpha001", "figS1", "siegmund_compare"};
  return names;
}

ExperimentPreset make_preset(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  if (name == "table2" || name == "table3") {
    p.trials = 0;
  } else if (name == "fig1" || name == "fig1_alpha001") {
    p.alpha = name == "fig1" ? 0.05 : 0.01;
    p.grid = delta_grid();
    p.trials = 10000;
  } else if (name == "fig2") {
    p.grid = delta_grid();
    p.trials = 10000;
  } else if (name == "fig3") {
    p.alpha = 0.01;
    p.mu0 = 0.5;
    p.mu1 = 0.55;
    for (std::size_t n : kFig3Populations) p.grid.push_back({0.0, 0.0, n});
    p.trials = 1000;
  } else if (name == "fig4" || name == "fig4_alpha001") {
    p.alpha = name == "fig4" ? 0.05 : 0.01;
    p.grid = beta_grid();
    p.trials = 10000;
  } else if (name == "figS1") {
    p.mu1 = 2.0;
    p.horizon = 100;
    p.grid.push_back({tuned_delta(p.alpha, 50), 0.0, 0});
    p.trials = 100;
  } else if (name == "siegmund_compare") {
    p.grid = delta_grid();
    for (const GridPoint& pt : beta_grid()) p.grid.push_back(pt);
    p.trials = 10000;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return p;
}

std::vector<TrialRecord> run_preset(const ExperimentPreset& preset, unsigned parallelism, const RecordSink& sink) {
  const std::size_t units = preset.grid.size() * preset.trials;
  std::vector<std::vector<TrialRecord>> slots(units);
  std::vector<char> done(units, 0);
  std::size_t emitted = 0;
  std::mutex emit_mutex;

  parallel_for(units, parallelism, [&](std::size_t i) {
    const std::size_t g = i / preset.trials;
    const std::size_t trial = i % preset.trials;
    std::vector<TrialRecord> recs;
    try {
      recs = run_trial(preset, g, trial);
    } catch (const std::exception& e) {
      throw std::runtime_error(preset.name + " grid " + std::to_string(g) + " trial " + std::to_string(trial) +
                               ": " + e.what());
    }
    std::lock_guard lock(emit_mutex);
    slots[i] = std::move(recs);
    done[i] = 1;
    while (emitted < units && done[emitted]) {
      if (sink) {
        for (const TrialRecord& r : slots[emitted]) sink(r);
      }
      ++emitted;
    }
  });

  std::vector<TrialRecord> out;
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  return out;
}

Estimate importance_sampling_type1(const std::vector<TrialRecord>& records) {
  std::vector<double> w;
  w.reserve(records.size());
  for (const TrialRecord& r : records) {
    if (!(r.raw_lr_at_stop > 0.0) || std::isnan(r.raw_lr_at_stop)) {
      throw std::invalid_argument("importance sampling: record without a positive raw likelihood ratio");
    }
    w.push_back(r.decision == Decision::RejectNull ? 1.0 / r.raw_lr_at_stop : 0.0);
  }
  return mean_and_se(w);
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::size_t, std::string>, std::size_t> index;
  std::vector<std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) {
    const auto key = std::make_pair(r.grid_index, r.method);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      SummaryRow row;
      row.grid_index = r.grid_index;
      row.point = r.point;
      row.method = r.method;
      rows.push_back(row);
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    SummaryRow& row = rows[k];
    std::vector<double> n_alt, n_null, rej_null, miss_alt;
    std::vector<TrialRecord> weighted;
    for (const TrialRecord* r : groups[k]) {
      row.guard_fallbacks += r->guard_fallbacks;
      const double n = static_cast<double>(r->stopping_time);
      const bool rejected = r->decision == Decision::RejectNull;
      if (r->sampled_under == "alt") {
        n_alt.push_back(n);
        miss_alt.push_back(rejected ? 0.0 : 1.0);
        if (importance_weighted(*r)) weighted.push_back(*r);
      } else {
        n_null.push_back(n);
        rej_null.push_back(rejected ? 1.0 : 0.0);
      }
    }
    row.trials_alt = n_alt.size();
    row.trials_null = n_null.size();
    row.sample_size_alt = mean_and_se(n_alt);
    row.sample_size_null = mean_and_se(n_null);
    if (!rej_null.empty()) row.type1 = mean_and_se(rej_null);
    if (!weighted.empty()) row.type1_is = importance_sampling_type1(weighted);
    if (!miss_alt.empty() && row.point.beta > 0.0) row.type2 = mean_and_se(miss_alt);
  }
  return rows;
}

std::vector<BoostTableRow> boost_table(double alpha, double nu) {
  std::vector<BoostTableRow> rows;
  for (double delta : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const GaussianLRModel model(0.0, delta);
    for (double wealth : {0.5, 1.0, 2.0, 4.0, 10.0}) {
      const BoostResult r = solve_boost_two_sided(model, wealth, nu, alpha);
      rows.push_back({delta, wealth, nu, r.b, r.verified_expectation});
    }
  }
  return rows;
}

std::vector<BoundTableRow> confseq_table(const ExperimentPreset& preset, unsigned parallelism) {
  if (preset.horizon == 0 || preset.grid.empty()) throw std::invalid_argument("confseq_table: preset has no horizon");
  std::vector<BoundTrajectory> paths(preset.trials);
  parallel_for(preset.trials, parallelism, [&](std::size_t trial) {
    Rng rng(derive_seed(preset.seed, 0, trial, StreamRole::Data));
    std::normal_distribution<double> noise;
    std::vector<double> xs(preset.horizon);
    for (double& x : xs) x = preset.mu1 + noise(rng);
    ConfSeqConfig cfg;
    cfg.alpha = preset.alpha;
    cfg.delta = preset.grid.front().delta;
    cfg.side = BoundSide::Lower;
    paths[trial] = confidence_trajectory(xs, cfg);
  });
  std::vector<BoundTableRow> rows;
  for (std::size_t t = 0; t < preset.horizon; ++t) {
    double r = 0.0;
    double b = 0.0;
    for (const BoundTrajectory& p : paths) {
      r += p.robbins_lower[t];
      b += p.lower[t];
    }
    const double n = static_cast<double>(paths.size());
    rows.push_back({t + 1, r / n, b / n});
  }
  return rows;
}

}  // namespace seqboost
