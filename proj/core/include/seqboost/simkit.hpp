#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seqboost/sprt.hpp"

namespace seqboost {

/// One point of a preset's parameter grid. Fields that a preset does not vary
/// keep their defaults.
struct GridPoint {
  double delta = 0.0;
  double beta = 0.0;
  std::size_t population = 0;
};

struct ExperimentPreset {
  std::string name;
  double alpha = 0.05;
  std::vector<GridPoint> grid;
  std::size_t trials = 0;
  std::uint64_t seed = 20240601;
  std::size_t max_samples = kDefaultMaxSamples;
  // Alternative mean for fig3 populations and null mean offsets.
  double mu0 = 0.0;
  double mu1 = 0.0;
  // Path length for the confidence-sequence preset.
  std::size_t horizon = 0;
};

/// Names accepted by make_preset, in a stable order.
const std::vector<std::string>& preset_names();

/// Throws std::invalid_argument for an unknown name.
ExperimentPreset make_preset(const std::string& name);

struct TrialRecord {
  std::string preset;
  std::size_t grid_index = 0;
  GridPoint point;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string method;
  // "alt" or "null": the law the observations were drawn from.
  std::string sampled_under;
  std::size_t stopping_time = 0;
  Decision decision = Decision::Undecided;
  double raw_lr_at_stop = 1.0;
  double boosted_wealth_at_stop = 1.0;
  std::size_t guard_fallbacks = 0;
  double max_verified_expectation = 0.0;
  double max_wealth = 1.0;
  // Not written to CSV so that output stays byte-stable.
  double wall_seconds = 0.0;
};

/// Called once per record, in (grid, trial) order.
using RecordSink = std::function<void(const TrialRecord&)>;

/// Runs every (grid point, trial) of the preset on `parallelism` threads
/// (0 picks the hardware concurrency). Each trial derives its random streams
/// from (seed, grid index, trial index), so the records do not depend on the
/// thread count. Records reach `sink` incrementally and in key order. A trial
/// that throws is reported through std::runtime_error naming the trial.
std::vector<TrialRecord> run_preset(const ExperimentPreset& preset, unsigned parallelism = 1,
                                    const RecordSink& sink = {});

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Importance-sampled type I error from runs sampled under the alternative:
/// mean of 1{reject} / Lambda_tau with its standard error. Throws
/// std::invalid_argument when a record lacks a positive raw likelihood ratio.
Estimate importance_sampling_type1(const std::vector<TrialRecord>& records);

/// Aggregates per (grid point, method).
struct SummaryRow {
  std::size_t grid_index = 0;
  GridPoint point;
  std::string method;
  std::size_t trials_alt = 0;
  std::size_t trials_null = 0;
  Estimate sample_size_alt;
  Estimate sample_size_null;
  // Rejection frequency under the null.
  std::optional<Estimate> type1;
  // Importance-sampled type I from the alternative runs (power-one presets).
  std::optional<Estimate> type1_is;
  // Non-rejection frequency under the alternative.
  std::optional<Estimate> type2;
  std::size_t guard_fallbacks = 0;
};

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

/// Rows of the boosting-factor tables.
struct BoostTableRow {
  double delta;
  double wealth;
  double nu;
  double boost_factor;
  double verified_expectation;
};

/// Boosting factors for delta in {0.1, 0.5, 1, 2, 3} and wealth in
/// {0.5, 1, 2, 4, 10}, one-sided when nu == 0.
std::vector<BoostTableRow> boost_table(double alpha, double nu);

/// Mean Robbins and boosted lower bounds over the trials of the
/// confidence-sequence preset, per time.
struct BoundTableRow {
  std::size_t t;
  double robbins_lower;
  double boosted_lower;
};

std::vector<BoundTableRow> confseq_table(const ExperimentPreset& preset, unsigned parallelism = 1);

}  // namespace seqboost
