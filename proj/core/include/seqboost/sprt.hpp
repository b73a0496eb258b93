#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seqboost/boost_solver.hpp"
#include "seqboost/factor_model.hpp"
#include "seqboost/process.hpp"

namespace seqboost {

inline constexpr std::size_t kDefaultMaxSamples = 10000;
inline constexpr double kSiegmundRho = 0.583;

enum class Decision { RejectNull, AcceptNull, Undecided };

const char* to_string(Decision decision) noexcept;

enum class RuleMode {
  PowerOne,
  PowerOneUnboosted,
  TwoSidedFixedNu,
  TwoSidedCoupled,
  WaldApprox,
  WaldConservative,
  Siegmund,
};

const char* to_string(RuleMode mode) noexcept;

/// Rejection threshold gamma1 and acceptance threshold gamma0 of a raw
/// likelihood-ratio test.
struct Thresholds {
  double upper;
  double lower;
};

/// Fixed thresholds for the classical tests. `mu1` is the Gaussian mean
/// difference used by the Siegmund correction and ignored otherwise.
/// Throws std::invalid_argument for the boosted modes.
Thresholds baseline_thresholds(RuleMode mode, const Level& level, double mu1 = 0.0);

/// Pulls the next observation; std::nullopt when the source is exhausted.
using ObservationSource = std::function<std::optional<double>()>;

ObservationSource from_vector(std::vector<double> values);

/// Endless i.i.d. stream drawn from the model's null or alternative.
/// Throws std::invalid_argument when the model has no alternative sampler.
ObservationSource from_model(const FactorModel& model, Rng& rng, bool under_alternative);

/// Reads one number per line. Blank lines are skipped. Throws std::runtime_error
/// naming the file on open or parse failure.
std::vector<double> read_observations(const std::string& path);

/// A uniform draw on [0, 1] for randomized decisions.
using UniformSource = std::function<double()>;

struct RunOptions {
  double alpha = 0.05;
  double beta = 0.0;
  std::size_t max_samples = kDefaultMaxSamples;
  // With boost off, every b_t is 1 and the process is the plain truncated test.
  bool boost = true;
  bool log_steps = false;
};

struct StepLog {
  std::size_t t = 0;
  double observation = 0.0;
  double raw_factor = 1.0;
  double boost = 1.0;
  double boost_inv = 1.0;
  double nu = 0.0;
  double wealth = 1.0;
  double raw_wealth = 1.0;
  double wealth_inv = 1.0;
  double verified_expectation = 1.0;
};

struct TestOutcome {
  Decision decision = Decision::Undecided;
  std::size_t stopping_time = 0;
  // Unboosted likelihood ratio at the stop, for importance sampling.
  double raw_lr_at_stop = 1.0;
  double boosted_wealth_at_stop = 1.0;
  std::vector<StepLog> steps;
  std::size_t guard_fallbacks = 0;
  double max_verified_expectation = 0.0;
  double max_wealth = 1.0;
};

/// Boosted power-one SPRT for a simple alternative. Stops when the boosted
/// wealth reaches 1/alpha; Undecided when max_samples or the source runs out.
TestOutcome run_power_one_boosted(const ObservationSource& source, const LikelihoodRatioModel& model,
                                  const RunOptions& options);

/// Power-one test for unit-variance Gaussian data with null mean theta0 and a
/// predictable plugin alternative theta_t. A step with theta_t == theta0 has
/// factor 1 and boost 1.
TestOutcome run_power_one_plugin(const ObservationSource& source, const PluginSchedule& plugin, double theta0,
                                 const RunOptions& options);

/// Two-sided boosted SPRT with joint forward/inverse boosting for type I
/// control at alpha and type II control at beta. Requires beta > 0.
TestOutcome run_two_sided_boosted(const ObservationSource& source, const LikelihoodRatioModel& model,
                                  const RunOptions& options);

/// Futility level nu_t^M of the original test at time t.
using NuSchedule = std::function<double(std::size_t t)>;

/// Two-sided boosted test with futility level nu_t = min(nu_t^M prod_{i<=t} b_i, 1/alpha).
/// When `randomization` is given and the model is discrete, futility hits are
/// resolved by the randomized rule instead of a plain acceptance.
TestOutcome run_two_sided_fixed_nu(const ObservationSource& source, const LikelihoodRatioModel& model,
                                   const NuSchedule& nu_schedule, const RunOptions& options,
                                   const UniformSource& randomization = {});

/// Raw likelihood-ratio test against fixed thresholds: reject at
/// Lambda >= upper, accept at Lambda <= lower.
TestOutcome run_baseline(const ObservationSource& source, const LikelihoodRatioModel& model,
                         const Thresholds& thresholds, const RunOptions& options);

}  // namespace seqboost
