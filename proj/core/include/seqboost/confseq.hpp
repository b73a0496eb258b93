#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace seqboost {

enum class BoundSide { Lower, Upper, TwoSided };

struct Interval {
  double lower;
  double upper;
};

/// Robbins' bound mean -/+ (log(k/alpha)/(t delta) + delta/2) with k = 1 for a
/// one-sided side and k = 2 for TwoSided. Both ends are always returned.
/// Throws std::domain_error for t < 1, delta <= 0 or alpha outside (0, 1).
Interval robbins_bound(std::size_t t, double sample_mean, double alpha, double delta,
                       BoundSide side = BoundSide::TwoSided);

/// Bet size delta_t at time t; must depend only on t and earlier data.
using DeltaSchedule = std::function<double(std::size_t t)>;

/// The bet size recommended for a tight sequence at time n: sqrt(8 log(1/alpha) / n).
double tuned_delta(double alpha, std::size_t n);

struct ConfSeqConfig {
  double alpha = 0.05;
  double delta = 0.5;
  // Overrides `delta` when set.
  DeltaSchedule delta_schedule;
  BoundSide side = BoundSide::Lower;
  double tol = 1e-6;
  // With boost off the per-mean martingales are plain likelihood ratios.
  bool boost = true;

  double delta_at(std::size_t t) const { return delta_schedule ? delta_schedule(t) : delta; }
};

/// True when the boosted martingale for candidate mean mu has reached
/// 1/alpha at some time <= prefix.size(). The factor at time i is
/// exp(delta_i (x_i - mu) - delta_i^2 / 2).
bool mean_rejected(std::span<const double> prefix, double mu, double alpha, const ConfSeqConfig& config);

/// First time at which the martingale for mu reaches 1/alpha, if it does.
std::optional<std::size_t> rejection_time(std::span<const double> prefix, double mu, double alpha,
                                          const ConfSeqConfig& config);

/// Smallest mu (to config.tol) whose boosted martingale at level config.alpha
/// has not crossed 1/alpha by the end of the prefix. Returns -infinity when no
/// candidate is rejected within the widened search range and +infinity when
/// every candidate is. `crossed_hint`, if finite, is a mean known to be
/// rejected already and tightens the initial bracket.
double boosted_lower_bound(std::span<const double> prefix, const ConfSeqConfig& config,
                           double crossed_hint = -std::numeric_limits<double>::infinity());

/// Mirror image: largest mu not rejected by the martingales of -X.
double boosted_upper_bound(std::span<const double> prefix, const ConfSeqConfig& config);

struct BoundTrajectory {
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> robbins_lower;
  std::vector<double> robbins_upper;
};

/// Bounds after each observation. Lower bounds are reported for Lower and
/// TwoSided, upper bounds for Upper and TwoSided; the unused side is filled
/// with -/+ infinity. TwoSided runs each side at alpha/2.
BoundTrajectory confidence_trajectory(std::span<const double> observations, const ConfSeqConfig& config);

}  // namespace seqboost
