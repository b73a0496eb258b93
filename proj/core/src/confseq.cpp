#include "seqboost/confseq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "seqboost/boost_solver.hpp"
#include "seqboost/factor_model.hpp"
#include "seqboost/process.hpp"
#include "seqboost/truncation.hpp"

namespace seqboost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxWidenings = 60;

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

Interval robbins_bound(std::size_t t, double sample_mean, double alpha, double delta, BoundSide side) {
  if (t < 1) throw std::domain_error("robbins_bound: t must be at least 1");
  if (!(delta > 0.0)) throw std::domain_error("robbins_bound: delta must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("robbins_bound: alpha must lie in (0, 1)");
  const double k = side == BoundSide::TwoSided ? 2.0 : 1.0;
  const double half = std::log(k / alpha) / (static_cast<double>(t) * delta) + 0.5 * delta;
  return {sample_mean - half, sample_mean + half};
}

double tuned_delta(double alpha, std::size_t n) {
  if (n < 1) throw std::domain_error("tuned_delta: n must be at least 1");
  return std::sqrt(8.0 * std::log(1.0 / alpha) / static_cast<double>(n));
}

std::optional<std::size_t> rejection_time(std::span<const double> prefix, double mu, double alpha,
                                          const ConfSeqConfig& config) {
  const StepBounds bounds{alpha, 0.0, false, false};
  ProcessState st;
  for (double x : prefix) {
    const double delta = config.delta_at(st.t + 1);
    const GaussianLRModel model(0.0, delta);
    const double b = config.boost ? solve_boost_one_sided(model, st.wealth, alpha).b : 1.0;
    const double lam = model.likelihood_ratio(x - mu);
    st = step(st, {truncate_one_sided(b * lam, st.wealth, alpha), lam, b, 1.0}, bounds);
    if (st.stopped()) return st.t;
  }
  return std::nullopt;
}

bool mean_rejected(std::span<const double> prefix, double mu, double alpha, const ConfSeqConfig& config) {
  return rejection_time(prefix, mu, alpha, config).has_value();
}

double boosted_lower_bound(std::span<const double> prefix, const ConfSeqConfig& config, double crossed_hint) {
  if (prefix.empty()) return -kInf;
  if (!(config.tol > 0.0)) throw std::domain_error("boosted_lower_bound: tol must be positive");
  const double alpha = config.alpha;
  const auto rejected = [&](double mu) { return mean_rejected(prefix, mu, alpha, config); };

  const double t = static_cast<double>(prefix.size());
  const double mean = mean_of(prefix);
  const double width = 10.0 * config.delta_at(prefix.size()) + 10.0 / std::sqrt(t);

  double lo = mean - width;
  if (std::isfinite(crossed_hint) && crossed_hint > lo && crossed_hint < mean) lo = crossed_hint;
  double hi = mean;

  double grow = width;
  for (int k = 0; !rejected(lo); ++k) {
    if (k == kMaxWidenings) return -kInf;
    hi = std::min(hi, lo);
    lo -= grow;
    grow *= 2.0;
  }
  grow = width;
  for (int k = 0; rejected(hi); ++k) {
    if (k == kMaxWidenings) return kInf;
    lo = std::max(lo, hi);
    hi += grow;
    grow *= 2.0;
  }
  while (hi - lo > config.tol) {
    const double mid = 0.5 * (lo + hi);
    if (rejected(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // lo is a rejected mean, so reporting it never overstates the bound.
  return lo;
}

double boosted_upper_bound(std::span<const double> prefix, const ConfSeqConfig& config) {
  std::vector<double> flipped(prefix.begin(), prefix.end());
  for (double& x : flipped) x = -x;
  return -boosted_lower_bound(flipped, config);
}

BoundTrajectory confidence_trajectory(std::span<const double> observations, const ConfSeqConfig& config) {
  ConfSeqConfig side_config = config;
  if (config.side == BoundSide::TwoSided) side_config.alpha = config.alpha / 2.0;
  const bool want_lower = config.side != BoundSide::Upper;
  const bool want_upper = config.side != BoundSide::Lower;

  std::vector<double> flipped(observations.size());
  std::transform(observations.begin(), observations.end(), flipped.begin(), [](double x) { return -x; });

  BoundTrajectory out;
  double sum = 0.0;
  double lower_hint = -kInf;
  double upper_hint = -kInf;
  for (std::size_t t = 1; t <= observations.size(); ++t) {
    sum += observations[t - 1];
    const double mean = sum / static_cast<double>(t);
    const Interval r = robbins_bound(t, mean, config.alpha, config.delta_at(t), config.side);
    out.mean.push_back(mean);
    out.robbins_lower.push_back(want_lower ? r.lower : -kInf);
    out.robbins_upper.push_back(want_upper ? r.upper : kInf);
    double lower = -kInf;
    double upper = kInf;
    if (want_lower) {
      lower = boosted_lower_bound(observations.first(t), side_config, lower_hint);
      lower_hint = lower;
    }
    if (want_upper) {
      const double neg = boosted_lower_bound(std::span<const double>(flipped).first(t), side_config, upper_hint);
      upper_hint = neg;
      upper = -neg;
    }
    out.lower.push_back(lower);
    out.upper.push_back(upper);
  }
  return out;
}

}  // namespace seqboost
