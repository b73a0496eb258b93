#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "seqboost/boost_solver.hpp"
#include "seqboost/factor_model.hpp"
#include "seqboost/sprt.hpp"

namespace seqboost {

/// Maps observations x_1..x_t to scores z_1..z_t. Implementations must be
/// permutation equivariant: permuting the inputs permutes the scores.
class NonconformityMeasure {
 public:
  virtual ~NonconformityMeasure() = default;
  virtual std::vector<double> scores(std::span<const double> xs) const = 0;
};

/// z_i = |x_i - mean of the other observations|; a single observation scores 0.
class DistanceToMeanMeasure final : public NonconformityMeasure {
 public:
  std::vector<double> scores(std::span<const double> xs) const override;
};

/// (#{i : z_i > z_t} + tie_break * #{i : z_i == z_t}) / t, where z_t is the
/// last score. Throws std::domain_error for an empty span.
double conformal_p(std::span<const double> scores, double tie_break);

/// kappa * u^(kappa - 1); +infinity at u == 0. Throws std::domain_error unless
/// kappa lies in (0, 1) and u in [0, 1].
double power_bet(double u, double kappa);

/// Factor f(U) = kappa U^(kappa - 1) with U uniform on [0, 1], the null law of
/// a power bet applied to a conformal p-value.
class ConformalPowerModel final : public FactorModel {
 public:
  explicit ConformalPowerModel(double kappa);

  double kappa() const noexcept { return kappa_; }

  bool continuous() const noexcept override { return true; }
  double null_cdf(double y) const override;
  double null_ccdf(double y) const override;
  double null_partial_mean(double y) const override;
  Draw sample_null(Rng& rng) const override;

 private:
  // Smallest u with f(u) <= y, clipped to [0, 1].
  double threshold(double y) const;

  double kappa_;
};

/// Truncated null expectation of b f(U) at wealth M:
///   b (1 - u*^kappa) + c u*,  c = 1/(alpha M),  u* = min(1, (c/(b kappa))^(1/(kappa - 1))).
double conformal_boost_equation(double b, double kappa, double wealth, double alpha);

BoostResult solve_conformal_boost(double kappa, double wealth, double alpha, double tol = kSolverTolerance);

/// kappa_t as a function of t; must not look at data from time t onward.
using KappaSchedule = std::function<double(std::size_t t)>;

struct ConformalConfig {
  double alpha = 0.05;
  KappaSchedule kappa = [](std::size_t) { return 0.5; };
  std::size_t max_samples = kDefaultMaxSamples;
  bool boost = true;
  bool log_steps = false;
};

/// Conformal test martingale prod f_i(p_i) with boosting. Tie-break uniforms
/// come from `tie_break`, which should be independent of the data.
TestOutcome run_conformal_boosted(const ObservationSource& source, const NonconformityMeasure& measure,
                                  const ConformalConfig& config, const UniformSource& tie_break);

}  // namespace seqboost
