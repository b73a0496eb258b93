#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "seqboost/rng.hpp"

namespace seqboost {

/// A support point of a discrete factor distribution.
struct Atom {
  double value;
  double p_null;
  double p_alt;
};

/// One sampled step: the underlying observation and the factor it induces.
struct Draw {
  double observation;
  double factor;
};

/// Conditional distribution of the next multiplicative factor L_t of a test
/// supermartingale, given whatever history summary the concrete model was
/// built from. Models are immutable; all queries are pure.
///
/// Contract: null_cdf is a CDF on [0, inf], and E_0[L] <= 1. Discrete models
/// report their support through atoms(), with p_null summing to one.
class FactorModel {
 public:
  virtual ~FactorModel() = default;

  virtual bool continuous() const noexcept = 0;
  /// True when the factor is a likelihood ratio of a family with a monotone
  /// likelihood ratio, which extends validity to one-sided composite nulls.
  virtual bool monotone_likelihood_ratio() const noexcept { return false; }

  /// P_0(L <= y).
  virtual double null_cdf(double y) const = 0;
  /// P_0(L > y).
  virtual double null_ccdf(double y) const { return 1.0 - null_cdf(y); }
  /// E_0[L 1{L <= y}].
  virtual double null_partial_mean(double y) const = 0;
  /// P_1(L <= y) where an alternative is defined.
  virtual std::optional<double> alt_cdf(double /*y*/) const { return std::nullopt; }

  /// Support of a discrete model; empty for continuous models.
  virtual std::vector<Atom> atoms() const { return {}; }

  virtual Draw sample_null(Rng& rng) const = 0;
  virtual std::optional<Draw> sample_alt(Rng& /*rng*/) const { return std::nullopt; }
};

/// Factor models of the form L = p_1(X) / p_0(X) for i.i.d. observations.
/// For these, E_0[L 1{L <= y}] = P_1(L <= y).
class LikelihoodRatioModel : public FactorModel {
 public:
  virtual double likelihood_ratio(double x) const = 0;

  /// Model of the inverse factor 1/L under the alternative, used by the
  /// inverse (type II) process of the two-sided test. Only its distribution is
  /// meaningful; observations are not shared with the forward model.
  virtual std::shared_ptr<const LikelihoodRatioModel> inverse() const = 0;

  double null_partial_mean(double y) const override { return *alt_cdf(y); }
};

/// Unit-variance Gaussian, null mean mu0 against alternative mean mu0 + delta.
class GaussianLRModel final : public LikelihoodRatioModel {
 public:
  /// Throws std::domain_error unless delta > 0.
  GaussianLRModel(double mu0, double delta);

  double mu0() const noexcept { return mu0_; }
  double mu1() const noexcept { return mu0_ + delta_; }
  double delta() const noexcept { return delta_; }

  double likelihood_ratio(double x) const override;
  /// Observation x with likelihood_ratio(x) == y. Throws for y <= 0.
  double likelihood_ratio_inverse(double y) const;

  bool continuous() const noexcept override { return true; }
  bool monotone_likelihood_ratio() const noexcept override { return true; }
  double null_cdf(double y) const override;
  double null_ccdf(double y) const override;
  std::optional<double> alt_cdf(double y) const override;
  Draw sample_null(Rng& rng) const override;
  std::optional<Draw> sample_alt(Rng& rng) const override;
  std::shared_ptr<const LikelihoodRatioModel> inverse() const override;

 private:
  double mu0_;
  double delta_;
};

/// Bernoulli observations with success probability p0 under the null and p1
/// under the alternative.
class BernoulliLRModel final : public LikelihoodRatioModel {
 public:
  /// Throws std::domain_error unless p0, p1 lie in (0, 1) and differ.
  BernoulliLRModel(double p0, double p1);

  double p0() const noexcept { return p0_; }
  double p1() const noexcept { return p1_; }

  double likelihood_ratio(double x) const override;

  bool continuous() const noexcept override { return false; }
  bool monotone_likelihood_ratio() const noexcept override { return p1_ > p0_; }
  double null_cdf(double y) const override;
  std::optional<double> alt_cdf(double y) const override;
  std::vector<Atom> atoms() const override;
  Draw sample_null(Rng& rng) const override;
  std::optional<Draw> sample_alt(Rng& rng) const override;
  std::shared_ptr<const LikelihoodRatioModel> inverse() const override;

 private:
  double p0_;
  double p1_;
};

/// Arbitrary finite factor distribution. Used for the without-replacement
/// factors and as a generic cross-check for closed forms.
class DiscreteFactorModel final : public FactorModel {
 public:
  /// Throws std::domain_error if the null probabilities do not sum to one
  /// (within 1e-12) or any value is negative.
  explicit DiscreteFactorModel(std::vector<Atom> atoms);

  bool continuous() const noexcept override { return false; }
  double null_cdf(double y) const override;
  double null_partial_mean(double y) const override;
  std::vector<Atom> atoms() const override { return atoms_; }
  Draw sample_null(Rng& rng) const override;

 private:
  std::vector<Atom> atoms_;
};

/// E_0[T(b L; M)] with the one-sided truncation. Closed form for continuous
/// models, atom enumeration for discrete ones. b may be +infinity.
/// Throws std::domain_error unless 0 < M < 1/alpha and b > 0.
double truncated_expectation_one_sided(const FactorModel& model, double b, double wealth, double alpha);

/// E_0[T(b L; M, nu)] with the two-sided truncation, nu in [0, 1/alpha].
double truncated_expectation_two_sided(const FactorModel& model, double b, double wealth, double nu,
                                       double alpha);

/// Predictable plugin for a composite alternative: maps (t, sum of X_1..X_{t-1})
/// to theta_t. Must not look at X_t.
using PluginSchedule = std::function<double(std::size_t t, double prefix_sum)>;

/// Smoothed maximum likelihood plugin max((theta0 + prefix_sum) / t, theta0).
/// Throws std::domain_error when t < 1.
double plugin_theta(std::size_t t, double prefix_sum, double theta0);

PluginSchedule smoothed_mle_plugin(double theta0);

}  // namespace seqboost
