#include "seqboost/factor_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "seqboost/normal.hpp"
#include "seqboost/truncation.hpp"

namespace seqboost {

// ---------------------------------------------------------------------------
// Gaussian

GaussianLRModel::GaussianLRModel(double mu0, double delta) : mu0_(mu0), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::domain_error("GaussianLRModel: delta must be positive, got " + std::to_string(delta));
  }
  if (!std::isfinite(mu0)) throw std::domain_error("GaussianLRModel: mu0 must be finite");
}

double GaussianLRModel::likelihood_ratio(double x) const {
  return std::exp(delta_ * (x - mu0_) - 0.5 * delta_ * delta_);
}

double GaussianLRModel::likelihood_ratio_inverse(double y) const {
  if (!(y > 0.0)) throw std::domain_error("GaussianLRModel: inverse needs y > 0");
  return (0.5 * delta_ * delta_ + std::log(y)) / delta_ + mu0_;
}

// Under the null log L = delta Z - delta^2/2, under the alternative
// log L = delta Z + delta^2/2, with Z standard normal.
double GaussianLRModel::null_cdf(double y) const {
  if (y <= 0.0) return 0.0;
  if (std::isinf(y)) return 1.0;
  return normal_cdf(std::log(y) / delta_ + 0.5 * delta_);
}

double GaussianLRModel::null_ccdf(double y) const {
  if (y <= 0.0) return 1.0;
  if (std::isinf(y)) return 0.0;
  return normal_ccdf(std::log(y) / delta_ + 0.5 * delta_);
}

std::optional<double> GaussianLRModel::alt_cdf(double y) const {
  if (y <= 0.0) return 0.0;
  if (std::isinf(y)) return 1.0;
  return normal_cdf(std::log(y) / delta_ - 0.5 * delta_);
}

Draw GaussianLRModel::sample_null(Rng& rng) const {
  const double x = mu0_ + std::normal_distribution<double>{}(rng);
  return {x, likelihood_ratio(x)};
}

std::optional<Draw> GaussianLRModel::sample_alt(Rng& rng) const {
  const double x = mu1() + std::normal_distribution<double>{}(rng);
  return Draw{x, likelihood_ratio(x)};
}

// Reflecting x -> -x turns p_0/p_1 into a Gaussian likelihood ratio with the
// same delta and null mean -mu1.
std::shared_ptr<const LikelihoodRatioModel> GaussianLRModel::inverse() const {
  return std::make_shared<GaussianLRModel>(-mu1(), delta_);
}

// ---------------------------------------------------------------------------
// Bernoulli

BernoulliLRModel::BernoulliLRModel(double p0, double p1) : p0_(p0), p1_(p1) {
  if (!(p0 > 0.0 && p0 < 1.0) || !(p1 > 0.0 && p1 < 1.0)) {
    throw std::domain_error("BernoulliLRModel: probabilities must lie in (0, 1)");
  }
  if (p0 == p1) throw std::domain_error("BernoulliLRModel: p0 and p1 must differ");
}

double BernoulliLRModel::likelihood_ratio(double x) const {
  if (x == 1.0) return p1_ / p0_;
  if (x == 0.0) return (1.0 - p1_) / (1.0 - p0_);
  throw std::domain_error("BernoulliLRModel: observation must be 0 or 1");
}

std::vector<Atom> BernoulliLRModel::atoms() const {
  return {{p1_ / p0_, p0_, p1_}, {(1.0 - p1_) / (1.0 - p0_), 1.0 - p0_, 1.0 - p1_}};
}

double BernoulliLRModel::null_cdf(double y) const {
  double p = 0.0;
  for (const Atom& a : atoms()) {
    if (a.value <= y) p += a.p_null;
  }
  return p;
}

std::optional<double> BernoulliLRModel::alt_cdf(double y) const {
  double p = 0.0;
  for (const Atom& a : atoms()) {
    if (a.value <= y) p += a.p_alt;
  }
  return p;
}

Draw BernoulliLRModel::sample_null(Rng& rng) const {
  const double x = std::bernoulli_distribution(p0_)(rng) ? 1.0 : 0.0;
  return {x, likelihood_ratio(x)};
}

std::optional<Draw> BernoulliLRModel::sample_alt(Rng& rng) const {
  const double x = std::bernoulli_distribution(p1_)(rng) ? 1.0 : 0.0;
  return Draw{x, likelihood_ratio(x)};
}

std::shared_ptr<const LikelihoodRatioModel> BernoulliLRModel::inverse() const {
  return std::make_shared<BernoulliLRModel>(p1_, p0_);
}

// ---------------------------------------------------------------------------
// Generic discrete

DiscreteFactorModel::DiscreteFactorModel(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::domain_error("DiscreteFactorModel: no atoms");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.value >= 0.0) || !(a.p_null >= 0.0)) {
      throw std::domain_error("DiscreteFactorModel: values and probabilities must be nonnegative");
    }
    total += a.p_null;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::domain_error("DiscreteFactorModel: null probabilities must sum to one");
  }
}

double DiscreteFactorModel::null_cdf(double y) const {
  double p = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value <= y) p += a.p_null;
  }
  return p;
}

double DiscreteFactorModel::null_partial_mean(double y) const {
  double m = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value <= y) m += a.p_null * a.value;
  }
  return m;
}

Draw DiscreteFactorModel::sample_null(Rng& rng) const {
  double u = std::uniform_real_distribution<double>{}(rng);
  for (const Atom& a : atoms_) {
    if (u < a.p_null) return {a.value, a.value};
    u -= a.p_null;
  }
  return {atoms_.back().value, atoms_.back().value};
}

// ---------------------------------------------------------------------------
// Truncated expectations

namespace {

void check_expectation_args(double b, double wealth, double nu, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("expectation: alpha must lie in (0, 1)");
  if (!(wealth > 0.0 && wealth < 1.0 / alpha)) {
    throw std::domain_error("expectation: wealth must lie in (0, 1/alpha), got " + std::to_string(wealth));
  }
  if (!(b > 0.0)) throw std::domain_error("expectation: boost must be positive");
  if (!(nu >= 0.0) || nu > 1.0 / alpha) {
    throw std::domain_error("expectation: futility level must lie in [0, 1/alpha]");
  }
}

}  // namespace

double truncated_expectation_two_sided(const FactorModel& model, double b, double wealth, double nu,
                                       double alpha) {
  check_expectation_args(b, wealth, nu, alpha);
  const double cap = 1.0 / (wealth * alpha);
  if (std::isinf(b)) return model.null_ccdf(0.0) * cap;

  if (!model.continuous()) {
    double e = 0.0;
    for (const Atom& a : model.atoms()) {
      e += a.p_null * truncate_two_sided(b * a.value, wealth, nu, alpha);
    }
    return e;
  }

  // b L M <= 1/alpha  <=>  L <= hi;  b L M <= nu  <=>  L <= lo.
  const double hi = 1.0 / (b * alpha * wealth);
  const double lo = nu / (b * wealth);
  double pass = 0.0;
  if (lo < hi) pass = std::max(0.0, model.null_partial_mean(hi) - model.null_partial_mean(lo));
  return b * pass + cap * model.null_ccdf(hi);
}

double truncated_expectation_one_sided(const FactorModel& model, double b, double wealth, double alpha) {
  return truncated_expectation_two_sided(model, b, wealth, 0.0, alpha);
}

// ---------------------------------------------------------------------------
// Plugin

double plugin_theta(std::size_t t, double prefix_sum, double theta0) {
  if (t < 1) throw std::domain_error("plugin_theta: t must be at least 1");
  return std::max((theta0 + prefix_sum) / static_cast<double>(t), theta0);
}

PluginSchedule smoothed_mle_plugin(double theta0) {
  return [theta0](std::size_t t, double prefix_sum) { return plugin_theta(t, prefix_sum, theta0); };
}

}  // namespace seqboost
