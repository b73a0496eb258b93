#include "seqboost/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "seqboost/process.hpp"
#include "seqboost/truncation.hpp"

namespace seqboost {

namespace {

void check_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::domain_error("kappa must lie in (0, 1), got " + std::to_string(kappa));
  }
}

}  // namespace

std::vector<double> DistanceToMeanMeasure::scores(std::span<const double> xs) const {
  std::vector<double> z(xs.size(), 0.0);
  if (xs.size() < 2) return z;
  const double total = std::accumulate(xs.begin(), xs.end(), 0.0);
  const double others = static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) z[i] = std::abs(xs[i] - (total - xs[i]) / others);
  return z;
}

double conformal_p(std::span<const double> scores, double tie_break) {
  if (scores.empty()) throw std::domain_error("conformal_p: no scores");
  const double zt = scores.back();
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (double z : scores) {
    if (z > zt) {
      ++greater;
    } else if (z == zt) {
      ++equal;
    }
  }
  return (static_cast<double>(greater) + tie_break * static_cast<double>(equal)) /
         static_cast<double>(scores.size());
}

double power_bet(double u, double kappa) {
  check_kappa(kappa);
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("power_bet: u must lie in [0, 1]");
  if (u == 0.0) return std::numeric_limits<double>::infinity();
  return kappa * std::pow(u, kappa - 1.0);
}

ConformalPowerModel::ConformalPowerModel(double kappa) : kappa_(kappa) { check_kappa(kappa); }

double ConformalPowerModel::threshold(double y) const {
  if (y <= kappa_) return 1.0;
  if (std::isinf(y)) return 0.0;
  return std::min(1.0, std::pow(y / kappa_, 1.0 / (kappa_ - 1.0)));
}

double ConformalPowerModel::null_cdf(double y) const { return 1.0 - threshold(y); }

double ConformalPowerModel::null_ccdf(double y) const { return threshold(y); }

double ConformalPowerModel::null_partial_mean(double y) const {
  return 1.0 - std::pow(threshold(y), kappa_);
}

Draw ConformalPowerModel::sample_null(Rng& rng) const {
  const double u = std::uniform_real_distribution<double>{}(rng);
  return {u, power_bet(u, kappa_)};
}

double conformal_boost_equation(double b, double kappa, double wealth, double alpha) {
  check_kappa(kappa);
  const double c = 1.0 / (alpha * wealth);
  const double u = std::min(1.0, std::pow(c / (b * kappa), 1.0 / (kappa - 1.0)));
  return b * (1.0 - std::pow(u, kappa)) + c * u;
}

BoostResult solve_conformal_boost(double kappa, double wealth, double alpha, double tol) {
  check_kappa(kappa);
  if (!(alpha > 0.0 && alpha < 1.0) || !(wealth > 0.0 && wealth < 1.0 / alpha)) {
    throw std::domain_error("solve_conformal_boost: wealth must lie in (0, 1/alpha)");
  }
  return largest_feasible([&](double b) { return conformal_boost_equation(b, kappa, wealth, alpha); }, tol);
}

TestOutcome run_conformal_boosted(const ObservationSource& source, const NonconformityMeasure& measure,
                                  const ConformalConfig& config, const UniformSource& tie_break) {
  Level(config.alpha);
  if (!tie_break) throw std::invalid_argument("run_conformal_boosted: tie-break source required");
  const double alpha = config.alpha;
  const StepBounds bounds{alpha, 0.0, false, false};
  TestOutcome out;
  ProcessState st;
  std::vector<double> xs;
  while (st.t < config.max_samples) {
    const double kappa = config.kappa(st.t + 1);
    BoostResult r;
    if (config.boost) {
      r = solve_conformal_boost(kappa, st.wealth, alpha);
      if (r.method == BoostMethod::FallbackOne) ++out.guard_fallbacks;
      out.max_verified_expectation = std::max(out.max_verified_expectation, r.verified_expectation);
    }
    const auto x = source();
    if (!x) break;
    xs.push_back(*x);
    const std::vector<double> z = measure.scores(xs);
    const double p = conformal_p(z, tie_break());
    const double f = power_bet(p, kappa);
    const Increment inc{truncate_one_sided(r.b * f, st.wealth, alpha), f, r.b, 1.0};
    st = step(st, inc, bounds);
    out.max_wealth = std::max(out.max_wealth, st.wealth);
    if (config.log_steps) {
      StepLog log;
      log.t = st.t;
      log.observation = *x;
      log.raw_factor = f;
      log.boost = r.b;
      log.wealth = st.wealth;
      log.raw_wealth = st.raw_wealth;
      log.verified_expectation = r.verified_expectation;
      out.steps.push_back(log);
    }
    if (st.stopped()) break;
  }
  out.decision = st.status == Status::RejectNull ? Decision::RejectNull : Decision::Undecided;
  out.stopping_time = st.t;
  out.raw_lr_at_stop = st.raw_wealth;
  out.boosted_wealth_at_stop = st.wealth;
  return out;
}

}  // namespace seqboost
