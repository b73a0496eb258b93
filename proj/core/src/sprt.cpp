#include "seqboost/sprt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>

#include "seqboost/truncation.hpp"

namespace seqboost {

const char* to_string(Decision decision) noexcept {
  switch (decision) {
    case Decision::RejectNull: return "reject";
    case Decision::AcceptNull: return "accept";
    case Decision::Undecided: return "undecided";
  }
  return "unknown";
}

const char* to_string(RuleMode mode) noexcept {
  switch (mode) {
    case RuleMode::PowerOne: return "power_one";
    case RuleMode::PowerOneUnboosted: return "power_one_unboosted";
    case RuleMode::TwoSidedFixedNu: return "two_sided_fixed_nu";
    case RuleMode::TwoSidedCoupled: return "two_sided_coupled";
    case RuleMode::WaldApprox: return "wald_approx";
    case RuleMode::WaldConservative: return "wald_conservative";
    case RuleMode::Siegmund: return "siegmund";
  }
  return "unknown";
}

Thresholds baseline_thresholds(RuleMode mode, const Level& level, double mu1) {
  const double a = level.alpha();
  const double b = level.beta();
  switch (mode) {
    case RuleMode::WaldApprox: return {(1.0 - b) / a, b / (1.0 - a)};
    case RuleMode::WaldConservative: return {1.0 / a, b};
    case RuleMode::Siegmund: {
      const double shift = std::exp(mu1 * kSiegmundRho);
      return {(1.0 - b) / (a * shift), b * shift / (1.0 - a)};
    }
    case RuleMode::PowerOneUnboosted: return {1.0 / a, 0.0};
    default: throw std::invalid_argument(std::string("baseline_thresholds: not a baseline rule: ") + to_string(mode));
  }
}

ObservationSource from_vector(std::vector<double> values) {
  auto data = std::make_shared<std::vector<double>>(std::move(values));
  auto next = std::make_shared<std::size_t>(0);
  return [data, next]() -> std::optional<double> {
    if (*next >= data->size()) return std::nullopt;
    return (*data)[(*next)++];
  };
}

ObservationSource from_model(const FactorModel& model, Rng& rng, bool under_alternative) {
  if (under_alternative && !model.sample_alt(rng)) {
    throw std::invalid_argument("from_model: model has no alternative sampler");
  }
  return [&model, &rng, under_alternative]() -> std::optional<double> {
    return under_alternative ? model.sample_alt(rng)->observation : model.sample_null(rng).observation;
  };
}

std::vector<double> read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": not a number: " + line);
    }
    values.push_back(v);
  }
  return values;
}

namespace {

Decision decision_from(Status status) {
  switch (status) {
    case Status::RejectNull: return Decision::RejectNull;
    case Status::AcceptNull: return Decision::AcceptNull;
    default: return Decision::Undecided;
  }
}

void note_boost(TestOutcome& out, const BoostResult& r) {
  if (r.method == BoostMethod::FallbackOne) ++out.guard_fallbacks;
  out.max_verified_expectation = std::max(out.max_verified_expectation, r.verified_expectation);
}

void finish(TestOutcome& out, const ProcessState& st) {
  out.decision = decision_from(st.status);
  out.stopping_time = st.t;
  out.raw_lr_at_stop = st.raw_wealth;
  out.boosted_wealth_at_stop = st.wealth;
}

StepLog make_log(const ProcessState& st, double x, const Increment& inc, double nu, double expectation) {
  StepLog log;
  log.t = st.t;
  log.observation = x;
  log.raw_factor = inc.raw_factor;
  log.boost = inc.boost;
  log.boost_inv = inc.inverse_boost;
  log.nu = nu;
  log.wealth = st.wealth;
  log.raw_wealth = st.raw_wealth;
  log.verified_expectation = expectation;
  return log;
}

void check_options(const RunOptions& options) {
  Level(options.alpha, options.beta);
}

}  // namespace

TestOutcome run_power_one_boosted(const ObservationSource& source, const LikelihoodRatioModel& model,
                                  const RunOptions& options) {
  check_options(options);
  const double alpha = options.alpha;
  const StepBounds bounds{alpha, 0.0, false, false};
  TestOutcome out;
  ProcessState st;
  while (st.t < options.max_samples) {
    BoostResult r;
    if (options.boost) {
      r = solve_boost_one_sided(model, st.wealth, alpha);
      note_boost(out, r);
    }
    const auto x = source();
    if (!x) break;
    const double lam = model.likelihood_ratio(*x);
    const Increment inc{truncate_one_sided(r.b * lam, st.wealth, alpha), lam, r.b, 1.0};
    st = step(st, inc, bounds);
    out.max_wealth = std::max(out.max_wealth, st.wealth);
    if (options.log_steps) out.steps.push_back(make_log(st, *x, inc, 0.0, r.verified_expectation));
    if (st.stopped()) break;
  }
  finish(out, st);
  return out;
}

TestOutcome run_power_one_plugin(const ObservationSource& source, const PluginSchedule& plugin, double theta0,
                                 const RunOptions& options) {
  check_options(options);
  const double alpha = options.alpha;
  const StepBounds bounds{alpha, 0.0, false, false};
  TestOutcome out;
  ProcessState st;
  double prefix_sum = 0.0;
  while (st.t < options.max_samples) {
    const double theta = plugin(st.t + 1, prefix_sum);
    if (theta < theta0) throw std::domain_error("plugin: theta_t below theta0");
    const double delta = theta - theta0;
    std::optional<GaussianLRModel> model;
    BoostResult r;
    if (delta > 0.0) {
      model.emplace(theta0, delta);
      if (options.boost) {
        r = solve_boost_one_sided(*model, st.wealth, alpha);
        note_boost(out, r);
      }
    }
    const auto x = source();
    if (!x) break;
    prefix_sum += *x;
    const double lam = model ? model->likelihood_ratio(*x) : 1.0;
    const Increment inc{truncate_one_sided(r.b * lam, st.wealth, alpha), lam, r.b, 1.0};
    st = step(st, inc, bounds);
    out.max_wealth = std::max(out.max_wealth, st.wealth);
    if (options.log_steps) out.steps.push_back(make_log(st, *x, inc, 0.0, r.verified_expectation));
    if (st.stopped()) break;
  }
  finish(out, st);
  return out;
}

TestOutcome run_two_sided_boosted(const ObservationSource& source, const LikelihoodRatioModel& model,
                                  const RunOptions& options) {
  check_options(options);
  if (!(options.beta > 0.0)) throw std::domain_error("two-sided test: beta must be positive");
  const double alpha = options.alpha;
  const double beta = options.beta;
  TestOutcome out;
  ProcessState st;
  double wealth_inv = 1.0;
  while (st.t < options.max_samples) {
    CoupledBoostResult r;
    r.nu = std::min(beta * st.boost_cumprod * st.inv_boost_cumprod, 1.0 / alpha);
    r.nu_inv = std::min(alpha * st.boost_cumprod * st.inv_boost_cumprod, 1.0 / beta);
    if (options.boost) {
      r = solve_boost_coupled(model, st.wealth, wealth_inv, alpha, beta, st.boost_cumprod, st.inv_boost_cumprod);
      if (r.method == BoostMethod::FallbackOne) ++out.guard_fallbacks;
      out.max_verified_expectation =
          std::max({out.max_verified_expectation, r.verified_expectation, r.verified_expectation_inv});
    }
    const auto x = source();
    if (!x) break;
    const double lam = model.likelihood_ratio(*x);
    const Increment inc{truncate_two_sided(r.b * lam, st.wealth, r.nu, alpha), lam, r.b, r.b_inv};
    st = step(st, inc, StepBounds{alpha, r.nu, true, false});
    out.max_wealth = std::max(out.max_wealth, st.wealth);
    if (!st.stopped()) {
      // While the forward process runs, the product of forward and inverse
      // wealth equals the product of all boosts, so the inverse factor passes
      // through its truncation untouched.
      wealth_inv = std::clamp(wealth_inv * (r.b_inv / lam), std::numeric_limits<double>::min(),
                              std::nextafter(1.0 / beta, 0.0));
    }
    if (options.log_steps) {
      StepLog log = make_log(st, *x, inc, r.nu, r.verified_expectation);
      log.wealth_inv = wealth_inv;
      out.steps.push_back(log);
    }
    if (st.stopped()) break;
  }
  finish(out, st);
  return out;
}

TestOutcome run_two_sided_fixed_nu(const ObservationSource& source, const LikelihoodRatioModel& model,
                                   const NuSchedule& nu_schedule, const RunOptions& options,
                                   const UniformSource& randomization) {
  check_options(options);
  const double alpha = options.alpha;
  const double cap = 1.0 / alpha;
  const bool randomized = static_cast<bool>(randomization) && !model.continuous();
  TestOutcome out;
  ProcessState st;
  while (st.t < options.max_samples) {
    const double nu_m = nu_schedule(st.t + 1);
    if (!(nu_m >= 0.0) || nu_m > cap) throw std::domain_error("futility schedule must lie in [0, 1/alpha]");
    const double nu_base = nu_m * st.boost_cumprod;
    BoostResult r;
    r.verified_expectation = 0.0;
    if (options.boost) {
      r = solve_boost_two_sided_tracking(model, st.wealth, nu_base, alpha);
      note_boost(out, r);
    }
    const double nu = std::min(nu_base * r.b, cap);
    const auto x = source();
    if (!x) break;
    const double lam = model.likelihood_ratio(*x);
    const Increment inc{truncate_two_sided(r.b * lam, st.wealth, nu, alpha), lam, r.b, 1.0};
    const double before = st.wealth;
    st = step(st, inc, StepBounds{alpha, nu, true, randomized});
    if (st.status == Status::AcceptPendingRandomization) {
      st.status = randomized_futility_accept(model, r.b, before, nu, alpha, randomization());
      st.wealth = st.status == Status::RejectNull ? cap : 0.0;
    }
    out.max_wealth = std::max(out.max_wealth, st.wealth);
    if (options.log_steps) out.steps.push_back(make_log(st, *x, inc, nu, r.verified_expectation));
    if (st.stopped()) break;
  }
  finish(out, st);
  return out;
}

TestOutcome run_baseline(const ObservationSource& source, const LikelihoodRatioModel& model,
                         const Thresholds& thresholds, const RunOptions& options) {
  if (!(thresholds.upper > 0.0) || !(thresholds.lower >= 0.0) || thresholds.lower >= thresholds.upper) {
    throw std::domain_error("baseline thresholds must satisfy 0 <= lower < upper");
  }
  TestOutcome out;
  double lr = 1.0;
  std::size_t t = 0;
  while (t < options.max_samples) {
    const auto x = source();
    if (!x) break;
    ++t;
    const double lam = model.likelihood_ratio(*x);
    lr *= lam;
    out.max_wealth = std::max(out.max_wealth, lr);
    if (options.log_steps) {
      StepLog log;
      log.t = t;
      log.observation = *x;
      log.raw_factor = lam;
      log.wealth = lr;
      log.raw_wealth = lr;
      out.steps.push_back(log);
    }
    if (lr >= thresholds.upper) {
      out.decision = Decision::RejectNull;
      break;
    }
    if (lr <= thresholds.lower) {
      out.decision = Decision::AcceptNull;
      break;
    }
  }
  out.stopping_time = t;
  out.raw_lr_at_stop = lr;
  out.boosted_wealth_at_stop = lr;
  return out;
}

}  // namespace seqboost
