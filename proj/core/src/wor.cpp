#include "seqboost/wor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "seqboost/boost_solver.hpp"
#include "seqboost/process.hpp"
#include "seqboost/truncation.hpp"

namespace seqboost {

namespace {
// Tolerance on N mu0 - sum, which is a count whenever N mu0 is an integer.
constexpr double kCountSlack = 1e-9;
}  // namespace

double conditional_mean(std::size_t population, double mu0, std::size_t draws, double sum) {
  if (draws >= population) throw std::domain_error("conditional_mean: population exhausted");
  return (static_cast<double>(population) * mu0 - sum) / static_cast<double>(population - draws);
}

double rilacs_bet(double conditional_mean, double mu1) {
  if (!(conditional_mean > 0.0)) throw std::domain_error("rilacs_bet: conditional mean must be positive");
  return std::max(0.0, std::min(1.0 / conditional_mean, 2.0 * (2.0 * mu1 - 1.0)));
}

DiscreteFactorModel wor_factor_model(double conditional_mean, double lambda_bet) {
  const double c = conditional_mean;
  return DiscreteFactorModel({{1.0 + lambda_bet * (1.0 - c), c, c}, {1.0 - lambda_bet * c, 1.0 - c, 1.0 - c}});
}

TestOutcome run_wor_boosted(const ObservationSource& draws, const WorConfig& config) {
  Level(config.alpha);
  if (config.population == 0) throw std::invalid_argument("run_wor_boosted: empty population");
  if (!(config.mu0 >= 0.0 && config.mu0 <= 1.0)) throw std::domain_error("run_wor_boosted: mu0 must lie in [0, 1]");
  const double alpha = config.alpha;
  const double cap = 1.0 / alpha;
  const StepBounds bounds{alpha, 0.0, false, false};

  TestOutcome out;
  ProcessState st;
  double sum = 0.0;
  while (true) {
    if (st.t == config.population) {
      // Every item has been seen and no contradiction with the null arose.
      st.status = Status::AcceptNull;
      break;
    }
    const double c = conditional_mean(config.population, config.mu0, st.t, sum);
    const auto x = draws();
    if (!x) break;
    if (*x != 0.0 && *x != 1.0) {
      throw std::invalid_argument("run_wor_boosted: draw " + std::to_string(st.t + 1) + " is not 0 or 1");
    }
    sum += *x;

    Increment inc;
    double expectation = 1.0;
    if (static_cast<double>(config.population) * config.mu0 - sum < -kCountSlack) {
      // The sample now holds more ones than the null allows.
      inc.truncated_factor = st.wealth > 0.0 ? cap / st.wealth : 0.0;
      inc.raw_factor = inc.truncated_factor;
    } else {
      const double lambda = c >= 1.0 ? 0.0 : rilacs_bet(std::max(c, 1e-300), config.mu1);
      const double factor = 1.0 + lambda * (*x - c);
      double b = 1.0;
      if (config.boost && c > 0.0 && c < 1.0 && st.wealth > 0.0 && lambda * c < 1.0) {
        const BoostResult r = closed_form_binary_boost(c, lambda, st.wealth, alpha);
        b = r.b;
        expectation = r.verified_expectation;
        if (r.method == BoostMethod::FallbackOne) ++out.guard_fallbacks;
        out.max_verified_expectation = std::max(out.max_verified_expectation, expectation);
      }
      inc.raw_factor = factor;
      inc.boost = b;
      inc.truncated_factor = st.wealth > 0.0 ? truncate_one_sided(b * factor, st.wealth, alpha) : 0.0;
    }
    st = step(st, inc, bounds);
    out.max_wealth = std::max(out.max_wealth, st.wealth);
    if (config.log_steps) {
      StepLog log;
      log.t = st.t;
      log.observation = *x;
      log.raw_factor = inc.raw_factor;
      log.boost = inc.boost;
      log.wealth = st.wealth;
      log.raw_wealth = st.raw_wealth;
      log.verified_expectation = expectation;
      out.steps.push_back(log);
    }
    if (st.stopped()) break;
  }
  out.decision = st.status == Status::RejectNull  ? Decision::RejectNull
                 : st.status == Status::AcceptNull ? Decision::AcceptNull
                                                   : Decision::Undecided;
  out.stopping_time = st.t;
  out.raw_lr_at_stop = st.raw_wealth;
  out.boosted_wealth_at_stop = st.wealth;
  return out;
}

std::vector<double> shuffled_population(std::size_t size, std::size_t ones, Rng& rng) {
  if (ones > size) throw std::invalid_argument("shuffled_population: more ones than items");
  std::vector<double> pop(size, 0.0);
  std::fill_n(pop.begin(), ones, 1.0);
  std::shuffle(pop.begin(), pop.end(), rng);
  return pop;
}

}  // namespace seqboost
