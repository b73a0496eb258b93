#pragma once

#include <cstddef>
#include <vector>

#include "seqboost/factor_model.hpp"
#include "seqboost/rng.hpp"
#include "seqboost/sprt.hpp"

namespace seqboost {

/// Null conditional mean (N mu0 - sum) / (N - draws) of the next draw.
/// Throws std::domain_error once the population is exhausted.
double conditional_mean(std::size_t population, double mu0, std::size_t draws, double sum);

/// Bet min(1/C, 2 (2 mu1 - 1)), floored at 0. Throws std::domain_error for C <= 0.
double rilacs_bet(double conditional_mean, double mu1);

/// The two-point null distribution of the factor 1 + lambda (X - C).
DiscreteFactorModel wor_factor_model(double conditional_mean, double lambda_bet);

struct WorConfig {
  std::size_t population = 0;
  double mu0 = 0.5;
  double mu1 = 0.55;
  double alpha = 0.05;
  bool boost = true;
  bool log_steps = false;
};

/// Sequential test of a binary population mean under sampling without
/// replacement, optionally with closed-form boosting. Draws must be 0 or 1.
/// A draw that rules out the null (more ones than N mu0) rejects at once; an
/// exhausted population accepts. Throws std::invalid_argument for non-binary
/// draws or more draws than the population holds.
TestOutcome run_wor_boosted(const ObservationSource& draws, const WorConfig& config);

/// Population of `size` items of which `ones` are 1, in random draw order.
std::vector<double> shuffled_population(std::size_t size, std::size_t ones, Rng& rng);

}  // namespace seqboost
