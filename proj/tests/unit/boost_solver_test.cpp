#include "seqboost/boost_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "reference_tables.hpp"
#include "seqboost/truncation.hpp"
#include "seqboost/wor.hpp"

using namespace seqboost;

namespace {
constexpr double kAlpha = 0.05;
}

TEST(BoostSolver, OneSidedReferenceGrid) {
  for (std::size_t i = 0; i < reference::kDeltas.size(); ++i) {
    const GaussianLRModel m(0.0, reference::kDeltas[i]);
    for (std::size_t j = 0; j < reference::kWealths.size(); ++j) {
      const BoostResult r = solve_boost_one_sided(m, reference::kWealths[j], kAlpha);
      EXPECT_NEAR(r.b, reference::kOneSided[i][j], 1e-4) << "delta=" << reference::kDeltas[i] << " M=" << reference::kWealths[j];
      EXPECT_LE(r.verified_expectation, 1.0 + kGuardTolerance);
      EXPECT_GE(r.b, 1.0);
    }
  }
}

TEST(BoostSolver, TwoSidedReferenceGrid) {
  for (std::size_t i = 0; i < reference::kDeltas.size(); ++i) {
    const GaussianLRModel m(0.0, reference::kDeltas[i]);
    for (std::size_t j = 0; j < reference::kWealths.size(); ++j) {
      const BoostResult r = solve_boost_two_sided(m, reference::kWealths[j], reference::kFutility, kAlpha);
      EXPECT_NEAR(r.b, reference::kTwoSided[i][j], 1e-4) << "delta=" << reference::kDeltas[i] << " M=" << reference::kWealths[j];
      EXPECT_LE(r.verified_expectation, 1.0 + kGuardTolerance);
    }
  }
}

TEST(BoostSolver, RootSatisfiesQuadrature) {
  for (double delta : {0.5, 1.0, 2.0, 3.0}) {
    for (double wealth : {1.0, 4.0, 10.0}) {
      const BoostResult r = solve_boost_one_sided(GaussianLRModel(0.0, delta), wealth, kAlpha);
      if (r.b == 1.0) continue;
      EXPECT_NEAR(oracle::gaussian_lr_expectation(delta, r.b, wealth, 0.0, kAlpha), 1.0, 1e-7);
    }
  }
}

TEST(BoostSolver, SmallDeltaIsOne) {
  const BoostResult r = solve_boost_one_sided(GaussianLRModel(0.0, 0.1), 0.5, kAlpha);
  EXPECT_NEAR(r.b, 1.0, 1e-5);
}

TEST(BoostSolver, DomainErrors) {
  const GaussianLRModel m(0.0, 1.0);
  EXPECT_THROW(solve_boost_one_sided(m, 20.0, kAlpha), std::domain_error);
  EXPECT_THROW(solve_boost_one_sided(m, 0.0, kAlpha), std::domain_error);
}

TEST(BoostSolver, MonotoneInWealth) {
  for (double delta : {0.5, 1.0, 2.0}) {
    const GaussianLRModel m(0.0, delta);
    double prev = 1.0;
    for (double wealth = 0.25; wealth < 20.0; wealth += 0.25) {
      const double b = solve_boost_one_sided(m, wealth, kAlpha).b;
      EXPECT_GE(b, prev * (1.0 - 1e-8)) << "delta=" << delta << " M=" << wealth;
      prev = b;
    }
  }
}

TEST(BoostSolver, FutilityDominates) {
  for (double delta : {0.3, 1.0, 2.5}) {
    const GaussianLRModel m(0.0, delta);
    for (double wealth : {0.5, 1.0, 5.0, 15.0}) {
      const double one = solve_boost_one_sided(m, wealth, kAlpha).b;
      for (double nu : {0.1, 0.4, 1.0}) EXPECT_GE(solve_boost_two_sided(m, wealth, nu, kAlpha).b, one * (1.0 - 1e-8));
    }
  }
}

TEST(BoostSolver, DiscreteLargestFeasible) {
  const BernoulliLRModel m(1.0 / 3.0, 2.0 / 3.0);
  const BoostResult r = solve_boost_two_sided(m, 8.0, 7.0, kAlpha);
  EXPECT_NEAR(r.b, 7.0 / 4.0, 1e-12);
  EXPECT_NEAR(r.verified_expectation, 5.0 / 6.0, 1e-12);
  EXPECT_EQ(r.method, BoostMethod::LargestFeasibleDiscrete);
  // Just above 7/4 the down atom escapes futility and the expectation jumps above 1.
  EXPECT_GT(truncated_expectation_two_sided(m, 7.0 / 4.0 * (1.0 + 1e-9), 8.0, 7.0, kAlpha), 1.0);
}

TEST(BoostSolver, LargestFeasibleBasics) {
  const BoostResult r = largest_feasible([](double b) { return b / 3.0; });
  EXPECT_NEAR(r.b, 3.0, 3e-9);
  EXPECT_LE(r.b / 3.0, 1.0);
  const BoostResult none = largest_feasible([](double b) { return b; });
  EXPECT_DOUBLE_EQ(none.b, 1.0);
  const BoostResult broken = largest_feasible([](double) { return 1.5; });
  EXPECT_EQ(broken.method, BoostMethod::FallbackOne);
  EXPECT_DOUBLE_EQ(broken.b, 1.0);
}

TEST(BoostSolver, TrackingFutility) {
  // With nu_base = 0 the tracking solver is the one-sided solver.
  const GaussianLRModel m(0.0, 1.5);
  EXPECT_NEAR(solve_boost_two_sided_tracking(m, 3.0, 0.0, kAlpha).b, solve_boost_one_sided(m, 3.0, kAlpha).b, 1e-8);
  const BoostResult r = solve_boost_two_sided_tracking(m, 3.0, 0.4, kAlpha);
  EXPECT_NEAR(truncated_expectation_two_sided(m, r.b, 3.0, std::min(0.4 * r.b, 20.0), kAlpha), 1.0, 1e-7);
}

TEST(CoupledSolver, ExpectationsAgreeWithQuadrature) {
  const double delta = 0.3, beta = 0.2;
  const GaussianLRModel m(0.0, delta);
  const CoupledBoostResult r = solve_boost_coupled(m, 1.0, 1.0, kAlpha, beta, 1.0, 1.0);
  ASSERT_NE(r.method, BoostMethod::FallbackOne);
  EXPECT_GE(r.b, 1.0);
  EXPECT_GE(r.b_inv, 1.0);
  EXPECT_NEAR(r.nu, std::min(beta * r.b * r.b_inv, 1.0 / kAlpha), 1e-15);
  EXPECT_NEAR(r.nu_inv, std::min(kAlpha * r.b * r.b_inv, 1.0 / beta), 1e-15);
  EXPECT_NEAR(oracle::gaussian_lr_expectation(delta, r.b, 1.0, r.nu, kAlpha), 1.0, 1e-6);
  EXPECT_NEAR(oracle::gaussian_inverse_expectation(delta, r.b_inv, 1.0, r.nu_inv, beta), 1.0, 1e-6);
  EXPECT_FALSE(r.heuristic);
}

TEST(CoupledSolver, SymmetricLevelsGiveEqualBoosts) {
  const GaussianLRModel m(0.0, 1.0);
  const CoupledBoostResult r = solve_boost_coupled(m, 1.0, 1.0, 0.1, 0.1, 1.0, 1.0);
  EXPECT_NEAR(r.b, r.b_inv, 1e-6);
}

TEST(CoupledSolver, TinyBetaApproachesOneSided) {
  const GaussianLRModel m(0.0, 2.0);
  const CoupledBoostResult r = solve_boost_coupled(m, 1.0, 1.0, kAlpha, 1e-9, 1.0, 1.0);
  EXPECT_NEAR(r.b, solve_boost_one_sided(m, 1.0, kAlpha).b, 1e-6);
}

TEST(CoupledSolver, OverlapClamp) {
  const GaussianLRModel m(0.0, 0.5);
  const CoupledBoostResult r = solve_boost_coupled(m, 1.0, 1.0, kAlpha, 0.2, 200.0, 1.0);
  EXPECT_DOUBLE_EQ(r.nu, 1.0 / kAlpha);
  EXPECT_DOUBLE_EQ(r.nu_inv, 1.0 / 0.2);
}

TEST(CoupledSolver, DiscreteIsFlaggedHeuristic) {
  const BernoulliLRModel m(0.3, 0.6);
  const CoupledBoostResult r = solve_boost_coupled(m, 1.0, 1.0, kAlpha, 0.2, 1.0, 1.0);
  EXPECT_TRUE(r.heuristic);
  EXPECT_LE(r.verified_expectation, 1.0 + kGuardTolerance);
  EXPECT_LE(r.verified_expectation_inv, 1.0 + kGuardTolerance);
}

TEST(ClosedForm, Examples) {
  EXPECT_DOUBLE_EQ(closed_form_binary_boost(0.5, 0.2, 1.0, kAlpha).b, 1.0);
  EXPECT_NEAR(closed_form_binary_boost(0.5, 0.2, 19.0, kAlpha).b, (1.0 - 0.5 / 0.95) / (0.5 * 0.9), 1e-15);
  // At the case boundary the up factor lands exactly on the cap and both cases give 1.
  EXPECT_NEAR(closed_form_binary_boost(0.5, 0.2, 20.0 / 1.1, kAlpha).b, 1.0, 1e-12);
  EXPECT_THROW(closed_form_binary_boost(0.0, 0.2, 1.0, kAlpha), std::domain_error);
  EXPECT_THROW(closed_form_binary_boost(1.0, 0.2, 1.0, kAlpha), std::domain_error);
  EXPECT_THROW(closed_form_binary_boost(0.5, 2.5, 1.0, kAlpha), std::domain_error);
}

TEST(ClosedForm, MatchesDiscreteSolver) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double c = 0.01 + 0.98 * unit(rng);
    const double lambda = 0.999 * unit(rng) / c;
    const double wealth = 0.5 + 19.49 * unit(rng);
    const double closed = closed_form_binary_boost(c, lambda, wealth, kAlpha).b;
    const double generic = solve_boost_one_sided(wor_factor_model(c, lambda), wealth, kAlpha).b;
    ASSERT_NEAR(closed, generic, 1e-10 * std::max(1.0, closed)) << "C=" << c << " lambda=" << lambda << " M=" << wealth;
  }
}

TEST(Futility, RandomizedRule) {
  const BernoulliLRModel m(1.0 / 3.0, 2.0 / 3.0);
  const FutilityRandomization f = futility_randomization(m, 7.0 / 4.0, 8.0, 7.0, kAlpha);
  EXPECT_NEAR(f.expectation, 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(f.futility_probability, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(f.a, 0.25, 1e-12);
  EXPECT_NEAR(f.reject_threshold, 0.1, 1e-12);
  EXPECT_EQ(randomized_futility_accept(m, 7.0 / 4.0, 8.0, 7.0, kAlpha, 0.09), Status::RejectNull);
  EXPECT_EQ(randomized_futility_accept(m, 7.0 / 4.0, 8.0, 7.0, kAlpha, 0.11), Status::AcceptNull);
  // The up step 8 * 7/4 * 2 overshoots and is capped at 1/alpha.
  EXPECT_DOUBLE_EQ(8.0 * truncate_two_sided(7.0 / 4.0 * 2.0, 8.0, 7.0, kAlpha), 20.0);
}

TEST(Futility, AugmentedFactorHasUnitMean) {
  // Up atom 2 w.p. 1/3 is capped to 20/8; down atom w.p. 2/3 pays (1/alpha)/M with
  // probability alpha a M.
  const double a = futility_randomization(BernoulliLRModel(1.0 / 3.0, 2.0 / 3.0), 7.0 / 4.0, 8.0, 7.0, kAlpha).a;
  const double mean = (1.0 / 3.0) * (20.0 / 8.0) + (2.0 / 3.0) * (kAlpha * a * 8.0) * (20.0 / 8.0);
  EXPECT_NEAR(mean, 1.0, 1e-12);
}

TEST(Futility, NoSlackNeverRejects) {
  // nu = 0 with nothing below: futility probability is zero.
  const BernoulliLRModel m(1.0 / 3.0, 2.0 / 3.0);
  EXPECT_THROW(futility_randomization(m, 1.0, 1.0, 0.0, kAlpha), std::logic_error);
  // A factor that is zero half the time has no slack at b = 1, so a = 0.
  const DiscreteFactorModel zero_or_two({{0.0, 0.5, 0.0}, {2.0, 0.5, 0.0}});
  const FutilityRandomization f = futility_randomization(zero_or_two, 1.0, 1.0, 0.0, kAlpha);
  EXPECT_DOUBLE_EQ(f.a, 0.0);
  EXPECT_EQ(randomized_futility_accept(zero_or_two, 1.0, 1.0, 0.0, kAlpha, 0.0), Status::AcceptNull);
}
