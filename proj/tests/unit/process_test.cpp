#include "seqboost/process.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "seqboost/truncation.hpp"

using namespace seqboost;

TEST(Level, Validates) {
  EXPECT_NO_THROW(Level(0.05, 0.2));
  EXPECT_THROW(Level(0.0), std::domain_error);
  EXPECT_THROW(Level(1.0), std::domain_error);
  EXPECT_THROW(Level(0.05, 1.0), std::domain_error);
  EXPECT_THROW(Level(0.6, 0.5), std::domain_error);
  EXPECT_TRUE(Level(0.05).power_one());
  EXPECT_DOUBLE_EQ(Level(0.05).reject_threshold(), 20.0);
}

TEST(Step, HitsCapExactly) {
  ProcessState s;
  s = step(s, {20.0, 20.0, 1.0, 1.0}, {0.05});
  EXPECT_EQ(s.status, Status::RejectNull);
  EXPECT_EQ(s.wealth, 20.0);
  EXPECT_EQ(s.t, 1u);
}

TEST(Step, FutilityAccepts) {
  ProcessState s;
  s = step(s, {0.0, 0.1, 1.0, 1.0}, {0.05, 0.4, true, false});
  EXPECT_EQ(s.status, Status::AcceptNull);
  EXPECT_EQ(s.wealth, 0.0);
}

TEST(Step, PendingRandomizationKeepsWealth) {
  ProcessState s;
  s.wealth = 8.0;
  s = step(s, {0.0, 0.5, 1.75, 1.0}, {0.05, 7.0, true, true});
  EXPECT_EQ(s.status, Status::AcceptPendingRandomization);
}

TEST(Step, Arithmetic) {
  ProcessState s;
  s.wealth = 2.0;
  s = step(s, {1.5, 1.5, 1.0, 1.0}, {0.05});
  EXPECT_EQ(s.status, Status::Continue);
  EXPECT_DOUBLE_EQ(s.wealth, 3.0);
}

TEST(Step, TracksRawWealthAndProducts) {
  ProcessState s;
  s = step(s, {3.0, 2.0, 1.5, 1.25}, {0.05});
  EXPECT_DOUBLE_EQ(s.raw_wealth, 2.0);
  EXPECT_DOUBLE_EQ(s.boost_cumprod, 1.5);
  EXPECT_DOUBLE_EQ(s.inv_boost_cumprod, 1.25);
}

TEST(Step, StoppedStateIsAnError) {
  ProcessState s;
  s = step(s, {20.0, 20.0, 1.0, 1.0}, {0.05});
  EXPECT_THROW(step(s, {1.0, 1.0, 1.0, 1.0}, {0.05}), std::logic_error);
}

TEST(Step, CapValueFromTruncationRejects) {
  // 1/(M alpha) times M may round below 1/alpha; it must still reject.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> m(0.01, 19.99);
  for (int i = 0; i < 10000; ++i) {
    ProcessState s;
    s.wealth = m(rng);
    const double f = truncate_one_sided(1e9, s.wealth, 0.05);
    s = step(s, {f, f, 1.0, 1.0}, {0.05});
    ASSERT_EQ(s.status, Status::RejectNull);
    ASSERT_EQ(s.wealth, 20.0);
  }
}

TEST(Step, UnboostedMatchesRawCrossing) {
  std::mt19937_64 rng(5);
  std::lognormal_distribution<double> factor(-0.02, 0.4);
  for (int path = 0; path < 500; ++path) {
    ProcessState s;
    double raw = 1.0;
    std::size_t raw_time = 0;
    for (std::size_t t = 1; t <= 400; ++t) {
      const double l = factor(rng);
      raw *= l;
      if (!s.stopped()) s = step(s, {truncate_one_sided(l, s.wealth, 0.05), l, 1.0, 1.0}, {0.05});
      if (raw >= 20.0 && raw_time == 0) raw_time = t;
    }
    if (raw_time != 0) {
      EXPECT_EQ(s.status, Status::RejectNull);
      EXPECT_EQ(s.t, raw_time);
    } else {
      EXPECT_FALSE(s.stopped());
    }
  }
}
