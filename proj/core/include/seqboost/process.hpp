#pragma once

#include <cstddef>
#include <optional>

namespace seqboost {

/// Type I / type II error levels. beta == 0 means a power-one test.
class Level {
 public:
  /// Throws std::domain_error unless 0 < alpha < 1, 0 <= beta < 1 and alpha + beta < 1.
  explicit Level(double alpha, double beta = 0.0);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double reject_threshold() const noexcept { return 1.0 / alpha_; }
  bool power_one() const noexcept { return beta_ == 0.0; }

 private:
  double alpha_;
  double beta_;
};

enum class Status { Continue, RejectNull, AcceptNull, AcceptPendingRandomization };

const char* to_string(Status status) noexcept;

/// Boundaries applied when stepping a process.
struct StepBounds {
  double alpha = 0.05;
  // Futility level nu_t; only consulted when two_sided is set.
  double nu = 0.0;
  bool two_sided = false;
  // Futility hits on discrete data are parked in AcceptPendingRandomization
  // instead of AcceptNull so that the caller can run the randomized rule.
  bool randomized_futility = false;
};

/// One step's worth of input to the stepper.
struct Increment {
  // Already truncated factor T(b_t L_t; M, nu).
  double truncated_factor = 1.0;
  // The raw factor L_t of the unboosted process.
  double raw_factor = 1.0;
  double boost = 1.0;
  double inverse_boost = 1.0;
};

/// State of a boosted test supermartingale.
struct ProcessState {
  std::size_t t = 0;
  double wealth = 1.0;
  double raw_wealth = 1.0;
  double boost_cumprod = 1.0;
  double inv_boost_cumprod = 1.0;
  Status status = Status::Continue;

  bool stopped() const noexcept { return status != Status::Continue; }
};

struct StopDecision {
  Status status = Status::Continue;
  std::optional<std::size_t> stopping_time;
  double terminal_wealth = 1.0;
};

/// Advances the process by one already-truncated factor.
///
/// Rejection happens when the new wealth reaches 1/alpha, in which case the
/// wealth is pinned to exactly 1/alpha. In two-sided mode the process accepts
/// when the new wealth is at or below `bounds.nu`. Throws std::logic_error when
/// called on a stopped state.
ProcessState step(const ProcessState& state, const Increment& increment, const StepBounds& bounds);

StopDecision decision_of(const ProcessState& state) noexcept;

}  // namespace seqboost
