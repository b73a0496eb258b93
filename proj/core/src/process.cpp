#include "seqboost/process.hpp"

#include <stdexcept>
#include <string>

namespace seqboost {

Level::Level(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("Level: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw std::domain_error("Level: beta must lie in [0, 1), got " + std::to_string(beta));
  }
  if (!(alpha + beta < 1.0)) {
    throw std::domain_error("Level: alpha + beta must be below 1");
  }
}

const char* to_string(Status status) noexcept {
  switch (status) {
    case Status::Continue: return "continue";
    case Status::RejectNull: return "reject";
    case Status::AcceptNull: return "accept";
    case Status::AcceptPendingRandomization: return "accept_pending";
  }
  return "unknown";
}

ProcessState step(const ProcessState& state, const Increment& increment, const StepBounds& bounds) {
  if (state.stopped()) {
    throw std::logic_error(std::string("step: process already stopped (") + to_string(state.status) +
                           ")");
  }
  if (!(increment.truncated_factor >= 0.0)) {
    throw std::domain_error("step: factor must be nonnegative");
  }
  const double cap = 1.0 / bounds.alpha;

  ProcessState next = state;
  next.t = state.t + 1;
  next.raw_wealth = state.raw_wealth * increment.raw_factor;
  next.boost_cumprod = state.boost_cumprod * increment.boost;
  next.inv_boost_cumprod = state.inv_boost_cumprod * increment.inverse_boost;

  const double wealth = state.wealth * increment.truncated_factor;
  // The truncation returns exactly 1/(M alpha) when it binds; recognise that
  // value as well, since M * (1/(M alpha)) can round just below 1/alpha.
  const bool hits_cap =
      wealth >= cap || (state.wealth > 0.0 && increment.truncated_factor >= 1.0 / (state.wealth * bounds.alpha));
  if (hits_cap) {
    next.wealth = cap;
    next.status = Status::RejectNull;
    return next;
  }
  next.wealth = wealth;
  if (bounds.two_sided && wealth <= bounds.nu) {
    next.status = bounds.randomized_futility ? Status::AcceptPendingRandomization : Status::AcceptNull;
    if (next.status == Status::AcceptNull) next.wealth = 0.0;
  }
  return next;
}

StopDecision decision_of(const ProcessState& state) noexcept {
  StopDecision d;
  d.status = state.status;
  if (state.stopped()) d.stopping_time = state.t;
  d.terminal_wealth = state.wealth;
  return d;
}

}  // namespace seqboost
