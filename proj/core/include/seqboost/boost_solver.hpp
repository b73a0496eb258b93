#pragma once

#include <functional>

#include "seqboost/factor_model.hpp"
#include "seqboost/process.hpp"

namespace seqboost {

/// Plugged-back expectations above 1 + kGuardTolerance are rejected and the
/// boost falls back to 1.
inline constexpr double kGuardTolerance = 1e-7;
inline constexpr double kSolverTolerance = 1e-9;

enum class BoostMethod { RootBisection, ClosedForm, LargestFeasibleDiscrete, CoupledConstrained, FallbackOne };

const char* to_string(BoostMethod method) noexcept;

struct BoostResult {
  double b = 1.0;
  // Truncated null expectation recomputed at b.
  double verified_expectation = 1.0;
  int iterations = 0;
  BoostMethod method = BoostMethod::FallbackOne;
};

struct CoupledBoostResult {
  double b = 1.0;
  double b_inv = 1.0;
  // Futility levels of the forward and inverse processes at (b, b_inv).
  double nu = 0.0;
  double nu_inv = 0.0;
  double verified_expectation = 1.0;
  double verified_expectation_inv = 1.0;
  int sweeps = 0;
  BoostMethod method = BoostMethod::FallbackOne;
  // Set for discrete models, where existence of a joint solution is not guaranteed.
  bool heuristic = false;
};

/// Largest b >= 1 with expectation(b) <= 1 for a nondecreasing, left-continuous
/// expectation. Brackets from [1, 2] by doubling, then bisects to relative
/// tolerance `tol` (at most 200 iterations). The returned b is always on the
/// feasible side; if the plugged-back value exceeds 1 + kGuardTolerance the
/// result is b = 1 with method FallbackOne.
BoostResult largest_feasible(const std::function<double(double)>& expectation, double tol = kSolverTolerance);

/// One-sided boosting factor at wealth M in (0, 1/alpha). Continuous models get
/// the equality root by bisection, discrete models the exact largest feasible b.
/// Throws std::domain_error for M outside (0, 1/alpha).
BoostResult solve_boost_one_sided(const FactorModel& model, double wealth, double alpha,
                                  double tol = kSolverTolerance);

/// Two-sided boosting factor for a futility level nu fixed in advance.
BoostResult solve_boost_two_sided(const FactorModel& model, double wealth, double nu, double alpha,
                                  double tol = kSolverTolerance);

/// Two-sided boosting factor when the futility level follows the boost,
/// nu(b) = min(nu_base * b, 1/alpha). With nu_base = nu^M * prod_{i<t} b_i this is
/// the coupling that keeps the boosted test at least as fast as the original.
BoostResult solve_boost_two_sided_tracking(const FactorModel& model, double wealth, double nu_base,
                                           double alpha, double tol = kSolverTolerance);

/// Joint forward/inverse boosting factors for simultaneous type I and type II
/// control. `cum_b` and `cum_b_inv` are the boost products up to t - 1; the
/// futility levels are
///   nu     = min(beta  * cum_b * b * cum_b_inv * b_inv, 1/alpha)
///   nu_inv = min(alpha * cum_b * b * cum_b_inv * b_inv, 1/beta).
/// Maximizes b + b_inv by alternating coordinate maximization from (1, 1), which
/// stays feasible at every iterate. Falls back to (1, 1) when either plugged-back
/// expectation exceeds 1 + kGuardTolerance.
CoupledBoostResult solve_boost_coupled(const LikelihoodRatioModel& model, double wealth, double wealth_inv,
                                       double alpha, double beta, double cum_b, double cum_b_inv,
                                       double tol = 1e-8);

/// Boost for a two-point factor {1 + lambda (1 - C) w.p. C, 1 - lambda C w.p. 1 - C}:
///   (1 - C/(M alpha)) / ((1 - C)(1 - lambda C))  if M (1 + lambda (1 - C)) >= 1/alpha
///   1                                            otherwise.
/// Throws std::domain_error when C is outside (0, 1) or lambda outside [0, 1/C],
/// and when the formula degenerates (lambda * C == 1 with the cap active).
BoostResult closed_form_binary_boost(double conditional_mean, double lambda_bet, double wealth, double alpha);

/// Randomized futility quantities at a solved boost.
struct FutilityRandomization {
  double expectation = 1.0;
  double futility_probability = 0.0;
  // a_t = (1 - expectation) / futility_probability.
  double a = 0.0;
  // Reject at futility iff U <= alpha * a * M.
  double reject_threshold = 0.0;
};

/// Throws std::logic_error when the futility probability is zero.
FutilityRandomization futility_randomization(const FactorModel& model, double b_star, double wealth, double nu,
                                             double alpha);

/// Resolves a futility hit with the uniform draw U: RejectNull iff
/// U <= alpha * a_t * M, otherwise AcceptNull.
Status randomized_futility_accept(const FactorModel& model, double b_star, double wealth, double nu,
                                  double alpha, double uniform_draw);

}  // namespace seqboost
