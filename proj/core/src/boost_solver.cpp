#include "seqboost/boost_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqboost/truncation.hpp"

namespace seqboost {

const char* to_string(BoostMethod method) noexcept {
  switch (method) {
    case BoostMethod::RootBisection: return "root_bisection";
    case BoostMethod::ClosedForm: return "closed_form";
    case BoostMethod::LargestFeasibleDiscrete: return "largest_feasible_discrete";
    case BoostMethod::CoupledConstrained: return "coupled_constrained";
    case BoostMethod::FallbackOne: return "fallback_one";
  }
  return "unknown";
}

namespace {

constexpr int kMaxIterations = 200;
constexpr double kMaxBoost = 1e15;

void check_wealth(double wealth, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("boost: alpha must lie in (0, 1)");
  if (!(wealth > 0.0 && wealth < 1.0 / alpha)) {
    throw std::domain_error("boost: wealth must lie in (0, 1/alpha), got " + std::to_string(wealth));
  }
}

BoostResult fallback(double expectation_at_one, int iterations) {
  return {1.0, expectation_at_one, iterations, BoostMethod::FallbackOne};
}

// Exact largest feasible boost for a finite factor distribution with a fixed
// futility level. On each segment between consecutive breakpoints
// nu/(M a) and 1/(alpha M a) every atom is either zeroed, passed through or
// capped, so the expectation is A + B b there.
BoostResult largest_feasible_atoms(const FactorModel& model, double wealth, double nu, double alpha) {
  const std::vector<Atom> atoms = model.atoms();
  const double cap = 1.0 / (wealth * alpha);
  const auto exact = [&](double b) { return truncated_expectation_two_sided(model, b, wealth, nu, alpha); };

  std::vector<double> breaks{1.0};
  for (const Atom& a : atoms) {
    if (!(a.value > 0.0) || a.p_null == 0.0) continue;
    for (double bp : {nu / (wealth * a.value), 1.0 / (alpha * wealth * a.value)}) {
      if (bp > 1.0 && std::isfinite(bp)) breaks.push_back(bp);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double e1 = exact(1.0);
  if (e1 > 1.0 + kGuardTolerance) return fallback(e1, 0);

  double answer = 1.0;
  int segments = 0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    ++segments;
    const double s = breaks[i];
    const bool last = i + 1 == breaks.size();
    const double e = last ? std::numeric_limits<double>::infinity() : breaks[i + 1];
    const double mid = last ? 2.0 * s : 0.5 * (s + e);
    double A = 0.0;
    double B = 0.0;
    for (const Atom& a : atoms) {
      const double x = mid * a.value;
      if (wealth * x <= nu) continue;
      if (wealth * x <= 1.0 / alpha) {
        B += a.p_null * a.value;
      } else {
        A += a.p_null * cap;
      }
    }
    if (last) {
      if (B == 0.0) {
        // Everything is capped or zeroed: the expectation no longer moves.
        answer = A <= 1.0 ? mid : s;
      } else {
        answer = A + B * s < 1.0 ? std::max(s, (1.0 - A) / B) : s;
      }
      break;
    }
    if (A + B * e <= 1.0) {
      answer = e;
      continue;
    }
    answer = (A + B * s >= 1.0 || B == 0.0) ? s : std::clamp((1.0 - A) / B, s, e);
    break;
  }

  // The segment algebra and the direct evaluation can disagree in the last
  // bits; step down until the direct evaluation is feasible.
  double value = exact(answer);
  for (int k = 0; k < 64 && value > 1.0 && answer > 1.0; ++k) {
    answer = std::max(1.0, std::nextafter(answer, 0.0));
    value = exact(answer);
  }
  if (value > 1.0 + kGuardTolerance) return fallback(e1, segments);
  return {answer, value, segments, BoostMethod::LargestFeasibleDiscrete};
}

}  // namespace

BoostResult largest_feasible(const std::function<double(double)>& expectation, double tol) {
  const double e1 = expectation(1.0);
  if (e1 > 1.0 + kGuardTolerance) return fallback(e1, 0);

  int iterations = 0;
  double lo = 1.0;
  double hi = 2.0;
  while (expectation(hi) <= 1.0) {
    ++iterations;
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxBoost) {
      return {lo, expectation(lo), iterations, BoostMethod::RootBisection};
    }
  }
  while (hi - lo > tol * lo && iterations < kMaxIterations) {
    ++iterations;
    const double mid = 0.5 * (lo + hi);
    if (expectation(mid) <= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double value = expectation(lo);
  if (value > 1.0 + kGuardTolerance) return fallback(e1, iterations);
  return {lo, value, iterations, BoostMethod::RootBisection};
}

BoostResult solve_boost_one_sided(const FactorModel& model, double wealth, double alpha, double tol) {
  return solve_boost_two_sided(model, wealth, 0.0, alpha, tol);
}

BoostResult solve_boost_two_sided(const FactorModel& model, double wealth, double nu, double alpha,
                                  double tol) {
  check_wealth(wealth, alpha);
  if (!(nu >= 0.0) || nu > 1.0 / alpha) throw std::domain_error("boost: nu must lie in [0, 1/alpha]");
  if (!model.continuous()) return largest_feasible_atoms(model, wealth, nu, alpha);
  return largest_feasible(
      [&](double b) { return truncated_expectation_two_sided(model, b, wealth, nu, alpha); }, tol);
}

BoostResult solve_boost_two_sided_tracking(const FactorModel& model, double wealth, double nu_base,
                                           double alpha, double tol) {
  check_wealth(wealth, alpha);
  if (!(nu_base >= 0.0)) throw std::domain_error("boost: nu_base must be nonnegative");
  const double cap = 1.0 / alpha;
  BoostResult r = largest_feasible(
      [&](double b) {
        return truncated_expectation_two_sided(model, b, wealth, std::min(nu_base * b, cap), alpha);
      },
      tol);
  if (!model.continuous() && r.method == BoostMethod::RootBisection) r.method = BoostMethod::LargestFeasibleDiscrete;
  return r;
}

CoupledBoostResult solve_boost_coupled(const LikelihoodRatioModel& model, double wealth, double wealth_inv,
                                       double alpha, double beta, double cum_b, double cum_b_inv, double tol) {
  check_wealth(wealth, alpha);
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("coupled boost: beta must lie in (0, 1)");
  if (!(wealth_inv > 0.0 && wealth_inv < 1.0 / beta)) {
    throw std::domain_error("coupled boost: inverse wealth must lie in (0, 1/beta)");
  }
  if (!(cum_b >= 1.0) || !(cum_b_inv >= 1.0)) {
    throw std::domain_error("coupled boost: boost products must be at least 1");
  }
  const auto inverse = model.inverse();
  const double base = cum_b * cum_b_inv;
  const auto nu_of = [&](double b, double bi) { return std::min(beta * base * b * bi, 1.0 / alpha); };
  const auto nu_inv_of = [&](double b, double bi) { return std::min(alpha * base * b * bi, 1.0 / beta); };
  const auto forward = [&](double b, double bi) {
    return truncated_expectation_two_sided(model, b, wealth, nu_of(b, bi), alpha);
  };
  const auto backward = [&](double b, double bi) {
    return truncated_expectation_two_sided(*inverse, bi, wealth_inv, nu_inv_of(b, bi), beta);
  };

  CoupledBoostResult out;
  out.heuristic = !model.continuous();
  double b = 1.0;
  double bi = 1.0;
  int sweeps = 0;
  while (sweeps < 100) {
    ++sweeps;
    const double b_next = largest_feasible([&](double x) { return forward(x, bi); }).b;
    const double bi_next = largest_feasible([&](double y) { return backward(b_next, y); }).b;
    const bool settled =
        std::abs(b_next - b) <= tol * b && std::abs(bi_next - bi) <= tol * bi;
    b = b_next;
    bi = bi_next;
    if (settled) break;
  }

  double ef = forward(b, bi);
  double eb = backward(b, bi);
  out.method = BoostMethod::CoupledConstrained;
  if (ef > 1.0 + kGuardTolerance || eb > 1.0 + kGuardTolerance) {
    b = 1.0;
    bi = 1.0;
    ef = forward(b, bi);
    eb = backward(b, bi);
    out.method = BoostMethod::FallbackOne;
  }
  out.b = b;
  out.b_inv = bi;
  out.nu = nu_of(b, bi);
  out.nu_inv = nu_inv_of(b, bi);
  out.verified_expectation = ef;
  out.verified_expectation_inv = eb;
  out.sweeps = sweeps;
  return out;
}

BoostResult closed_form_binary_boost(double conditional_mean, double lambda_bet, double wealth, double alpha) {
  const double c = conditional_mean;
  check_wealth(wealth, alpha);
  if (!(c > 0.0 && c < 1.0)) throw std::domain_error("closed-form boost: C must lie in (0, 1)");
  if (!(lambda_bet >= 0.0) || lambda_bet * c > 1.0) {
    throw std::domain_error("closed-form boost: lambda must lie in [0, 1/C]");
  }
  const double up = 1.0 + lambda_bet * (1.0 - c);
  const double down = 1.0 - lambda_bet * c;
  const auto expectation = [&](double b) {
    return c * truncate_one_sided(b * up, wealth, alpha) + (1.0 - c) * truncate_one_sided(b * down, wealth, alpha);
  };
  if (wealth * up < 1.0 / alpha) return {1.0, expectation(1.0), 0, BoostMethod::ClosedForm};
  if (down == 0.0) throw std::domain_error("closed-form boost: degenerate bet (lambda * C == 1)");
  const double b = (1.0 - c / (wealth * alpha)) / ((1.0 - c) * down);
  const double value = expectation(b);
  if (value > 1.0 + kGuardTolerance) return fallback(expectation(1.0), 0);
  return {std::max(b, 1.0), value, 0, BoostMethod::ClosedForm};
}

FutilityRandomization futility_randomization(const FactorModel& model, double b_star, double wealth, double nu,
                                             double alpha) {
  check_wealth(wealth, alpha);
  FutilityRandomization r;
  r.expectation = truncated_expectation_two_sided(model, b_star, wealth, nu, alpha);
  if (model.continuous()) {
    r.futility_probability = model.null_cdf(nu / (b_star * wealth));
  } else {
    for (const Atom& a : model.atoms()) {
      if (wealth * (b_star * a.value) <= nu) r.futility_probability += a.p_null;
    }
  }
  if (!(r.futility_probability > 0.0)) {
    throw std::logic_error("futility randomization: futility has probability zero");
  }
  r.a = std::max(0.0, 1.0 - r.expectation) / r.futility_probability;
  r.reject_threshold = alpha * r.a * wealth;
  return r;
}

Status randomized_futility_accept(const FactorModel& model, double b_star, double wealth, double nu,
                                  double alpha, double uniform_draw) {
  if (!(uniform_draw >= 0.0 && uniform_draw <= 1.0)) {
    throw std::domain_error("randomized futility: uniform draw must lie in [0, 1]");
  }
  const FutilityRandomization r = futility_randomization(model, b_star, wealth, nu, alpha);
  return r.a > 0.0 && uniform_draw <= r.reject_threshold ? Status::RejectNull : Status::AcceptNull;
}

}  // namespace seqboost
