#include "seqboost/truncation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqboost {
namespace {

void check_common(double x, double wealth, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("truncation: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(wealth > 0.0)) {
    throw std::domain_error("truncation: wealth must be positive, got " + std::to_string(wealth));
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("truncation: factor must be nonnegative");
  }
}

}  // namespace

double truncate_one_sided(double x, double wealth, double alpha) {
  check_common(x, wealth, alpha);
  if (wealth * x <= 1.0 / alpha) return x;
  return 1.0 / (wealth * alpha);
}

double truncate_two_sided(double x, double wealth, double nu, double alpha) {
  check_common(x, wealth, alpha);
  if (!(nu >= 0.0) || nu > 1.0 / alpha) {
    throw std::domain_error("truncation: futility level must lie in [0, 1/alpha], got " +
                            std::to_string(nu));
  }
  const double candidate = wealth * x;
  if (candidate <= nu) return 0.0;
  if (candidate <= 1.0 / alpha) return x;
  return 1.0 / (wealth * alpha);
}

}  // namespace seqboost
