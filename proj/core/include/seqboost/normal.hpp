#pragma once

#include <cmath>
#include <numbers>

namespace seqboost {

// Both tails go through erfc so that tiny probabilities keep full relative
// precision; 1 - normal_cdf(z) would cancel for large z.
inline double normal_cdf(double z) noexcept {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

inline double normal_ccdf(double z) noexcept {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

inline double normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace seqboost
