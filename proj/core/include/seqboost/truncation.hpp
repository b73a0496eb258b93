#pragma once

namespace seqboost {

/// Caps a multiplicative factor so that the wealth `wealth * factor` never
/// exceeds 1/alpha. Returns `x` when `wealth * x <= 1/alpha`, otherwise
/// `1 / (wealth * alpha)`. `x` may be +infinity.
///
/// Throws std::domain_error when `wealth <= 0`, `x < 0` or alpha is not in (0, 1).
double truncate_one_sided(double x, double wealth, double alpha);

/// Two-sided variant with a futility level `nu` in [0, 1/alpha]:
///   0                     if wealth * x <= nu
///   x                     if nu < wealth * x <= 1/alpha
///   1 / (wealth * alpha)  otherwise
/// With nu == 0 this agrees with truncate_one_sided for every x > 0, and maps
/// x == 0 to 0 as well.
double truncate_two_sided(double x, double wealth, double nu, double alpha);

}  // namespace seqboost
