#pragma once

#include <cstdint>

namespace mdlbb {

/*
 * log2 of the binomial coefficient C(n, k).
 *
 * C(n, 0) = C(n, n) = 1 and, by convention, C(-1, -1) = 1 (the empty
 * composition of zero into zero parts). Any other k < 0 or k > n is a
 * DomainError. Accurate to ~1e-14 relative for n up to 1e12.
 */
double log2_binomial(std::int64_t n, std::int64_t k);

/// log2(n!) for n >= 0.
double log2_factorial(std::int64_t n);

/// Natural-log Stirling remainder: ln n! - [(n + 1/2) ln n - n + ln(2 pi)/2].
double stirling_remainder(double n);

} // namespace mdlbb
