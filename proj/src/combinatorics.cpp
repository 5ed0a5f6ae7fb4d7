#include "mdlbb/combinatorics.hpp"

#include "mdlbb/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mdlbb {

namespace {

constexpr double kLn2 = std::numbers::ln2;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

} // namespace

double stirling_remainder(double n) {
    if (n <= 15.0) {
        return std::lgamma(n + 1.0) - ((n + 0.5) * std::log(n) - n + kHalfLog2Pi);
    }
    const double n2 = n * n;
    // 1/(12n) - 1/(360n^3) + 1/(1260n^5) - 1/(1680n^7) + 1/(1188n^9)
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - (1.0 / 1188.0) / n2) / n2) / n2) / n2) / n;
}

double log2_binomial(std::int64_t n, std::int64_t k) {
    if (n == -1 && k == -1) return 0.0;
    if (k < 0 || n < 0 || k > n)
        throw DomainError("log2_binomial: invalid arguments (" + std::to_string(n) + ", " + std::to_string(k) + ")");
    if (k == 0 || k == n) return 0.0;
    if (n < 30) {
        return (std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0)) / kLn2;
    }
    // Split into well-conditioned positive pieces instead of differencing
    // three large log-gamma values.
    const double nn = double(n);
    const double kk = double(k);
    const double rest = double(n - k);
    double ln = kk * std::log(nn / kk) + rest * std::log1p(kk / rest) + 0.5 * std::log(nn / (kk * rest)) -
                kHalfLog2Pi + stirling_remainder(nn) - stirling_remainder(kk) - stirling_remainder(rest);
    return ln / kLn2;
}

double log2_factorial(std::int64_t n) {
    if (n < 0) throw DomainError("log2_factorial: negative argument");
    if (n < 2) return 0.0;
    return std::lgamma(double(n) + 1.0) / kLn2;
}

} // namespace mdlbb
