#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

namespace mdlbb::detail {

// k distinct values from [0, n), sorted. Floyd's algorithm for small k,
// a partial shuffle otherwise.
inline std::vector<std::uint32_t> sample_distinct(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::uint32_t> out;
    out.reserve(k);
    if (2 * k > n) {
        std::vector<std::uint32_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        out.assign(all.begin(), all.begin() + std::ptrdiff_t(k));
    } else if (k <= 64) {
        for (std::size_t j = n - k; j < n; ++j) {
            std::uniform_int_distribution<std::size_t> pick(0, j);
            auto t = std::uint32_t(pick(rng));
            if (std::find(out.begin(), out.end(), t) != out.end()) t = std::uint32_t(j);
            out.push_back(t);
        }
    } else {
        std::unordered_set<std::uint32_t> seen;
        seen.reserve(2 * k);
        for (std::size_t j = n - k; j < n; ++j) {
            std::uniform_int_distribution<std::size_t> pick(0, j);
            auto t = std::uint32_t(pick(rng));
            if (!seen.insert(t).second) {
                t = std::uint32_t(j);
                seen.insert(t);
            }
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace mdlbb::detail
