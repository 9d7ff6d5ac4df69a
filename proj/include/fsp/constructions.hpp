#pragma once

// Extremal and lower-bound families.

#include <cstdint>
#include <vector>

#include "fsp/arith.hpp"
#include "fsp/error.hpp"
#include "fsp/lattice.hpp"

namespace fsp {

inline constexpr int kMaxConstructN = 30;

namespace detail {

// All k-subsets of [n] in ascending bitmask order (Gosper's hack).
inline void append_level(std::vector<SubsetMask>& out, int n, int k) {
    if (k == 0) {
        out.emplace_back(0);
        return;
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t s = (std::uint64_t{1} << k) - 1; s < limit;) {
        out.emplace_back(s);
        const std::uint64_t c = s & (~s + 1);
        const std::uint64_t r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

inline void check_construct_n(int n) {
    if (n < 1 || n > kMaxConstructN) throw RangeError("constructions are limited to 1 <= n <= 30");
}

} // namespace detail

/// Every subset whose size i satisfies ceil((n-r)/2) <= i <= ceil((n+r)/2) - 1,
/// i.e. the r levels of largest binomial coefficient. Levels ascend, bitmasks ascend within a level.
inline Family middle_levels(int n, int r) {
    detail::check_construct_n(n);
    if (r < 1 || r > n + 1) throw RangeError("middle_levels: r must lie in [1, n+1]");
    const long long lo = detail::ceil_div(n - r, 2);
    const long long hi = detail::ceil_div(n + r, 2) - 1;
    std::vector<SubsetMask> sets;
    for (long long i = lo; i <= hi; ++i) detail::append_level(sets, n, static_cast<int>(i));
    return Family(GroundSet(n), sets);
}

/// Sets of size floor(n/2) avoiding element 1 together with sets of size
/// ceil(n/2) containing element 1.
inline Family kt_construction(int n) {
    detail::check_construct_n(n);
    if (n < 2) throw RangeError("kt_construction: n must be at least 2");
    std::vector<SubsetMask> level;
    std::vector<SubsetMask> sets;
    detail::append_level(level, n, n / 2);
    for (SubsetMask s : level)
        if (!s.has(1)) sets.push_back(s);
    level.clear();
    detail::append_level(level, n, (n + 1) / 2);
    for (SubsetMask s : level)
        if (s.has(1)) sets.push_back(s);
    return Family(GroundSet(n), sets);
}

/// Largest r with C(r, floor(r/2)) < m.
inline int diamond_level_count(int m) {
    if (m < 2) throw RangeError("diamond_level_count: m must be at least 2");
    int r = 0;
    while (binomial(r + 1, (r + 1) / 2) < m) ++r;
    return r;
}

/// The diamond_level_count(m) middle levels of [n], clamped to the full power set.
inline Family diamond_levels(int n, int m) {
    detail::check_construct_n(n);
    const int r = diamond_level_count(m);
    return middle_levels(n, std::min(r, n + 1));
}

/// {[n] \ F : F in family}, in the same member order.
inline Family complement_family(const Family& family) {
    std::vector<SubsetMask> sets;
    sets.reserve(family.size());
    for (SubsetMask s : family.members()) sets.push_back(complement(s, family.ground()));
    return Family(family.ground(), sets);
}

} // namespace fsp
