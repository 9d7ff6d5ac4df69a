#pragma once

// Boolean-lattice primitives: subsets of [n] as words, families, maximal chains,
// and the Lubell-function machinery built on them.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fsp/arith.hpp"
#include "fsp/error.hpp"

namespace fsp {

inline constexpr int kMaxGround = 64;

/// The ground set [n] = {1, ..., n}, 1 <= n <= 64.
class GroundSet {
public:
    explicit GroundSet(int n) : n_(n) {
        if (n < 1 || n > kMaxGround) throw RangeError("ground set size must lie in [1, 64], got " + std::to_string(n));
    }
    int n() const noexcept { return n_; }
    std::uint64_t full_bits() const noexcept { return n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1); }
    bool operator==(const GroundSet&) const = default;

private:
    int n_;
};

/// A subset of [n]; bit i-1 is set iff element i is present.
struct SubsetMask {
    std::uint64_t bits = 0;

    constexpr SubsetMask() = default;
    constexpr explicit SubsetMask(std::uint64_t b) : bits(b) {}

    static SubsetMask of(std::initializer_list<int> elements) {
        SubsetMask s;
        for (int e : elements) s.bits |= std::uint64_t{1} << (e - 1);
        return s;
    }

    int size() const noexcept { return std::popcount(bits); }
    bool has(int element) const noexcept { return (bits >> (element - 1)) & 1U; }
    bool subset_of(SubsetMask other) const noexcept { return (bits & ~other.bits) == 0; }
    bool proper_subset_of(SubsetMask other) const noexcept { return subset_of(other) && bits != other.bits; }
    bool fits(const GroundSet& g) const noexcept { return (bits & ~g.full_bits()) == 0; }

    /// Elements in ascending order, 1-based.
    std::vector<int> elements() const {
        std::vector<int> out;
        for (std::uint64_t b = bits; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
        return out;
    }

    auto operator<=>(const SubsetMask&) const = default;
};

inline SubsetMask complement(SubsetMask s, const GroundSet& g) { return SubsetMask(~s.bits & g.full_bits()); }

/// A deduplicated, ordered collection of subsets of [n] with a by-size index.
///
/// Members keep first-insertion order. Duplicates are dropped on construction.
class Family {
public:
    explicit Family(GroundSet ground) : ground_(ground), by_size_(ground.n() + 1) {}

    Family(GroundSet ground, std::span<const SubsetMask> sets) : Family(ground) {
        std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
        keyed.reserve(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (!sets[i].fits(ground_)) throw RangeError("subset has elements outside [" + std::to_string(n()) + "]");
            keyed.emplace_back(sets[i].bits, static_cast<std::uint32_t>(i));
        }
        std::sort(keyed.begin(), keyed.end());
        // Keep the first occurrence of each set, in input order.
        std::vector<char> keep(sets.size(), 0);
        for (std::size_t i = 0; i < keyed.size(); ++i)
            if (i == 0 || keyed[i].first != keyed[i - 1].first) keep[keyed[i].second] = 1;
        members_.reserve(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (!keep[i]) continue;
            const auto idx = static_cast<std::uint32_t>(members_.size());
            members_.push_back(sets[i]);
            by_size_[sets[i].size()].push_back(idx);
        }
        sorted_.reserve(members_.size());
        for (std::uint32_t i = 0; i < members_.size(); ++i) sorted_.emplace_back(members_[i].bits, i);
        std::sort(sorted_.begin(), sorted_.end());
    }

    Family(GroundSet ground, std::initializer_list<SubsetMask> sets)
        : Family(ground, std::span<const SubsetMask>(sets.begin(), sets.size())) {}

    const GroundSet& ground() const noexcept { return ground_; }
    int n() const noexcept { return ground_.n(); }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    const std::vector<SubsetMask>& members() const noexcept { return members_; }
    SubsetMask operator[](std::size_t i) const { return members_[i]; }

    /// Indices into members() of the sets with exactly `k` elements.
    std::span<const std::uint32_t> of_size(int k) const {
        if (k < 0 || k > n()) return {};
        return by_size_[k];
    }

    std::optional<std::size_t> index_of(SubsetMask s) const {
        auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair{s.bits, std::uint32_t{0}},
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        if (it == sorted_.end() || it->first != s.bits) return std::nullopt;
        return it->second;
    }

    bool contains(SubsetMask s) const { return index_of(s).has_value(); }

    Family with(SubsetMask s) const {
        Family f = *this;
        f.insert(s);
        return f;
    }

    Family without(SubsetMask s) const {
        Family f(ground_);
        for (SubsetMask m : members_)
            if (m != s) f.insert(m);
        return f;
    }

    /// Appends a set not yet present and returns its index. For incremental builders.
    std::uint32_t push(SubsetMask s) {
        if (contains(s)) throw ArgumentError("push: set already in family");
        insert(s);
        return static_cast<std::uint32_t>(members_.size() - 1);
    }

    /// Removes the most recently appended member.
    void pop() {
        if (members_.empty()) throw ArgumentError("pop: family is empty");
        const SubsetMask s = members_.back();
        members_.pop_back();
        by_size_[s.size()].pop_back();
        auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair{s.bits, std::uint32_t{0}},
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        sorted_.erase(it);
    }

    /// Set equality (member order ignored).
    bool operator==(const Family& other) const {
        if (ground_ != other.ground_ || sorted_.size() != other.sorted_.size()) return false;
        for (std::size_t i = 0; i < sorted_.size(); ++i)
            if (sorted_[i].first != other.sorted_[i].first) return false;
        return true;
    }

    /// Members sorted ascending by bitmask.
    std::vector<SubsetMask> sorted_members() const {
        std::vector<SubsetMask> out;
        out.reserve(sorted_.size());
        for (const auto& [bits, idx] : sorted_) out.emplace_back(bits);
        return out;
    }

private:
    void insert(SubsetMask s) {
        if (!s.fits(ground_))
            throw RangeError("subset has elements outside [" + std::to_string(n()) + "]");
        auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair{s.bits, std::uint32_t{0}},
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        if (it != sorted_.end() && it->first == s.bits) return;
        const auto idx = static_cast<std::uint32_t>(members_.size());
        sorted_.insert(it, {s.bits, idx});
        members_.push_back(s);
        by_size_[s.size()].push_back(idx);
    }

    GroundSet ground_;
    std::vector<SubsetMask> members_;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> sorted_;
    std::vector<std::vector<std::uint32_t>> by_size_;
};

/// The full power set of [n], listed by ascending bitmask. Only sensible for small n.
inline Family power_set(GroundSet g) {
    if (g.n() > 24) throw RangeError("power_set: n too large to materialize");
    std::vector<SubsetMask> sets;
    sets.reserve(std::size_t{1} << g.n());
    for (std::uint64_t b = 0; b <= g.full_bits(); ++b) sets.emplace_back(b);
    return Family(g, sets);
}

/// Seeded generator. Uses the fully specified mt19937_64 stream and its own
/// bounded draw so sampled output is identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// A maximal chain of [n], stored as a permutation; C_i is the set of the first i entries.
class Chain {
public:
    explicit Chain(std::vector<int> order) : order_(std::move(order)) {
        std::uint64_t seen = 0;
        for (int e : order_) {
            if (e < 1 || e > kMaxGround || ((seen >> (e - 1)) & 1U)) throw ArgumentError("chain order must be a permutation of [n]");
            seen |= std::uint64_t{1} << (e - 1);
        }
        if (order_.empty() || seen != GroundSet(static_cast<int>(order_.size())).full_bits())
            throw ArgumentError("chain order must be a permutation of [n]");
    }

    int n() const noexcept { return static_cast<int>(order_.size()); }
    const std::vector<int>& order() const noexcept { return order_; }

    /// The level-i set C_i, 0 <= i <= n.
    SubsetMask level(int i) const {
        SubsetMask s;
        for (int j = 0; j < i; ++j) s.bits |= std::uint64_t{1} << (order_[j] - 1);
        return s;
    }

    bool contains(SubsetMask s) const { return level(s.size()) == s; }

    bool operator==(const Chain&) const = default;

private:
    std::vector<int> order_;
};

/// Uniformly random maximal chain of [n] via Fisher-Yates on the element order.
inline Chain random_chain(int n, Rng& rng) {
    GroundSet g(n);
    std::vector<int> order(g.n());
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    return Chain(std::move(order));
}

/// Lubell function: sum over members of 1/C(n, |F|).
inline Rational lubell(const Family& family) {
    Rational total = 0;
    for (int k = 0; k <= family.n(); ++k) {
        const auto count = family.of_size(k).size();
        if (count != 0) total += Rational(BigInt(count), BigInt(binomial_u64(family.n(), k)));
    }
    return total;
}

namespace detail {

// Sum of C(n, i) over ceil((n-k)/2) <= i <= ceil((n+k)/2) - 1; zero for k = 0.
inline BigInt middle_sum(int n, int k) {
    if (k == 0) return 0;
    return sigma(n, k);
}

} // namespace detail

/// Upper bound on |F| for a family whose Lubell value is x + y, x integral:
/// Sigma(n, x) + y * C(n, ceil((n + x) / 2)). With x = 0 this is y * C(n, floor(n/2)).
inline Rational lub_bound(int n, int x, const Rational& y) {
    if (n < 1) throw RangeError("lub_bound: n must be positive");
    if (x < 0 || y < 0) throw RangeError("lub_bound: x and y must be non-negative");
    if (x > n + 1) throw RangeError("lub_bound: x must not exceed n+1");
    const int level = static_cast<int>(detail::ceil_div(n + x, 2));
    return Rational(detail::middle_sum(n, x)) + y * Rational(binomial(n, level));
}

/// Number of maximal chains of [n] through one fixed nested tower whose
/// members have the given strictly increasing sizes.
inline BigInt chains_through(std::span<const int> sizes, int n) {
    if (n < 0) throw RangeError("chains_through: n must be non-negative");
    BigInt count = 1;
    int prev = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const int s = sizes[i];
        if (s < 0 || s > n) throw RangeError("chains_through: size outside [0, n]");
        if (i > 0 && s <= prev) throw RangeError("chains_through: sizes must be strictly increasing");
        count *= factorial(s - prev);
        prev = s;
    }
    return count * factorial(n - prev);
}

inline BigInt chains_through(std::initializer_list<int> sizes, int n) {
    return chains_through(std::span<const int>(sizes.begin(), sizes.size()), n);
}

/// Window half-width k = ceil(2 sqrt(n ln n)) around the middle level.
/// The logarithm is natural and k is rounded up.
inline int tail_width(int n) {
    if (n < 2) return 0;
    const double nd = static_cast<double>(n);
    return static_cast<int>(std::ceil(2.0 * std::sqrt(nd * std::log(nd))));
}

/// 2 * sum_{i=0}^{floor(n/2 - k)} C(n, i) / C(n, floor(n/2)) with k = tail_width(n).
inline Rational tail_ratio(int n) {
    if (n < 4) throw RangeError("tail_ratio: n must be at least 4");
    const int k = tail_width(n);
    const long long upper = detail::floor_div(static_cast<long long>(n) - 2LL * k, 2);
    if (upper < 0) return 0;
    BigInt sum = 0;
    for (long long i = 0; i <= upper; ++i) sum += binomial(n, static_cast<int>(i));
    return Rational(2 * sum, binomial(n, n / 2));
}

} // namespace fsp
