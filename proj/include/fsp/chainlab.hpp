#pragma once

// Chain-counting audits of the averaging arguments behind the bounds:
// sampled and exact Lubell values, the weighted chain identity, the windowed
// fork Lubell bound, the S(F) weight recursion and the alpha(F) chain
// ownership rule for pair-free families.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "fsp/arith.hpp"
#include "fsp/detector.hpp"
#include "fsp/error.hpp"
#include "fsp/lattice.hpp"
#include "fsp/poset.hpp"

namespace fsp {

// ---------------------------------------------------------------------------
// Sampling

struct ChainSampleReport {
    std::uint64_t trials = 0;
    double mean = 0.0;
    double std_error = 0.0;
    Rational exact_target;
};

namespace detail {

class MembershipTable {
public:
    explicit MembershipTable(const Family& family) : family_(family) {
        if (family.n() <= 24) {
            bitmap_.assign(std::size_t{1} << family.n(), 0);
            for (SubsetMask s : family.members()) bitmap_[s.bits] = 1;
        }
    }
    bool contains(std::uint64_t bits) const { return bitmap_.empty() ? family_.contains(SubsetMask(bits)) : bitmap_[bits] != 0; }

private:
    const Family& family_;
    std::vector<char> bitmap_;
};

struct SampleSums {
    double sum = 0;
    double sum_sq = 0;
};

inline SampleSums sample_chains(const Family& family, const MembershipTable& table, std::uint64_t trials, std::uint64_t seed) {
    SampleSums out;
    Rng rng(seed);
    const int n = family.n();
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Chain c = random_chain(n, rng);
        std::uint64_t bits = 0;
        int hits = table.contains(0) ? 1 : 0;
        for (int e : c.order()) {
            bits |= std::uint64_t{1} << (e - 1);
            hits += table.contains(bits) ? 1 : 0;
        }
        out.sum += hits;
        out.sum_sq += static_cast<double>(hits) * hits;
    }
    return out;
}

} // namespace detail

/// Mean of |c intersect F| over `trials` uniform random chains. Worker w draws
/// its share of the trials from seed + w, so output depends only on (seed, workers).
inline ChainSampleReport estimate_lubell(const Family& family, std::uint64_t trials, std::uint64_t seed, int workers = 1) {
    if (trials < 1) throw RangeError("estimate_lubell: trials must be at least 1");
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(trials, 256))));
    const detail::MembershipTable table(family);
    std::vector<detail::SampleSums> parts(workers);
    std::vector<std::uint64_t> share(workers, trials / workers);
    for (std::uint64_t i = 0; i < trials % workers; ++i) ++share[i];
    if (workers == 1) {
        parts[0] = detail::sample_chains(family, table, trials, seed);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] { parts[w] = detail::sample_chains(family, table, share[w], seed + static_cast<std::uint64_t>(w)); });
        for (auto& th : pool) th.join();
    }
    detail::SampleSums total;
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    ChainSampleReport r;
    r.trials = trials;
    r.mean = total.sum / static_cast<double>(trials);
    if (trials > 1) {
        const double var = std::max(0.0, (total.sum_sq - total.sum * r.mean) / static_cast<double>(trials - 1));
        r.std_error = std::sqrt(var / static_cast<double>(trials));
    }
    r.exact_target = lubell(family);
    return r;
}

// ---------------------------------------------------------------------------
// Weighted chain average

/// Average over all chains of the total weight C(n,|F|) of the members met,
/// computed as sum_F C(n,|F|) * #chains through F / n!. Equals |F| identically.
inline Rational weighted_chain_average(const Family& family) {
    const int n = family.n();
    const BigInt all = factorial(n);
    BigInt total = 0;
    for (int k = 0; k <= n; ++k) {
        const auto count = family.of_size(k).size();
        if (count == 0) continue;
        const int size[] = {k};
        total += BigInt(count) * binomial(n, k) * chains_through(size, n);
    }
    return Rational(total, all);
}

// ---------------------------------------------------------------------------
// Windowed fork Lubell audit

struct ForkLambdaReport {
    int n = 0;
    int s = 0;
    int window = 0;            // k = ceil(2 sqrt(n ln n))
    std::size_t windowed_size = 0;
    Rational lambda_window;    // Lubell value of the sets with n/2 - k <= |F| <= n/2 + k
    Rational main_term;        // 1 + 2(s-1)/n
    std::optional<Rational> smallest_c;  // least c >= 0 with lambda <= main + c k / n^2
    Rational hard_bound;       // 2 + (2/3)(s-1)
    bool pass = false;
};

/// Requires `family` to avoid fork(s). Hard-fails only when the windowed Lubell
/// value exceeds 2 + (2/3)(s-1): at most 1 from [n] plus the exact chain-average
/// bound 1 + (s-1) max_k q(k) with max_k q(k) = 2/3.
inline ForkLambdaReport audit_fork_lambda(const Family& family, int s) {
    if (s < 2) throw ArgumentError("audit_fork_lambda: s must be at least 2");
    if (!is_avoiding(family, build_named(ConfigId::fork(s)))) throw ArgumentError("audit_fork_lambda: family contains a size-restricted fork");
    ForkLambdaReport r;
    r.n = family.n();
    r.s = s;
    r.window = tail_width(r.n);
    std::vector<SubsetMask> kept;
    for (SubsetMask f : family.members()) {
        const long long twice = 2LL * f.size();
        if (twice >= r.n - 2LL * r.window && twice <= r.n + 2LL * r.window) kept.push_back(f);
    }
    const Family windowed(family.ground(), kept);
    r.windowed_size = windowed.size();
    r.lambda_window = lubell(windowed);
    r.main_term = 1 + Rational(2 * (s - 1), r.n);
    if (r.window > 0) {
        const Rational excess = r.lambda_window - r.main_term;
        r.smallest_c = excess > 0 ? excess * Rational(BigInt(r.n) * r.n, r.window) : Rational(0);
    }
    r.hard_bound = 2 + Rational(2 * (s - 1), 3);
    r.pass = r.lambda_window <= r.hard_bound;
    return r;
}

// ---------------------------------------------------------------------------
// S(F): average weight of members of R strictly between F and [n] on a uniform chain from F to [n]

/// Direct form: sum over X in R with F < X < [n] of C(n,|X|) / C(n-|F|, |X|-|F|).
inline Rational compute_S(const Family& r_family, SubsetMask f) {
    const int n = r_family.n();
    const GroundSet& g = r_family.ground();
    if (!f.fits(g)) throw ArgumentError("compute_S: set outside the ground set");
    const SubsetMask full(g.full_bits());
    Rational total = 0;
    for (SubsetMask x : r_family.members()) {
        if (!f.proper_subset_of(x) || x == full) continue;
        total += Rational(binomial(n, x.size()), binomial(n - f.size(), x.size() - f.size()));
    }
    return total;
}

/// Recursive form: S(F) = N/(n-|F|) C(n,|F|+1) + 1/(n-|F|) sum_i S(A_i) over the
/// n-|F| one-element extensions A_i of F, N of which lie in R; S(F) = 0 when |F| >= n-1.
inline Rational compute_S_recursive(const Family& r_family, SubsetMask f) {
    const int n = r_family.n();
    if (!f.fits(r_family.ground())) throw ArgumentError("compute_S_recursive: set outside the ground set");
    if (n - f.size() > 20) throw RangeError("compute_S_recursive: more than 2^20 supersets to visit");
    std::unordered_map<std::uint64_t, Rational> memo;
    std::vector<BigInt> weight(n + 1);
    for (int k = 0; k <= n; ++k) weight[k] = binomial(n, k);
    const std::uint64_t full = r_family.ground().full_bits();
    std::function<Rational(std::uint64_t)> rec = [&](std::uint64_t bits) -> Rational {
        const int size = std::popcount(bits);
        if (size >= n - 1) return 0;
        if (auto it = memo.find(bits); it != memo.end()) return it->second;
        int in_r = 0;
        Rational sub = 0;
        for (std::uint64_t free = full & ~bits; free != 0; free &= free - 1) {
            const std::uint64_t a = bits | (free & (~free + 1));
            in_r += r_family.contains(SubsetMask(a)) ? 1 : 0;
            sub += rec(a);
        }
        const int up = n - size;
        Rational value = Rational(BigInt(in_r) * weight[size + 1], up) + sub / up;
        memo.emplace(bits, value);
        return value;
    };
    return rec(f.bits);
}

struct SLemmaRow {
    SubsetMask f;
    Rational direct;
    Rational recursive;
    std::optional<Rational> bound_i;   // C(n,|F|+1) when |F| >= m-1
    std::optional<Rational> bound_ii;  // C(n,m) + sum_{i=|F|+1}^{m-1} C(n,i)/(n-i+1) when |F| <= m-1
    bool pass = false;
};

struct SLemmaReport {
    int n = 0;
    std::vector<SLemmaRow> rows;
    bool pass = false;
};

inline constexpr int kSLemmaMaxN = 8;

/// The "B < D with |B| = |C|" pattern that R must avoid.
inline ConfigSet s_lemma_hypothesis() {
    return ConfigSet({ColoredPoset(3, {{0, 2}}, {1, 1, 2}, "B<D,|B|=|C|")}, "s_lemma_hypothesis");
}

/// Evaluates S(F) both ways for every F strictly inside [n] and checks both weight bounds.
inline SLemmaReport audit_S_lemma(const Family& r_family) {
    const int n = r_family.n();
    if (n % 2 != 0) throw ArgumentError("audit_S_lemma: n must be even");
    if (n > kSLemmaMaxN) throw RangeError("audit_S_lemma: limited to n <= 8");
    if (!is_avoiding(r_family, s_lemma_hypothesis()))
        throw ArgumentError("audit_S_lemma: hypothesis violated (three sets B, C, D with B < D and |B| = |C|)");
    const int m = n / 2;
    SLemmaReport report;
    report.n = n;
    report.pass = true;
    const std::uint64_t full = r_family.ground().full_bits();
    for (std::uint64_t bits = 0; bits < full; ++bits) {
        SLemmaRow row;
        row.f = SubsetMask(bits);
        row.direct = compute_S(r_family, row.f);
        row.recursive = compute_S_recursive(r_family, row.f);
        const int size = row.f.size();
        row.pass = row.direct == row.recursive;
        if (size >= m - 1) {
            row.bound_i = Rational(binomial(n, size + 1));
            row.pass = row.pass && row.direct <= *row.bound_i;
        }
        if (size <= m - 1) {
            Rational b = Rational(binomial(n, m));
            for (int i = size + 1; i <= m - 1; ++i) b += Rational(binomial(n, i), n - i + 1);
            row.bound_ii = b;
            row.pass = row.pass && row.direct <= b;
        }
        report.pass = report.pass && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// alpha(F): each chain meeting F is owned by the member whose size is closest to m + 1/3

struct AlphaRow {
    SubsetMask set;
    BigInt chains;
    bool meets_threshold = false;
};

struct AlphaReport {
    int n = 0;
    BigInt threshold;          // (m!)^2
    std::vector<AlphaRow> rows;
    std::vector<SubsetMask> exceptions;  // |F| = m-1 below threshold
    std::vector<SubsetMask> failures;    // any other member below threshold
    BigInt assigned;           // sum of |alpha(F)|
    BigInt unassigned;         // chains meeting no member, counted independently
    BigInt total;              // n!
    bool partition_ok = false;
    bool pass = false;
};

inline constexpr int kAlphaMaxN = 8;

/// 3 * |s - (m + 1/3)|. Distinct integer sizes always get distinct distances.
inline int alpha_distance(int size, int m) { return std::abs(3 * size - 3 * m - 1); }

namespace detail {

// Chains from `bottom` to `top` that avoid every set in `blocked` (all strictly
// between bottom and top), by first-hit decomposition over the blocked sets.
inline BigInt chains_avoiding(SubsetMask bottom, SubsetMask top, std::vector<SubsetMask> blocked) {
    std::sort(blocked.begin(), blocked.end(), [](SubsetMask a, SubsetMask b) { return a.size() < b.size(); });
    std::vector<BigInt> first_hit(blocked.size());
    for (std::size_t i = 0; i < blocked.size(); ++i) {
        BigInt v = factorial(blocked[i].size() - bottom.size());
        for (std::size_t j = 0; j < i; ++j)
            if (blocked[j].proper_subset_of(blocked[i])) v -= first_hit[j] * factorial(blocked[i].size() - blocked[j].size());
        first_hit[i] = v;
    }
    BigInt avoid = factorial(top.size() - bottom.size());
    for (std::size_t i = 0; i < blocked.size(); ++i) avoid -= first_hit[i] * factorial(top.size() - blocked[i].size());
    return avoid;
}

inline void require_alpha_preconditions(const Family& family) {
    const int n = family.n();
    if (n % 2 != 0) throw ArgumentError("alpha_audit: n must be even");
    if (n > kAlphaMaxN) throw RangeError("alpha_audit: limited to n <= 8");
    if (family.contains(SubsetMask(0)) || family.contains(SubsetMask(family.ground().full_bits())))
        throw ArgumentError("alpha_audit: family must not contain the empty set or [n]");
    if (!is_avoiding(family, build_named(ConfigId::kt_pair())))
        throw ArgumentError("alpha_audit: family contains a size-restricted V or Lambda");
}

} // namespace detail

/// Counts |alpha(F)| for every member by first-hit inclusion-exclusion over the
/// comparable members that outrank F, and checks them against (m!)^2.
inline AlphaReport alpha_audit(const Family& family) {
    detail::require_alpha_preconditions(family);
    const int n = family.n();
    const int m = n / 2;
    const SubsetMask empty(0), full(family.ground().full_bits());
    AlphaReport r;
    r.n = n;
    r.threshold = factorial(m) * factorial(m);
    r.total = factorial(n);
    r.assigned = 0;
    for (SubsetMask f : family.members()) {
        const int d = alpha_distance(f.size(), m);
        std::vector<SubsetMask> lower, upper;
        for (SubsetMask g : family.members()) {
            if (alpha_distance(g.size(), m) >= d) continue;
            if (g.proper_subset_of(f)) lower.push_back(g);
            else if (f.proper_subset_of(g)) upper.push_back(g);
        }
        AlphaRow row;
        row.set = f;
        row.chains = detail::chains_avoiding(empty, f, lower) * detail::chains_avoiding(f, full, upper);
        row.meets_threshold = row.chains >= r.threshold;
        if (!row.meets_threshold) (f.size() == m - 1 ? r.exceptions : r.failures).push_back(f);
        r.assigned += row.chains;
        r.rows.push_back(std::move(row));
    }
    r.unassigned = detail::chains_avoiding(empty, full, family.members());
    r.partition_ok = r.assigned + r.unassigned == r.total;
    r.pass = r.partition_ok && r.failures.empty();
    return r;
}

/// |alpha(F)| per member (family order) by walking all n! chains. For cross-checks at small n.
inline std::vector<BigInt> alpha_counts_by_enumeration(const Family& family) {
    const int n = family.n();
    if (n > 9) throw RangeError("alpha_counts_by_enumeration: limited to n <= 9");
    const int m = n / 2;
    std::vector<std::uint64_t> counts(family.size(), 0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    do {
        std::uint64_t bits = 0;
        int best = -1, best_d = 0;
        for (int i = 0; i <= n; ++i) {
            if (i > 0) bits |= std::uint64_t{1} << (perm[i - 1] - 1);
            if (auto idx = family.index_of(SubsetMask(bits))) {
                const int d = alpha_distance(i, m);
                if (best < 0 || d < best_d) {
                    best = static_cast<int>(*idx);
                    best_d = d;
                }
            }
        }
        if (best >= 0) ++counts[best];
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {counts.begin(), counts.end()};
}

} // namespace fsp
