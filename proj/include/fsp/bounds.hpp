#pragma once

// Closed-form upper bounds for size-restricted forbidden configurations, plus
// the classical unrestricted bounds they are compared against.
//
// Bounds stated with an unevaluated O(.) term are returned as their main term
// and marked main_term_only; nothing downstream may assert against them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsp/arith.hpp"
#include "fsp/error.hpp"
#include "fsp/poset.hpp"

namespace fsp {

enum class Exactness { exact, main_term_only };

inline const char* to_string(Exactness e) { return e == Exactness::exact ? "exact" : "main-term-only"; }

struct BoundResult {
    Rational value;
    Exactness exactness = Exactness::exact;
    bool in_range = true;
    std::string validity;  // stated parameter range, e.g. "n >= 13"
    std::string source;
    std::vector<std::string> notes;

    std::string validity_status() const { return in_range ? "within stated range (" + validity + ")" : "outside stated range (" + validity + ")"; }
};

/// Named integer parameters: n, m, s, t, h.
using BoundParams = std::map<std::string, int>;

namespace detail {

inline int need(const BoundParams& p, const char* key, const std::string& id) {
    auto it = p.find(key);
    if (it == p.end()) throw ArgumentError("bound " + id + " requires parameter --" + key);
    return it->second;
}

inline void need_at_least(int value, int min, const char* key, const std::string& id) {
    if (value < min) throw ArgumentError("bound " + id + ": " + key + " must be at least " + std::to_string(min) + " to evaluate");
}

inline Rational middle_binomial(int n) { return Rational(binomial(n, n / 2)); }

// 3 (ceil(log_3(m-1)) + 1) for m >= 2.
inline int diamond_factor(int m) { return 3 * (ceil_log(3, m - 1) + 1); }

} // namespace detail

/// Bound identifiers accepted by evaluate_bound.
inline const std::vector<std::string>& bound_ids() {
    static const std::vector<std::string> ids{"kt",           "fork_explicit", "fork_main",   "baton_main",     "butterfly",
                                              "j",            "diamond_restricted", "diamond_m4", "glu_diamond", "dbk_fork_main",
                                              "glu_baton_main", "dks_butterfly", "li_j"};
    return ids;
}

/// Evaluates one bound. Parameters outside a theorem's stated range still
/// evaluate, with in_range = false. Throws ArgumentError for unknown ids or
/// parameters for which the formula itself is undefined.
inline BoundResult evaluate_bound(const std::string& id, const BoundParams& params) {
    const int n = detail::need(params, "n", id);
    detail::need_at_least(n, 1, "n", id);
    if (n > kMaxBinomialN - 1) throw ArgumentError("bound " + id + ": n too large");
    BoundResult r;

    if (id == "kt") {
        detail::need_at_least(n, 2, "n", id);
        r.value = Rational(2 * binomial(n - 1, (n - 1) / 2));
        r.validity = "n >= 3";
        r.in_range = n >= 3;
        r.source = "size-restricted Katona-Tarjan bound 2*C(n-1, floor((n-1)/2))";
    } else if (id == "fork_explicit") {
        const int s = detail::need(params, "s", id);
        detail::need_at_least(s, 1, "s", id);
        r.value = detail::middle_binomial(n) + Rational(2 * (s - 1), 3) * Rational(binomial(n, n / 2 + 1)) + 1;
        r.validity = "s >= 2";
        r.in_range = s >= 2;
        r.source = "size-restricted fork, explicit form C(n,floor(n/2)) + (2/3)(s-1) C(n,floor(n/2)+1) + 1";
    } else if (id == "fork_main" || id == "dbk_fork_main") {
        const int s = detail::need(params, "s", id);
        detail::need_at_least(s, 1, "s", id);
        r.value = (1 + Rational(2 * (s - 1), n)) * detail::middle_binomial(n);
        r.exactness = Exactness::main_term_only;
        r.validity = "s >= 2, asymptotic in n";
        r.in_range = s >= 2;
        if (id == "fork_main") {
            r.source = "size-restricted fork (1 + 2(s-1)/n) C(n,floor(n/2))";
            r.notes.push_back("omitted error term O(sqrt(log n) / n^{3/2}) * C(n,floor(n/2))");
        } else {
            r.source = "De Bonis-Katona fork bound (1 + 2(s-1)/n) C(n,floor(n/2)), comparison only";
            r.notes.push_back("omitted error term O(1/n^2) * C(n,floor(n/2))");
        }
    } else if (id == "baton_main" || id == "glu_baton_main") {
        const int h = detail::need(params, "h", id);
        const int s = detail::need(params, "s", id);
        const int t = detail::need(params, "t", id);
        detail::need_at_least(h, 2, "h", id);
        detail::need_at_least(s, 1, "s", id);
        detail::need_at_least(t, 1, "t", id);
        if (h - 1 > n + 1) throw ArgumentError("bound " + id + ": h - 1 must not exceed n + 1");
        const Rational coeff = id == "baton_main" ? Rational(2 * (s + t - 2), n) : Rational(2 * h * (s + t - 2), n);
        r.value = Rational(sigma(n, h - 1)) + Rational(binomial(n, (n + h) / 2)) * coeff;
        r.exactness = Exactness::main_term_only;
        r.validity = "h >= 3, s >= 1, t >= 1, asymptotic in n";
        r.in_range = h >= 3;
        r.notes.push_back("omitted error term C(n,floor((n+h)/2)) * O(sqrt(log n) / n^{3/2})");
        r.source = id == "baton_main" ? "size-restricted baton Sigma(n,h-1) + C(n,floor((n+h)/2)) 2(s+t-2)/n"
                                      : "Griggs-Lu baton Sigma(n,h-1) + C(n,floor((n+h)/2)) 2h(s+t-2)/n, comparison only";
    } else if (id == "butterfly") {
        detail::need_at_least(n, 1, "n", id);
        r.value = Rational(sigma(n, 2));
        r.validity = "n >= 13";
        r.in_range = n >= 13;
        r.source = "size-restricted butterfly bound Sigma(n,2)";
    } else if (id == "j") {
        r.value = Rational(sigma(n, 2));
        r.validity = "n >= 1";
        r.source = "size-restricted J bound Sigma(n,2)";
    } else if (id == "dks_butterfly") {
        r.value = Rational(sigma(n, 2));
        r.validity = "n >= 1";
        r.source = "De Bonis-Katona-Swanepoel butterfly value Sigma(n,2), comparison only";
    } else if (id == "li_j") {
        r.value = Rational(sigma(n, 2));
        r.validity = "n >= 1";
        r.source = "Li J-poset bound Sigma(n,2), comparison only";
    } else if (id == "diamond_restricted") {
        const int m = detail::need(params, "m", id);
        detail::need_at_least(m, 2, "m", id);
        r.value = Rational(detail::diamond_factor(m)) * detail::middle_binomial(n);
        r.validity = "m >= 2";
        r.source = "size-restricted diamond bound 3(ceil(log_3(m-1)) + 1) C(n,floor(n/2))";
    } else if (id == "diamond_m4") {
        if (n + 1 < 4) throw ArgumentError("bound diamond_m4: Sigma(n,4) needs n >= 3");
        r.value = Rational(sigma(n, 4));
        r.validity = "n >= 3";
        r.in_range = n >= 3;
        r.source = "size-restricted diamond D_4 bound Sigma(n,4), attained by the 4 middle levels";
    } else if (id == "glu_diamond") {
        const int m = detail::need(params, "m", id);
        detail::need_at_least(m, 1, "m", id);
        const int t = ceil_log(2, static_cast<long long>(m) + 2);
        const BigInt mid_t = binomial(t, t / 2);
        const BigInt two_t = BigInt(1) << t;
        if (t > n + 1) throw ArgumentError("bound glu_diamond: t = ceil(log2(m+2)) exceeds n + 1");
        r.validity = "n >= 2, m >= 2";
        r.in_range = n >= 2 && m >= 2;
        r.notes.push_back("t = " + std::to_string(t));
        if (BigInt(m) <= two_t - mid_t - 1) {
            r.value = Rational(sigma(n, t));
            r.source = "Griggs-Li-Lu diamond value Sigma(n,t), comparison only";
        } else {
            r.value = (Rational(t + 1) - Rational(two_t - m - 1, mid_t)) * detail::middle_binomial(n);
            r.source = "Griggs-Li-Lu diamond upper bound (t + 1 - (2^t - m - 1)/C(t,floor(t/2))) C(n,floor(n/2)), comparison only";
            r.notes.push_back("lower bound Sigma(n,t) = " + to_string(Rational(sigma(n, t))));
        }
    } else {
        throw ArgumentError("unknown bound id '" + id + "'");
    }
    return r;
}

inline BoundResult evaluate_bound(const std::string& id, int n) { return evaluate_bound(id, BoundParams{{"n", n}}); }

/// Per-class constant C'(m): 3(ceil(log_3(m-1)) + 1) for m >= 2 and 2 for m = 1.
inline Rational class_constant(int m) {
    if (m < 1) throw RangeError("class sizes must be positive");
    if (m == 1) return 2;
    return detail::diamond_factor(m);
}

/// Constant of the general size-restricted theorem for color-class sizes
/// a_1..a_k: the sum of the per-class constants.
inline Rational general_constant(const std::vector<int>& class_sizes) {
    if (class_sizes.empty()) throw ArgumentError("general_constant: empty class-size list");
    Rational total = 0;
    for (int a : class_sizes) total += class_constant(a);
    return total;
}

/// True when some class has size 1, where the per-class constant 2 comes from
/// the 3-chain argument rather than the diamond theorem (which needs m >= 2).
inline bool general_constant_extrapolates(const std::vector<int>& class_sizes) {
    for (int a : class_sizes)
        if (a == 1) return true;
    return false;
}

inline Rational constant_for_colored_poset(const ColoredPoset& poset) {
    require_valid(poset);
    return general_constant(poset.class_sizes());
}

/// Largest constant over all order-preserving colorings of the poset's order (at most 8 elements).
inline Rational max_constant_over_colorings(const ColoredPoset& poset) {
    Rational best = 0;
    for_each_coloring(poset, [&](const std::vector<int>& colors) {
        std::vector<int> sizes(*std::max_element(colors.begin(), colors.end()), 0);
        for (int c : colors) ++sizes[c - 1];
        best = std::max(best, general_constant(sizes));
    });
    return best;
}

} // namespace fsp
