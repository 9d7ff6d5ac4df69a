#pragma once

// Exact integer and rational arithmetic used by every bound and audit.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "fsp/error.hpp"

namespace fsp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxBinomialN = 10000;

namespace detail {

// floor(a / b) and ceil(a / b) for b > 0 and any sign of a.
constexpr long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

constexpr long long ceil_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && (a > 0)) ++q;
    return q;
}

struct BinomialTable {
    static constexpr int kRows = 65;
    std::array<std::array<std::uint64_t, kRows>, kRows> c{};

    BinomialTable() {
        for (int n = 0; n < kRows; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
        }
    }
};

inline const BinomialTable& binomial_table() {
    static const BinomialTable table;
    return table;
}

} // namespace detail

/// C(n, k) as a machine word; n must be at most 64 (the ground-set cap).
inline std::uint64_t binomial_u64(int n, int k) {
    if (n < 0 || n > 64) throw RangeError("binomial_u64: n must lie in [0, 64]");
    if (k < 0 || k > n) return 0;
    return detail::binomial_table().c[n][k];
}

/// C(n, k); zero outside 0 <= k <= n.
inline BigInt binomial(int n, int k) {
    if (n < 0 || n > kMaxBinomialN) throw RangeError("binomial: n must lie in [0, 10000]");
    if (k < 0 || k > n) return 0;
    if (n <= 64) return BigInt(detail::binomial_table().c[n][k]);
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (int i = 0; i < k; ++i) {
        c *= (n - i);
        c /= (i + 1);
    }
    return c;
}

inline BigInt factorial(int n) {
    if (n < 0) throw RangeError("factorial: negative argument");
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Sum of the k largest binomial coefficients of n, taken over
/// ceil((n-k)/2) <= i <= ceil((n+k)/2) - 1.
inline BigInt sigma(int n, int k) {
    if (n < 0) throw RangeError("sigma: n must be non-negative");
    if (k < 1 || k > n + 1) throw RangeError("sigma: k must lie in [1, n+1]");
    const long long lo = detail::ceil_div(n - k, 2);
    const long long hi = detail::ceil_div(n + k, 2) - 1;
    BigInt total = 0;
    for (long long i = lo; i <= hi; ++i) total += binomial(n, static_cast<int>(i));
    return total;
}

/// Incremental exact evaluation of q(k) = sum_{i=1}^{k-1} 1/C(k,i) for k = 2, 3, ...
///
/// Tracks s(k) = sum_{i=0}^{k} 1/C(k,i) as an unreduced fraction through
/// s(k) = (k+1)/(2k) * s(k-1) + 1, so q(k) = s(k) - 2 = (num - 2 den) / den.
/// Each step costs a few big-by-small multiplications, which keeps long sweeps
/// cheap. Comparisons are exact integer comparisons.
class QSequence {
public:
    QSequence() : k_(1), num_(2), den_(1) { advance(); }

    int k() const noexcept { return k_; }

    void advance() {
        ++k_;
        const long long twice_k = 2LL * k_;
        num_ = num_ * (k_ + 1) + den_ * twice_k;
        den_ *= twice_k;
    }

    /// Numerator and denominator of q(k); not reduced.
    BigInt q_numerator() const { return num_ - 2 * den_; }
    const BigInt& q_denominator() const noexcept { return den_; }

    /// Sign of q(k) - p/r for r > 0.
    int compare(const BigInt& p, const BigInt& r) const {
        const BigInt lhs = q_numerator() * r;
        const BigInt rhs = p * den_;
        return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    }

    Rational value() const { return Rational(q_numerator(), den_); }

private:
    int k_;
    BigInt num_;
    BigInt den_;
};

/// Exact q(k) = sum_{i=1}^{k-1} C(k,i)^{-1}, reduced.
inline Rational q_value(int k) {
    if (k < 2) throw RangeError("q_value: k must be at least 2");
    QSequence seq;
    while (seq.k() < k) seq.advance();
    return seq.value();
}

/// Smallest e >= 0 with base^e >= x, for x >= 1.
inline int ceil_log(long long base, long long x) {
    if (x < 1 || base < 2) throw RangeError("ceil_log: need x >= 1 and base >= 2");
    int e = 0;
    long long p = 1;
    while (p < x) {
        p *= base;
        ++e;
    }
    return e;
}

/// "p" for integers, "p/q" otherwise; always reduced with q > 0.
inline std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
        if (s.empty()) throw ParseError("empty integer in rational '" + std::string(text) + "'");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw ParseError("malformed rational '" + std::string(text) + "'");
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9') throw ParseError("malformed rational '" + std::string(text) + "'");
        return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

/// Largest integer not exceeding r.
inline BigInt floor(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace fsp
