#pragma once

// Forbidden configurations as colored posets.
//
// A configuration is a finite strict poset together with a coloring; elements
// sharing a color must be mapped to sets of equal size. Distinct colors do not
// force distinct sizes. A ConfigSet forbids each of its members, which is how
// disjunctive size restrictions such as |A|=|B| or |C|=|D| are expressed.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fsp/error.hpp"

namespace fsp {

/// First violated invariant of a colored poset.
struct Violation {
    std::string invariant;  // "irreflexive", "acyclic", "order-preserving", "color-range", "colors-surjective"
    int a = -1;
    int b = -1;
    std::string message;
};

class ColoredPoset {
public:
    static constexpr int kMaxElements = 64;

    /// `relations` may be any generating set; the strict order is its transitive closure.
    /// Throws ArgumentError on structural problems (bad indices, color array length).
    ColoredPoset(int elements, std::vector<std::pair<int, int>> relations, std::vector<int> colors, std::string name = {})
        : p_(elements), generators_(std::move(relations)), colors_(std::move(colors)), name_(std::move(name)) {
        if (p_ < 1 || p_ > kMaxElements) throw ArgumentError("poset must have between 1 and 64 elements");
        if (static_cast<int>(colors_.size()) != p_)
            throw ArgumentError("color array has " + std::to_string(colors_.size()) + " entries, expected " + std::to_string(p_));
        std::sort(generators_.begin(), generators_.end());
        generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
        above_.assign(p_, 0);
        for (auto [a, b] : generators_) {
            if (a < 0 || a >= p_ || b < 0 || b >= p_)
                throw ArgumentError("relation (" + std::to_string(a) + "," + std::to_string(b) + ") references a missing element");
            above_[a] |= bit(b);
        }
        close();
    }

    int size() const noexcept { return p_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<int>& colors() const noexcept { return colors_; }
    int color(int a) const { return colors_[a]; }
    int color_count() const { return colors_.empty() ? 0 : *std::max_element(colors_.begin(), colors_.end()); }

    /// a <_p b in the transitively closed order.
    bool less(int a, int b) const { return (above_[a] >> b) & 1U; }
    bool comparable(int a, int b) const { return less(a, b) || less(b, a); }

    /// Bitmask of the elements strictly above / below `a`.
    std::uint64_t above(int a) const { return above_[a]; }
    std::uint64_t below(int a) const {
        std::uint64_t m = 0;
        for (int x = 0; x < p_; ++x)
            if (less(x, a)) m |= bit(x);
        return m;
    }

    /// All pairs of the closed order, sorted.
    std::vector<std::pair<int, int>> relations() const {
        std::vector<std::pair<int, int>> out;
        for (int a = 0; a < p_; ++a)
            for (int b = 0; b < p_; ++b)
                if (less(a, b)) out.emplace_back(a, b);
        return out;
    }

    const std::vector<std::pair<int, int>>& generators() const noexcept { return generators_; }

    /// Covering pairs of the closed order; falls back to the generators when cyclic.
    std::vector<std::pair<int, int>> covers() const {
        for (int a = 0; a < p_; ++a)
            if (less(a, a)) return generators_;
        std::vector<std::pair<int, int>> out;
        for (int a = 0; a < p_; ++a)
            for (int b = 0; b < p_; ++b) {
                if (!less(a, b)) continue;
                if ((above_[a] & below(b)) == 0) out.emplace_back(a, b);
            }
        return out;
    }

    /// Number of elements in each color class 1..k (index 0 is color 1).
    std::vector<int> class_sizes() const {
        std::vector<int> sizes(std::max(color_count(), 0), 0);
        for (int c : colors_)
            if (c >= 1) ++sizes[c - 1];
        return sizes;
    }

    /// Order-dual with reversed coloring, so order preservation carries over.
    ColoredPoset dual() const {
        std::vector<std::pair<int, int>> rel;
        for (auto [a, b] : generators_) rel.emplace_back(b, a);
        const int k = color_count();
        std::vector<int> cols(colors_);
        for (int& c : cols) c = k + 1 - c;
        return ColoredPoset(p_, std::move(rel), std::move(cols), name_.empty() ? std::string{} : name_ + "^dual");
    }

    ColoredPoset renamed(std::string name) const {
        ColoredPoset copy = *this;
        copy.name_ = std::move(name);
        return copy;
    }

    /// Structural equality: element count, closed order and coloring. Names are ignored.
    bool operator==(const ColoredPoset& other) const {
        return p_ == other.p_ && above_ == other.above_ && colors_ == other.colors_;
    }

private:
    static constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

    void close() {
        for (int k = 0; k < p_; ++k)
            for (int a = 0; a < p_; ++a)
                if (less(a, k)) above_[a] |= above_[k];
    }

    int p_;
    std::vector<std::pair<int, int>> generators_;
    std::vector<int> colors_;
    std::vector<std::uint64_t> above_;
    std::string name_;
};

/// Checks strictness of the order, order preservation of the coloring and that
/// colors 1..k are all used. Returns the first violation found, or nullopt.
inline std::optional<Violation> validate(const ColoredPoset& poset) {
    for (auto [a, b] : poset.generators())
        if (a == b) return Violation{"irreflexive", a, b, "element " + std::to_string(a) + " is related to itself"};
    for (int a = 0; a < poset.size(); ++a)
        if (poset.less(a, a)) return Violation{"acyclic", a, a, "relations contain a cycle through element " + std::to_string(a)};
    for (int a = 0; a < poset.size(); ++a)
        if (poset.color(a) < 1)
            return Violation{"color-range", a, -1, "element " + std::to_string(a) + " has color " + std::to_string(poset.color(a)) + " (colors start at 1)"};
    for (auto [a, b] : poset.relations())
        if (poset.color(a) >= poset.color(b))
            return Violation{"order-preserving", a, b,
                             "coloring is not order-preserving: " + std::to_string(a) + " < " + std::to_string(b) + " but colors are " +
                                 std::to_string(poset.color(a)) + " and " + std::to_string(poset.color(b))};
    const auto sizes = poset.class_sizes();
    for (std::size_t c = 0; c < sizes.size(); ++c)
        if (sizes[c] == 0) return Violation{"colors-surjective", -1, -1, "color " + std::to_string(c + 1) + " is unused"};
    return std::nullopt;
}

inline void require_valid(const ColoredPoset& poset) {
    if (auto v = validate(poset)) {
        const std::string who = poset.name().empty() ? "poset" : poset.name();
        throw ValidationError(who + ": " + v->invariant + ": " + v->message);
    }
}

/// A nonempty list of configurations, every one of which is forbidden.
class ConfigSet {
public:
    explicit ConfigSet(std::vector<ColoredPoset> configs, std::string name = {}) : configs_(std::move(configs)), name_(std::move(name)) {
        if (configs_.empty()) throw ArgumentError("a config set needs at least one poset");
        for (const auto& c : configs_) require_valid(c);
    }

    const std::vector<ColoredPoset>& configs() const noexcept { return configs_; }
    std::size_t size() const noexcept { return configs_.size(); }
    const ColoredPoset& operator[](std::size_t i) const { return configs_[i]; }
    const std::string& name() const noexcept { return name_; }
    auto begin() const { return configs_.begin(); }
    auto end() const { return configs_.end(); }

    int max_elements() const {
        int m = 0;
        for (const auto& c : configs_) m = std::max(m, c.size());
        return m;
    }

    ConfigSet dual() const {
        std::vector<ColoredPoset> d;
        for (const auto& c : configs_) d.push_back(c.dual());
        return ConfigSet(std::move(d), name_.empty() ? std::string{} : name_ + "^dual");
    }

    /// This set with one more forbidden poset appended.
    ConfigSet plus(const ColoredPoset& extra) const {
        auto c = configs_;
        c.push_back(extra);
        return ConfigSet(std::move(c), name_);
    }

    bool operator==(const ConfigSet& other) const { return configs_ == other.configs_; }

private:
    std::vector<ColoredPoset> configs_;
    std::string name_;
};

enum class ConfigKind { kt_pair, fork, baton, butterfly_pair, j_config, diamond, chain };

/// A named configuration with its integer parameters, e.g. fork(3) or baton(4,2,1).
struct ConfigId {
    ConfigKind kind;
    std::vector<int> params;

    static ConfigId kt_pair() { return {ConfigKind::kt_pair, {}}; }
    static ConfigId fork(int s) { return {ConfigKind::fork, {s}}; }
    static ConfigId baton(int h, int s, int t) { return {ConfigKind::baton, {h, s, t}}; }
    static ConfigId butterfly_pair() { return {ConfigKind::butterfly_pair, {}}; }
    static ConfigId j_config() { return {ConfigKind::j_config, {}}; }
    static ConfigId diamond(int m) { return {ConfigKind::diamond, {m}}; }
    static ConfigId chain(int r) { return {ConfigKind::chain, {r}}; }

    std::string str() const {
        static const char* names[] = {"kt_pair", "fork", "baton", "butterfly_pair", "j_config", "diamond", "chain"};
        std::string out = names[static_cast<int>(kind)];
        if (!params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < params.size(); ++i) out += (i ? "," : "") + std::to_string(params[i]);
            out += ')';
        }
        return out;
    }

    /// Parses "kt_pair", "fork(3)", "baton(4,2,1)"; "fork:3" is accepted too.
    static std::optional<ConfigId> parse(const std::string& text) {
        std::string name = text;
        std::string args;
        if (auto open = text.find_first_of("(:"); open != std::string::npos) {
            name = text.substr(0, open);
            args = text.substr(open + 1);
            if (text[open] == '(') {
                if (args.empty() || args.back() != ')') return std::nullopt;
                args.pop_back();
            }
        }
        static const std::pair<const char*, std::pair<ConfigKind, std::size_t>> table[] = {
            {"kt_pair", {ConfigKind::kt_pair, 0}},         {"fork", {ConfigKind::fork, 1}},
            {"baton", {ConfigKind::baton, 3}},             {"butterfly_pair", {ConfigKind::butterfly_pair, 0}},
            {"j_config", {ConfigKind::j_config, 0}},       {"diamond", {ConfigKind::diamond, 1}},
            {"chain", {ConfigKind::chain, 1}},
        };
        for (const auto& [key, spec] : table) {
            if (name != key) continue;
            ConfigId id{spec.first, {}};
            if (!args.empty()) {
                std::stringstream ss(args);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 6) return std::nullopt;
                    id.params.push_back(std::stoi(tok));
                }
            }
            if (id.params.size() != spec.second) return std::nullopt;
            return id;
        }
        return std::nullopt;
    }
};

namespace detail {

inline ColoredPoset chain_poset(int r, std::string name) {
    std::vector<std::pair<int, int>> rel;
    std::vector<int> colors(r);
    for (int i = 0; i < r; ++i) {
        colors[i] = i + 1;
        if (i + 1 < r) rel.emplace_back(i, i + 1);
    }
    return ColoredPoset(r, std::move(rel), std::move(colors), std::move(name));
}

} // namespace detail

/// The named configurations. Incomparable groups with a size restriction share
/// one color; every other element gets its own color, ascending along the order.
inline ConfigSet build_named(const ConfigId& id) {
    const auto& p = id.params;
    const std::string name = id.str();
    switch (id.kind) {
    case ConfigKind::kt_pair: {
        // (a) A below B, C with |B| = |C|; (b) B, C below A with |B| = |C|.
        ColoredPoset up(3, {{0, 1}, {0, 2}}, {1, 2, 2}, "kt_pair(a)");
        ColoredPoset down(3, {{0, 2}, {1, 2}}, {1, 1, 2}, "kt_pair(b)");
        return ConfigSet({up, down}, name);
    }
    case ConfigKind::fork: {
        const int s = p.at(0);
        if (s < 2) throw RangeError("fork(s) needs s >= 2");
        std::vector<std::pair<int, int>> rel;
        std::vector<int> colors{1};
        for (int i = 1; i <= s; ++i) {
            rel.emplace_back(0, i);
            colors.push_back(2);
        }
        return ConfigSet({ColoredPoset(s + 1, rel, colors, name)}, name);
    }
    case ConfigKind::baton: {
        const int h = p.at(0), s = p.at(1), t = p.at(2);
        if (h < 3 || s < 1 || t < 1) throw RangeError("baton(h,s,t) needs h >= 3 and s, t >= 1");
        if (h + s + t - 2 > ColoredPoset::kMaxElements) throw RangeError("baton(h,s,t) has too many elements");
        // A_1..A_s, then B_1..B_{h-2}, then C_1..C_t.
        const int first_b = s, first_c = s + h - 2, total = h + s + t - 2;
        std::vector<std::pair<int, int>> rel;
        std::vector<int> colors(total);
        for (int a = 0; a < s; ++a) {
            colors[a] = 1;
            rel.emplace_back(a, first_b);
        }
        for (int j = 0; j < h - 2; ++j) {
            colors[first_b + j] = 2 + j;
            if (j + 1 < h - 2) rel.emplace_back(first_b + j, first_b + j + 1);
        }
        for (int c = 0; c < t; ++c) {
            colors[first_c + c] = h;
            rel.emplace_back(first_c - 1, first_c + c);
        }
        return ConfigSet({ColoredPoset(total, rel, colors, name)}, name);
    }
    case ConfigKind::butterfly_pair: {
        // A, B below C, D; either |A| = |B| or |C| = |D|.
        const std::vector<std::pair<int, int>> rel{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
        ColoredPoset bottom(4, rel, {1, 1, 2, 3}, "butterfly_pair(AB)");
        ColoredPoset top(4, rel, {1, 2, 3, 3}, "butterfly_pair(CD)");
        return ConfigSet({bottom, top}, name);
    }
    case ConfigKind::j_config: {
        // A < B < D, A < C, |B| = |C|.
        return ConfigSet({ColoredPoset(4, {{0, 1}, {1, 3}, {0, 2}}, {1, 2, 2, 3}, name)}, name);
    }
    case ConfigKind::diamond: {
        const int m = p.at(0);
        if (m < 2) throw RangeError("diamond(m) needs m >= 2");
        if (m + 2 > ColoredPoset::kMaxElements) throw RangeError("diamond(m) has too many elements");
        std::vector<std::pair<int, int>> rel;
        std::vector<int> colors{1};
        for (int i = 1; i <= m; ++i) {
            rel.emplace_back(0, i);
            rel.emplace_back(i, m + 1);
            colors.push_back(2);
        }
        colors.push_back(3);
        return ConfigSet({ColoredPoset(m + 2, rel, colors, name)}, name);
    }
    case ConfigKind::chain: {
        const int r = p.at(0);
        if (r < 1) throw RangeError("chain(r) needs r >= 1");
        if (r > ColoredPoset::kMaxElements) throw RangeError("chain(r) has too many elements");
        return ConfigSet({detail::chain_poset(r, name)}, name);
    }
    }
    throw ArgumentError("unknown configuration kind");
}

inline nlohmann::json poset_to_json(const ColoredPoset& poset) {
    nlohmann::json rel = nlohmann::json::array();
    for (auto [a, b] : poset.covers()) rel.push_back({a, b});
    nlohmann::json j{{"elements", poset.size()}, {"relations", rel}, {"colors", poset.colors()}};
    if (!poset.name().empty()) j["name"] = poset.name();
    return j;
}

inline nlohmann::json config_set_to_json(const ConfigSet& set) {
    nlohmann::json configs = nlohmann::json::array();
    for (const auto& c : set) configs.push_back(poset_to_json(c));
    nlohmann::json j{{"configs", configs}};
    if (!set.name().empty()) j["name"] = set.name();
    return j;
}

inline std::string serialize(const ConfigSet& set) { return config_set_to_json(set).dump(); }

namespace detail {

inline ColoredPoset poset_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    if (!j.contains("elements")) throw ParseError(where + ": elements required");
    if (!j["elements"].is_number_integer()) throw ParseError(where + ": elements must be an integer");
    const auto p = j["elements"].get<long long>();
    if (p < 1 || p > ColoredPoset::kMaxElements) throw ParseError(where + ": elements must lie in [1, 64]");
    if (!j.contains("colors")) throw ParseError(where + ": colors required");
    if (!j["colors"].is_array()) throw ParseError(where + ": colors must be an array");
    std::vector<int> colors;
    for (const auto& c : j["colors"]) {
        if (!c.is_number_integer()) throw ParseError(where + ": colors must be integers");
        colors.push_back(static_cast<int>(c.get<long long>()));
    }
    if (static_cast<long long>(colors.size()) != p)
        throw ParseError(where + ": colors has " + std::to_string(colors.size()) + " entries, expected " + std::to_string(p));
    std::vector<std::pair<int, int>> rel;
    if (j.contains("relations")) {
        if (!j["relations"].is_array()) throw ParseError(where + ": relations must be an array");
        int idx = 0;
        for (const auto& r : j["relations"]) {
            const std::string at = where + ": relations[" + std::to_string(idx++) + "]";
            if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
                throw ParseError(at + " must be a pair of integers");
            const auto a = r[0].get<long long>(), b = r[1].get<long long>();
            if (a < 0 || a >= p || b < 0 || b >= p) throw ParseError(at + " references a missing element");
            rel.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    std::string name;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ParseError(where + ": name must be a string");
        name = j["name"].get<std::string>();
    }
    return ColoredPoset(static_cast<int>(p), std::move(rel), std::move(colors), std::move(name));
}

} // namespace detail

/// Parses a single config object or {"configs": [...]}; validates every member.
inline ConfigSet parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    std::vector<ColoredPoset> posets;
    std::string name;
    if (j.is_object() && j.contains("configs")) {
        if (!j["configs"].is_array() || j["configs"].empty()) throw ParseError("config: configs must be a nonempty array");
        int idx = 0;
        for (const auto& c : j["configs"]) posets.push_back(detail::poset_from_json(c, "configs[" + std::to_string(idx++) + "]"));
        if (j.contains("name") && j["name"].is_string()) name = j["name"].get<std::string>();
    } else {
        posets.push_back(detail::poset_from_json(j, "config"));
        name = posets.back().name();
    }
    return ConfigSet(std::move(posets), std::move(name));
}

/// Calls `visit` with every order-preserving surjective coloring of `poset`'s
/// order (its own coloring is ignored). Limited to 8 elements.
inline void for_each_coloring(const ColoredPoset& poset, const std::function<void(const std::vector<int>&)>& visit) {
    const int p = poset.size();
    if (p > 8) throw RangeError("coloring enumeration is limited to posets with at most 8 elements");
    std::vector<int> colors(p, 0);
    std::vector<int> used(p + 2, 0);
    std::function<void(int, int)> rec = [&](int idx, int max_color) {
        if (idx == p) {
            for (int c = 1; c <= max_color; ++c)
                if (used[c] == 0) return;
            visit(colors);
            return;
        }
        int missing = 0;
        for (int c = 1; c <= max_color; ++c) missing += used[c] == 0;
        for (int c = 1; c <= p; ++c) {
            const int new_max = std::max(max_color, c);
            const int new_missing = missing + (c > max_color ? c - max_color - 1 : 0) - (c <= max_color && used[c] == 0 ? 1 : 0);
            if (new_missing > p - idx - 1) continue;
            bool ok = true;
            for (int q = 0; q < idx && ok; ++q) {
                if (poset.less(q, idx) && !(colors[q] < c)) ok = false;
                if (poset.less(idx, q) && !(c < colors[q])) ok = false;
            }
            if (!ok) continue;
            colors[idx] = c;
            ++used[c];
            rec(idx + 1, new_max);
            --used[c];
        }
    };
    rec(0, 0);
}

} // namespace fsp
