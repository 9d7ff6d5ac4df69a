#pragma once

// Family serialization.
//
// Text form:   first line "n=<int>", then one subset per line as ascending
//              comma-separated elements ("1,3,4"); the empty set is "-".
// Structured:  {"n": <int>, "sets": [[1,3,4], [], ...]}

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fsp/error.hpp"
#include "fsp/lattice.hpp"

namespace fsp {

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline int parse_small_int(std::string_view token, int line, const char* what) {
    if (token.empty()) throw ParseError(std::string("empty ") + what, line);
    int value = 0;
    for (char c : token) {
        if (c < '0' || c > '9') throw ParseError(std::string("malformed ") + what + " '" + std::string(token) + "'", line);
        value = value * 10 + (c - '0');
        if (value > 1000000) throw ParseError(std::string(what) + " out of range", line);
    }
    return value;
}

} // namespace detail

inline std::string format_subset(SubsetMask s) {
    if (s.bits == 0) return "-";
    std::string out;
    for (int e : s.elements()) {
        if (!out.empty()) out += ',';
        out += std::to_string(e);
    }
    return out;
}

/// Writes the text form line by line, members in family order.
inline void write_family_text(std::ostream& os, const Family& family) {
    os << "n=" << family.n() << '\n';
    for (SubsetMask s : family.members()) os << format_subset(s) << '\n';
}

inline std::string family_to_text(const Family& family) {
    std::ostringstream os;
    write_family_text(os, family);
    return os.str();
}

inline Family read_family_text(std::istream& is) {
    std::string raw;
    int line = 0;
    std::optional<GroundSet> ground;
    std::vector<SubsetMask> sets;
    while (std::getline(is, raw)) {
        ++line;
        const std::string text = detail::trim(raw);
        if (text.empty()) continue;
        if (!ground) {
            if (text.rfind("n=", 0) != 0) throw ParseError("expected header 'n=<int>'", line);
            const int n = detail::parse_small_int(detail::trim(std::string_view(text).substr(2)), line, "ground size");
            if (n < 1 || n > kMaxGround) throw ParseError("ground size must lie in [1, 64]", line);
            ground.emplace(n);
            continue;
        }
        if (text == "-") {
            sets.emplace_back(0);
            continue;
        }
        SubsetMask s;
        int prev = 0;
        std::string_view rest(text);
        while (true) {
            const auto comma = rest.find(',');
            const std::string token = detail::trim(rest.substr(0, comma));
            const int e = detail::parse_small_int(token, line, "element");
            if (e < 1 || e > ground->n()) throw ParseError("element " + token + " outside [1, " + std::to_string(ground->n()) + "]", line);
            if (e <= prev) throw ParseError("elements must be strictly ascending", line);
            s.bits |= std::uint64_t{1} << (e - 1);
            prev = e;
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        sets.push_back(s);
    }
    if (!ground) throw ParseError("missing header 'n=<int>'", line == 0 ? 1 : line);
    return Family(*ground, sets);
}

inline Family family_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_family_text(is);
}

inline nlohmann::json family_to_json(const Family& family) {
    nlohmann::json sets = nlohmann::json::array();
    for (SubsetMask s : family.members()) sets.push_back(s.elements());
    return {{"n", family.n()}, {"sets", std::move(sets)}};
}

inline Family family_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("family: expected a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer()) throw ParseError("family: integer field 'n' required");
    const auto n = j["n"].get<long long>();
    if (n < 1 || n > kMaxGround) throw ParseError("family: 'n' must lie in [1, 64]");
    GroundSet ground(static_cast<int>(n));
    if (!j.contains("sets") || !j["sets"].is_array()) throw ParseError("family: array field 'sets' required");
    std::vector<SubsetMask> sets;
    int idx = 0;
    for (const auto& entry : j["sets"]) {
        const std::string where = "family: sets[" + std::to_string(idx++) + "]";
        if (!entry.is_array()) throw ParseError(where + " must be an array");
        SubsetMask s;
        long long prev = 0;
        for (const auto& e : entry) {
            if (!e.is_number_integer()) throw ParseError(where + " must contain integers");
            const auto v = e.get<long long>();
            if (v < 1 || v > n) throw ParseError(where + ": element " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]");
            if (v <= prev) throw ParseError(where + ": elements must be strictly ascending");
            s.bits |= std::uint64_t{1} << (v - 1);
            prev = v;
        }
        sets.push_back(s);
    }
    return Family(ground, sets);
}

/// Accepts either form; a leading '{' selects the structured one.
inline Family parse_family(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("family: ") + e.what());
        }
        return family_from_json(j);
    }
    return family_from_text(text);
}

} // namespace fsp
