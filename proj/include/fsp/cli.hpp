#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fsp/bounds.hpp"
#include "fsp/chainlab.hpp"
#include "fsp/constructions.hpp"
#include "fsp/detector.hpp"
#include "fsp/family_io.hpp"
#include "fsp/search.hpp"

namespace fsp::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

inline std::string fnv1a_digest(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline int default_workers() {
    if (const char* env = std::getenv("FSP_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Json optional_rational_json(const std::optional<Rational>& r) { return r ? Json(to_string(*r)) : Json(nullptr); }

inline Json subsets_json(const std::vector<SubsetMask>& sets) {
    Json out = Json::array();
    for (SubsetMask s : sets) out.push_back(format_subset(s));
    return out;
}

/// Loaded input file plus its record entry.
struct LoadedFamily {
    Family family;
    Json record;
};

inline LoadedFamily load_family(const std::string& path) {
    const std::string text = read_file(path);
    return {parse_family(text), Json{{"path", path}, {"digest", fnv1a_digest(text)}}};
}

struct LoadedConfig {
    ConfigSet configs;
    Json record;
};

inline LoadedConfig load_config(const std::string& arg) {
    if (auto id = ConfigId::parse(arg)) return {build_named(*id), Json{{"named", id->str()}}};
    if (!std::filesystem::exists(arg)) throw ArgumentError("'" + arg + "' is neither a named config nor a readable file");
    const std::string text = read_file(arg);
    return {parse_config(text), Json{{"path", arg}, {"digest", fnv1a_digest(text)}}};
}

/// Shared state for one invocation.
struct Context {
    std::string command;
    std::string format = "structured";
    Json seed = nullptr;
    Json inputs = Json::object();
    Json outputs = Json::object();
    std::optional<Family> text_family;  // construct in text mode prints the family itself
};

inline void render_text(std::ostream& out, const Json& value, const std::string& prefix) {
    for (auto it = value.begin(); it != value.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            render_text(out, *it, key);
        } else if (it->is_string()) {
            out << key << ": " << it->get<std::string>() << '\n';
        } else {
            out << key << ": " << it->dump() << '\n';
        }
    }
}

inline void emit(std::ostream& out, const Context& ctx, double wall_time) {
    if (ctx.format == "text") {
        if (ctx.text_family) {
            write_family_text(out, *ctx.text_family);
            return;
        }
        render_text(out, ctx.outputs, "");
        return;
    }
    const Json record{{"command", ctx.command}, {"version", kVersion},     {"seed", ctx.seed},
                      {"inputs", ctx.inputs},   {"outputs", ctx.outputs}, {"wall_time", wall_time}};
    out << record.dump() << '\n';
}

// ---------------------------------------------------------------- subcommands

struct BoundArgs {
    std::string id;
    int n = 0;
    std::optional<int> m, s, t, h;
};

inline BoundParams bound_params(int n, const std::optional<int>& m, const std::optional<int>& s, const std::optional<int>& t,
                                const std::optional<int>& h) {
    BoundParams p{{"n", n}};
    if (m) p["m"] = *m;
    if (s) p["s"] = *s;
    if (t) p["t"] = *t;
    if (h) p["h"] = *h;
    return p;
}

inline Json bound_json(const BoundResult& r) {
    return Json{{"value", rational_json(r.value)},
                {"exactness", to_string(r.exactness)},
                {"validity", r.validity},
                {"in_range", r.in_range},
                {"validity_status", r.validity_status()},
                {"source", r.source},
                {"notes", r.notes}};
}

inline void run_bound(Context& ctx, const BoundArgs& a) {
    const BoundParams params = bound_params(a.n, a.m, a.s, a.t, a.h);
    ctx.inputs = Json{{"id", a.id}, {"params", params}};
    ctx.outputs = bound_json(evaluate_bound(a.id, params));
}

struct ConstructArgs {
    std::string kind;
    std::optional<int> n, r, m;
    std::string family;
};

inline void run_construct(Context& ctx, const ConstructArgs& a) {
    auto need_n = [&]() {
        if (!a.n) throw UsageError("construct " + a.kind + " requires --n");
        return *a.n;
    };
    Family result{GroundSet(1)};
    ctx.inputs = Json{{"kind", a.kind}};
    if (a.kind == "kt") {
        result = kt_construction(need_n());
        ctx.inputs["n"] = *a.n;
    } else if (a.kind == "middle") {
        if (!a.r) throw UsageError("construct middle requires --r");
        result = middle_levels(need_n(), *a.r);
        ctx.inputs["n"] = *a.n;
        ctx.inputs["r"] = *a.r;
    } else if (a.kind == "diamond") {
        if (!a.m) throw UsageError("construct diamond requires --m");
        result = diamond_levels(need_n(), *a.m);
        ctx.inputs["n"] = *a.n;
        ctx.inputs["m"] = *a.m;
        ctx.outputs["levels"] = diamond_level_count(*a.m);
    } else {
        if (a.family.empty()) throw UsageError("construct complement requires --family");
        auto loaded = load_family(a.family);
        ctx.inputs["family"] = loaded.record;
        result = complement_family(loaded.family);
    }
    ctx.outputs["size"] = result.size();
    ctx.outputs["family"] = family_to_json(result);
    ctx.text_family = std::move(result);
}

struct CheckArgs {
    std::string family;
    std::string config;
    bool induced = false;
};

inline void run_check(Context& ctx, const CheckArgs& a) {
    const auto fam = load_family(a.family);
    const auto cfg = load_config(a.config);
    const EmbedMode mode = a.induced ? EmbedMode::induced : EmbedMode::standard;
    ctx.inputs = Json{{"family", fam.record}, {"config", cfg.record}, {"mode", to_string(mode)}};
    Json violation = nullptr;
    for (const auto& poset : cfg.configs) {
        if (auto emb = find_embedding(fam.family, poset, mode)) {
            Json images = Json::array();
            for (std::size_t e = 0; e < emb->size(); ++e) images.push_back(format_subset(fam.family[(*emb)[e]]));
            violation = Json{{"poset", poset.name()}, {"images", images}};
            break;
        }
    }
    ctx.outputs = Json{{"avoiding", violation.is_null()}, {"family_size", fam.family.size()}, {"violation", violation}};
}

struct SearchArgs {
    int n = 0;
    std::string config;
    bool induced = false;
    double time_limit = 600.0;
    std::string symmetry = "on";
    std::string theorem_bound;
    std::optional<int> m, s, t, h;
    bool allow_slow = false;
    bool exclude_empty_full = false;
    int workers = 1;
};

inline void run_search(Context& ctx, const SearchArgs& a) {
    if (a.n > kProvenOptimalMaxN && !a.allow_slow)
        throw UsageError("search beyond n = " + std::to_string(kProvenOptimalMaxN) + " requires --allow-slow");
    const auto cfg = load_config(a.config);
    SearchProblem problem{GroundSet(a.n), cfg.configs, a.induced ? EmbedMode::induced : EmbedMode::standard, {}};
    problem.options.symmetry = a.symmetry == "on";
    problem.options.time_limit_seconds = a.time_limit;
    problem.options.include_empty_and_full = !a.exclude_empty_full;
    problem.options.workers = a.workers;
    ctx.inputs = Json{{"n", a.n},
                      {"config", cfg.record},
                      {"mode", to_string(problem.mode)},
                      {"symmetry", a.symmetry},
                      {"time_limit", a.time_limit},
                      {"include_empty_and_full", problem.options.include_empty_and_full},
                      {"workers", a.workers}};
    if (!a.theorem_bound.empty()) {
        const auto bound = evaluate_bound(a.theorem_bound, bound_params(a.n, a.m, a.s, a.t, a.h));
        if (bound.exactness != Exactness::exact) throw ArgumentError("theorem bound '" + a.theorem_bound + "' is not exact");
        if (!bound.in_range) throw ArgumentError("theorem bound '" + a.theorem_bound + "' is outside its stated range at n = " + std::to_string(a.n));
        problem.options.theorem_bound = bound.value;
        problem.options.theorem_bound_source = bound.source;
        ctx.inputs["theorem_bound"] = Json{{"id", a.theorem_bound}, {"value", rational_json(bound.value)}, {"source", bound.source}};
    }
    const SearchResult r = exact_max_family(problem);
    ctx.outputs = Json{{"best_size", r.best_size},
                       {"status", to_string(r.status)},
                       {"witness", family_to_json(r.witness)},
                       {"nodes", r.nodes},
                       {"prunes", r.prunes},
                       {"exhausted", r.exhausted}};
}

struct AuditArgs {
    std::string kind;
    std::string family;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::optional<int> s;
    int workers = 1;
};

inline void run_audit(Context& ctx, const AuditArgs& a) {
    const auto fam = load_family(a.family);
    const Family& f = fam.family;
    ctx.inputs = Json{{"kind", a.kind}, {"family", fam.record}};
    if (a.kind == "lubell") {
        ctx.seed = a.seed;
        ctx.inputs["trials"] = a.trials;
        ctx.inputs["workers"] = a.workers;
        const auto r = estimate_lubell(f, a.trials, a.seed, a.workers);
        ctx.outputs = Json{{"trials", r.trials}, {"mean", r.mean}, {"std_error", r.std_error}, {"exact_target", rational_json(r.exact_target)}};
    } else if (a.kind == "weighted") {
        const Rational v = weighted_chain_average(f);
        ctx.outputs = Json{{"value", rational_json(v)}, {"family_size", f.size()}, {"pass", v == Rational(BigInt(f.size()))}};
    } else if (a.kind == "fork") {
        if (!a.s) throw UsageError("audit fork requires --s");
        ctx.inputs["s"] = *a.s;
        const auto r = audit_fork_lambda(f, *a.s);
        ctx.outputs = Json{{"n", r.n},
                           {"s", r.s},
                           {"window", r.window},
                           {"windowed_size", r.windowed_size},
                           {"lambda_window", rational_json(r.lambda_window)},
                           {"main_term", rational_json(r.main_term)},
                           {"smallest_c", optional_rational_json(r.smallest_c)},
                           {"hard_bound", rational_json(r.hard_bound)},
                           {"pass", r.pass}};
    } else if (a.kind == "slemma") {
        const auto r = audit_S_lemma(f);
        Json rows = Json::array();
        for (const auto& row : r.rows)
            rows.push_back(Json{{"set", format_subset(row.f)},
                                {"direct", rational_json(row.direct)},
                                {"recursive", rational_json(row.recursive)},
                                {"bound_i", optional_rational_json(row.bound_i)},
                                {"bound_ii", optional_rational_json(row.bound_ii)},
                                {"pass", row.pass}});
        ctx.outputs = Json{{"n", r.n}, {"rows", rows}, {"pass", r.pass}};
    } else {
        const auto r = alpha_audit(f);
        Json rows = Json::array();
        for (const auto& row : r.rows)
            rows.push_back(Json{{"set", format_subset(row.set)}, {"chains", to_string(row.chains)}, {"meets_threshold", row.meets_threshold}});
        ctx.outputs = Json{{"n", r.n},
                           {"threshold", to_string(r.threshold)},
                           {"rows", rows},
                           {"exceptions", subsets_json(r.exceptions)},
                           {"failures", subsets_json(r.failures)},
                           {"assigned", to_string(r.assigned)},
                           {"unassigned", to_string(r.unassigned)},
                           {"total", to_string(r.total)},
                           {"partition_ok", r.partition_ok},
                           {"pass", r.pass}};
    }
}

struct LubellArgs {
    std::string family;
    std::optional<int> n, x;
    std::string y;
};

inline void run_lubell(Context& ctx, const LubellArgs& a) {
    if (!a.family.empty()) {
        const auto fam = load_family(a.family);
        const Family& f = fam.family;
        ctx.inputs = Json{{"family", fam.record}};
        const Rational lam = lubell(f);
        const BigInt whole = floor(lam);
        const int x = static_cast<int>(std::min<BigInt>(whole, BigInt(f.n() + 1)));
        const Rational y = lam - Rational(BigInt(x));
        const Rational cap = lub_bound(f.n(), x, y);
        ctx.outputs = Json{{"n", f.n()},
                           {"size", f.size()},
                           {"lubell", rational_json(lam)},
                           {"x", x},
                           {"y", rational_json(y)},
                           {"lub_bound", rational_json(cap)},
                           {"size_within_bound", Rational(BigInt(f.size())) <= cap}};
        return;
    }
    if (!a.n || !a.x || a.y.empty()) throw UsageError("lubell needs --family, or all of --n, --x and --y");
    const Rational y = parse_rational(a.y);
    ctx.inputs = Json{{"n", *a.n}, {"x", *a.x}, {"y", rational_json(y)}};
    ctx.outputs = Json{{"lub_bound", rational_json(lub_bound(*a.n, *a.x, y))}};
}

// ---------------------------------------------------------------- dispatch

inline std::string join_args(const std::vector<std::string>& args) {
    std::string out;
    for (const auto& a : args) {
        if (!out.empty()) out += ' ';
        out += a;
    }
    return out;
}

/// Parses `args` (without the program name), runs one subcommand, and returns the exit code.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Size-restricted forbidden subposet toolkit", "fsp"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help");
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    Context ctx;
    ctx.command = join_args(args);
    app.add_option("--format", ctx.format, "Output format")->check(CLI::IsMember({"text", "structured"}));

    const int workers = default_workers();

    BoundArgs bound;
    auto* bound_cmd = app.add_subcommand("bound", "Evaluate a closed-form bound exactly");
    bound_cmd->add_option("id", bound.id, "Bound id")->required()->check(CLI::IsMember(bound_ids()));
    bound_cmd->add_option("--n", bound.n, "Ground set size")->required();
    bound_cmd->add_option("--m", bound.m);
    bound_cmd->add_option("--s", bound.s);
    bound_cmd->add_option("--t", bound.t);
    bound_cmd->add_option("--h", bound.h);

    ConstructArgs construct;
    auto* construct_cmd = app.add_subcommand("construct", "Emit an extremal construction");
    construct_cmd->add_option("kind", construct.kind)->required()->check(CLI::IsMember({"kt", "middle", "diamond", "complement"}));
    construct_cmd->add_option("--n", construct.n);
    construct_cmd->add_option("--r", construct.r, "Number of middle levels");
    construct_cmd->add_option("--m", construct.m, "Diamond width");
    construct_cmd->add_option("--family", construct.family, "Family file (complement)");

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "Test a family for forbidden configurations");
    check_cmd->add_option("--family", check.family)->required();
    check_cmd->add_option("--config", check.config, "Named config id or config file")->required();
    check_cmd->add_flag("--induced", check.induced);

    SearchArgs search;
    search.workers = workers;
    auto* search_cmd = app.add_subcommand("search", "Exact maximum avoiding family by branch-and-bound");
    search_cmd->add_option("--n", search.n)->required()->check(CLI::PositiveNumber);
    search_cmd->add_option("--config", search.config)->required();
    search_cmd->add_flag("--induced", search.induced);
    search_cmd->add_option("--time-limit", search.time_limit)->check(CLI::PositiveNumber);
    search_cmd->add_option("--symmetry", search.symmetry)->check(CLI::IsMember({"on", "off"}));
    search_cmd->add_option("--theorem-bound", search.theorem_bound)->check(CLI::IsMember(bound_ids()));
    search_cmd->add_option("--m", search.m);
    search_cmd->add_option("--s", search.s);
    search_cmd->add_option("--t", search.t);
    search_cmd->add_option("--h", search.h);
    search_cmd->add_flag("--allow-slow", search.allow_slow);
    search_cmd->add_flag("--exclude-empty-full", search.exclude_empty_full);
    search_cmd->add_option("--workers", search.workers)->check(CLI::PositiveNumber);

    AuditArgs audit;
    audit.workers = workers;
    auto* audit_cmd = app.add_subcommand("audit", "Audit chain and Lubell machinery on a family");
    audit_cmd->add_option("kind", audit.kind)->required()->check(CLI::IsMember({"lubell", "weighted", "fork", "slemma", "alpha"}));
    audit_cmd->add_option("--family", audit.family)->required();
    audit_cmd->add_option("--trials", audit.trials)->check(CLI::PositiveNumber);
    audit_cmd->add_option("--seed", audit.seed);
    audit_cmd->add_option("--s", audit.s);
    audit_cmd->add_option("--workers", audit.workers)->check(CLI::PositiveNumber);

    LubellArgs lub;
    auto* lubell_cmd = app.add_subcommand("lubell", "Lubell value and the matching size bound");
    lubell_cmd->add_option("--family", lub.family);
    lubell_cmd->add_option("--n", lub.n);
    lubell_cmd->add_option("--x", lub.x);
    lubell_cmd->add_option("--y", lub.y, "Rational as p/q");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        if (*bound_cmd) run_bound(ctx, bound);
        else if (*construct_cmd) run_construct(ctx, construct);
        else if (*check_cmd) run_check(ctx, check);
        else if (*search_cmd) run_search(ctx, search);
        else if (*audit_cmd) run_audit(ctx, audit);
        else run_lubell(ctx, lub);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    emit(out, ctx, wall);
    return kOk;
}

} // namespace fsp::cli
