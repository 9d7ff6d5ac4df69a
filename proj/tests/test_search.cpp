#include <gtest/gtest.h>

#include "fsp/bounds.hpp"
#include "fsp/constructions.hpp"
#include "fsp/search.hpp"
#include "oracles.hpp"

using namespace fsp;

namespace {

ConfigSet named(const std::string& text) { return build_named(*ConfigId::parse(text)); }

SearchProblem problem(int n, const ConfigSet& configs, EmbedMode mode = EmbedMode::standard) {
    SearchProblem p{GroundSet(n), configs, mode, {}};
    return p;
}

std::size_t best(int n, const std::string& config) { return exact_max_family(problem(n, named(config))).best_size; }

} // namespace

TEST(ExactMaxFamily, Examples) {
    const auto kt = exact_max_family(problem(3, named("kt_pair")));
    EXPECT_EQ(kt.best_size, 4u);
    EXPECT_EQ(kt.status, SearchStatus::proven_optimal);
    EXPECT_TRUE(kt.exhausted);
    EXPECT_EQ(best(2, "j_config"), 3u);
    EXPECT_EQ(best(3, "diamond(4)"), 8u);
    EXPECT_EQ(best(4, "j_config"), 10u);
    EXPECT_EQ(best(4, "diamond(4)"), 15u);
    EXPECT_EQ(best(4, "kt_pair"), 6u);
}

TEST(ExactMaxFamily, WitnessReplays) {
    for (const auto& id : fixture::named_ids(6)) {
        const auto p = problem(3, build_named(id));
        const auto r = exact_max_family(p);
        ASSERT_TRUE(verify_witness(r, p)) << id.str();
        ASSERT_EQ(r.witness.size(), r.best_size);
    }
}

TEST(ExactMaxFamily, OracleEquivalence) {
    for (int n = 1; n <= 3; ++n)
        for (const auto& id : fixture::named_ids(6))
            for (EmbedMode mode : {EmbedMode::standard, EmbedMode::induced}) {
                const auto configs = build_named(id);
                ASSERT_EQ(exact_max_family(problem(n, configs, mode)).best_size, oracle::max_family(n, configs, mode))
                    << "n=" << n << " " << id.str() << " " << to_string(mode);
            }
}

TEST(ExactMaxFamily, SymmetryOnEqualsOff) {
    for (int n = 2; n <= 4; ++n)
        for (const auto& id : fixture::named_ids(6)) {
            auto on = problem(n, build_named(id));
            auto off = on;
            off.options.symmetry = false;
            ASSERT_EQ(exact_max_family(on).best_size, exact_max_family(off).best_size) << "n=" << n << " " << id.str();
        }
}

TEST(ExactMaxFamily, AntiMonotoneInConfigs) {
    const auto ids = fixture::named_ids(6);
    for (int n = 2; n <= 4; ++n)
        for (std::size_t i = 0; i < ids.size(); i += 2) {
            const auto a = build_named(ids[i]);
            const auto b = build_named(ids[(i + 3) % ids.size()]);
            ConfigSet both = a;
            for (const auto& poset : b) both = both.plus(poset);
            const auto alone = exact_max_family(problem(n, a)).best_size;
            ASSERT_LE(exact_max_family(problem(n, both)).best_size, alone) << n << " " << ids[i].str();
        }
}

TEST(ExactMaxFamily, TheoremConsistency) {
    for (int n = 3; n <= 4; ++n) {
        EXPECT_LE(Rational(BigInt(best(n, "kt_pair"))), evaluate_bound("kt", n).value);
        EXPECT_LE(Rational(BigInt(best(n, "j_config"))), evaluate_bound("j", n).value);
        EXPECT_LE(Rational(BigInt(best(n, "diamond(4)"))), evaluate_bound("diamond_m4", n).value);
    }
    for (int m = 2; m <= 5; ++m)
        for (int n = 2; n <= 4; ++n) {
            const BoundParams params{{"n", n}, {"m", m}};
            EXPECT_LE(Rational(BigInt(best(n, "diamond(" + std::to_string(m) + ")"))), evaluate_bound("diamond_restricted", params).value);
        }
}

TEST(ExactMaxFamily, ConstructionConsistency) {
    for (int n = 2; n <= 5; ++n) {
        const auto kt = named("kt_pair");
        const Family c = kt_construction(n);
        ASSERT_TRUE(is_avoiding(c, kt));
        EXPECT_GE(exact_max_family(problem(n, kt)).best_size, c.size()) << n;
    }
    for (int n = 3; n <= 4; ++n) {
        const auto bf = named("butterfly_pair");
        const Family mid = middle_levels(n, 2);
        ASSERT_TRUE(is_avoiding(mid, bf));
        EXPECT_GE(exact_max_family(problem(n, bf)).best_size, mid.size()) << n;
    }
}

TEST(ExactMaxFamily, DeterministicAcrossWorkers) {
    for (const std::string config : {"kt_pair", "j_config", "butterfly_pair"}) {
        auto p = problem(4, named(config));
        const auto a = exact_max_family(p);
        const auto b = exact_max_family(p);
        p.options.workers = 3;
        const auto c = exact_max_family(p);
        EXPECT_EQ(a.best_size, c.best_size) << config;
        EXPECT_EQ(a.witness, b.witness) << config;
        EXPECT_EQ(a.witness, c.witness) << config;
        EXPECT_EQ(a.nodes, b.nodes) << config;
        EXPECT_EQ(a.nodes, c.nodes) << config;
    }
}

TEST(ExactMaxFamily, TheoremBoundEarlyStop) {
    auto p = problem(5, named("kt_pair"));
    p.options.theorem_bound = evaluate_bound("kt", 5).value;
    p.options.theorem_bound_source = "kt";
    const auto r = exact_max_family(p);
    EXPECT_EQ(r.best_size, 12u);
    EXPECT_EQ(r.status, SearchStatus::optimal_assuming_theorem);
    EXPECT_TRUE(verify_witness(r, p));
}

TEST(ExactMaxFamily, TimeoutGivesLowerBound) {
    auto p = problem(6, named("butterfly_pair"));
    p.options.time_limit_seconds = 1e-6;
    const auto r = exact_max_family(p);
    EXPECT_EQ(r.status, SearchStatus::lower_bound_only);
    EXPECT_FALSE(r.exhausted);
    EXPECT_GE(r.best_size, greedy_lower_bound(p).size());
    EXPECT_TRUE(verify_witness(r, p));
}

TEST(ExactMaxFamily, LargeNDowngraded) {
    auto p = problem(7, named("chain(10)"));
    const auto r = exact_max_family(p);
    EXPECT_EQ(r.best_size, 128u);
    EXPECT_EQ(r.status, SearchStatus::lower_bound_only);
    EXPECT_THROW(exact_max_family(problem(13, named("kt_pair"))), RangeError);
}

TEST(ExactMaxFamily, ExcludingEmptyAndFull) {
    auto p = problem(3, named("diamond(4)"));
    p.options.include_empty_and_full = false;
    const auto r = exact_max_family(p);
    EXPECT_EQ(r.best_size, 6u);
    EXPECT_FALSE(r.witness.contains(SubsetMask(0)));
}

TEST(GreedyLowerBound, Examples) {
    EXPECT_GE(greedy_lower_bound(problem(4, named("j_config"))).size(), 10u);
    EXPECT_GE(greedy_lower_bound(problem(3, named("kt_pair"))).size(), 3u);
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(greedy_lower_bound(problem(n, named("chain(10)"))), power_set(GroundSet(n)));
}

TEST(GreedyLowerBound, MaximalAndAvoiding) {
    for (int n = 2; n <= 6; ++n)
        for (const auto& id : fixture::named_ids(6)) {
            const auto configs = build_named(id);
            const Family g = greedy_lower_bound(problem(n, configs));
            ASSERT_TRUE(is_avoiding(g, configs)) << n << " " << id.str();
            for (SubsetMask s : candidate_order(GroundSet(n), true))
                if (!g.contains(s)) {
                    ASSERT_TRUE(violates_on_add(g, s, configs)) << n << " " << id.str();
                }
        }
}

TEST(CandidateOrder, MiddleFirstThenBitmask) {
    const auto order = candidate_order(GroundSet(3), true);
    ASSERT_EQ(order.size(), 8u);
    EXPECT_EQ(order[0], SubsetMask(0b001));
    EXPECT_EQ(order[1], SubsetMask(0b010));
    EXPECT_EQ(order[2], SubsetMask(0b011));
    EXPECT_EQ(order[6], SubsetMask(0b000));
    EXPECT_EQ(order[7], SubsetMask(0b111));
    EXPECT_EQ(candidate_order(GroundSet(3), false).size(), 6u);
}

TEST(VerifyWitness, RejectsTampering) {
    const auto p = problem(4, named("j_config"));
    const auto r = exact_max_family(p);
    ASSERT_TRUE(verify_witness(r, p));
    auto smaller = r;
    smaller.best_size -= 1;
    EXPECT_FALSE(verify_witness(smaller, p));
    // Swap one member for a set that completes a J.
    auto tampered = r;
    for (SubsetMask s : r.witness.members()) {
        for (std::uint64_t b = 0; b < 16; ++b) {
            const SubsetMask t(b);
            if (r.witness.contains(t)) continue;
            const Family swapped = r.witness.without(s).with(t);
            if (!is_avoiding(swapped, p.configs)) {
                tampered.witness = swapped;
                break;
            }
        }
        if (tampered.witness != r.witness) break;
    }
    ASSERT_NE(tampered.witness, r.witness);
    EXPECT_FALSE(verify_witness(tampered, p));
}
