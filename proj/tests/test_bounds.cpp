#include <gtest/gtest.h>

#include "fsp/bounds.hpp"
#include "fsp/constructions.hpp"
#include "fsp/detector.hpp"
#include "oracles.hpp"

using namespace fsp;

namespace {

Rational R(long long p, long long q = 1) { return Rational(BigInt(p), BigInt(q)); }

BoundResult eval(const std::string& id, BoundParams p) { return evaluate_bound(id, p); }

} // namespace

TEST(EvaluateBound, Examples) {
    const auto kt = eval("kt", {{"n", 9}});
    EXPECT_EQ(kt.value, R(140));
    EXPECT_EQ(kt.exactness, Exactness::exact);
    EXPECT_EQ(eval("fork_explicit", {{"n", 6}, {"s", 3}}).value, R(41));
    EXPECT_EQ(eval("diamond_restricted", {{"n", 10}, {"m", 10}}).value, R(2268));
    const auto bf = eval("butterfly", {{"n", 13}});
    EXPECT_EQ(bf.value, R(3432));
    EXPECT_TRUE(bf.in_range);
    EXPECT_EQ(bf.exactness, Exactness::exact);
}

TEST(EvaluateBound, ValidityFlags) {
    EXPECT_FALSE(eval("butterfly", {{"n", 12}}).in_range);
    EXPECT_EQ(eval("butterfly", {{"n", 12}}).value, Rational(sigma(12, 2)));
    EXPECT_FALSE(eval("kt", {{"n", 2}}).in_range);
    EXPECT_TRUE(eval("diamond_m4", {{"n", 3}}).in_range);
    EXPECT_NE(eval("butterfly", {{"n", 12}}).validity_status().find("outside"), std::string::npos);
}

TEST(EvaluateBound, MainTermOnlyWhereErrorTermsAreOmitted) {
    for (const std::string id : {"fork_main", "dbk_fork_main"}) EXPECT_EQ(eval(id, {{"n", 10}, {"s", 3}}).exactness, Exactness::main_term_only);
    for (const std::string id : {"baton_main", "glu_baton_main"})
        EXPECT_EQ(eval(id, {{"n", 10}, {"h", 4}, {"s", 2}, {"t", 2}}).exactness, Exactness::main_term_only);
    for (const std::string id : {"kt", "butterfly", "j", "dks_butterfly", "li_j", "diamond_m4"}) EXPECT_EQ(eval(id, {{"n", 10}}).exactness, Exactness::exact);
    EXPECT_EQ(eval("fork_explicit", {{"n", 10}, {"s", 3}}).exactness, Exactness::exact);
    EXPECT_EQ(eval("glu_diamond", {{"n", 10}, {"m", 3}}).exactness, Exactness::exact);
}

TEST(EvaluateBound, MainTermValues) {
    // (1 + 2(s-1)/n) C(n, n/2) at n = 10, s = 3: (1 + 4/10) 252.
    EXPECT_EQ(eval("fork_main", {{"n", 10}, {"s", 3}}).value, R(7, 5) * R(252));
    // Sigma(10, 3) + C(10, 7) 2(2+2-2)/10 with h = 4.
    EXPECT_EQ(eval("baton_main", {{"n", 10}, {"h", 4}, {"s", 2}, {"t", 2}}).value, Rational(sigma(10, 3)) + R(120) * R(4, 10));
    EXPECT_EQ(eval("glu_baton_main", {{"n", 10}, {"h", 4}, {"s", 2}, {"t", 2}}).value, Rational(sigma(10, 3)) + R(120) * R(16, 10));
}

TEST(EvaluateBound, GriggsLiLuCases) {
    // m = 3: t = ceil(log2 5) = 3, 2^3 - C(3,1) - 1 = 4 >= 3, so Sigma(n, 3).
    EXPECT_EQ(eval("glu_diamond", {{"n", 10}, {"m", 3}}).value, Rational(sigma(10, 3)));
    // m = 5: t = 3, 5 > 4, so (t + 1 - (8 - 5 - 1)/3) C(n, n/2) = (4 - 2/3) 252.
    EXPECT_EQ(eval("glu_diamond", {{"n", 10}, {"m", 5}}).value, (R(4) - R(2, 3)) * R(252));
}

TEST(EvaluateBound, Errors) {
    EXPECT_THROW(eval("nope", {{"n", 5}}), ArgumentError);
    EXPECT_THROW(eval("kt", {}), ArgumentError);
    EXPECT_THROW(eval("fork_explicit", {{"n", 5}}), ArgumentError);
    EXPECT_THROW(eval("diamond_restricted", {{"n", 5}, {"m", 1}}), ArgumentError);
    EXPECT_THROW(eval("kt", {{"n", 0}}), ArgumentError);
}

TEST(EvaluateBound, SharedClosedForms) {
    for (int n = 1; n <= 40; ++n) {
        EXPECT_EQ(evaluate_bound("j", n).value, Rational(sigma(n, 2)));
        EXPECT_EQ(evaluate_bound("dks_butterfly", n).value, Rational(sigma(n, 2)));
        EXPECT_EQ(evaluate_bound("li_j", n).value, Rational(sigma(n, 2)));
    }
}

TEST(EvaluateBound, DiamondM4MetByMiddleLevels) {
    for (int n = 3; n <= 8; ++n) {
        EXPECT_EQ(evaluate_bound("diamond_m4", n).value, Rational(sigma(n, 4)));
        const Family f = middle_levels(n, 4);
        EXPECT_EQ(Rational(BigInt(f.size())), evaluate_bound("diamond_m4", n).value);
        EXPECT_TRUE(is_avoiding(f, build_named(ConfigId::diamond(4))));
    }
}

TEST(EvaluateBound, KtMetByConstruction) {
    for (int n = 3; n <= 14; ++n) EXPECT_EQ(evaluate_bound("kt", n).value, Rational(BigInt(kt_construction(n).size())));
}

TEST(EvaluateBound, EveryIdEvaluates) {
    const BoundParams p{{"n", 12}, {"m", 6}, {"s", 2}, {"t", 2}, {"h", 4}};
    for (const auto& id : bound_ids()) {
        const auto r = evaluate_bound(id, p);
        EXPECT_GT(r.value, 0) << id;
        EXPECT_FALSE(r.source.empty()) << id;
        EXPECT_FALSE(r.validity.empty()) << id;
    }
}

TEST(GeneralConstant, Examples) {
    EXPECT_EQ(general_constant({4}), R(6));
    EXPECT_EQ(general_constant({2}), R(3));
    EXPECT_EQ(general_constant({2, 2}), R(6));
    EXPECT_EQ(class_constant(1), R(2));
    EXPECT_THROW(general_constant({}), ArgumentError);
    EXPECT_THROW(general_constant({0}), RangeError);
}

TEST(GeneralConstant, AdditiveOverConcatenation) {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> a, b;
        for (int i = 0, len = 1 + static_cast<int>(rng.below(4)); i < len; ++i) a.push_back(1 + static_cast<int>(rng.below(30)));
        for (int i = 0, len = 1 + static_cast<int>(rng.below(4)); i < len; ++i) b.push_back(1 + static_cast<int>(rng.below(30)));
        std::vector<int> ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        ASSERT_EQ(general_constant(ab), general_constant(a) + general_constant(b));
    }
}

TEST(GeneralConstant, ClassConstantFormula) {
    // 3 (ceil(log_3(m - 1)) + 1): m = 2 -> 3, m = 3 -> 6, m = 4 -> 6, m = 10 -> 9, m = 11 -> 12.
    EXPECT_EQ(class_constant(2), R(3));
    EXPECT_EQ(class_constant(3), R(6));
    EXPECT_EQ(class_constant(4), R(6));
    EXPECT_EQ(class_constant(10), R(9));
    EXPECT_EQ(class_constant(11), R(12));
}

TEST(ConstantForColoredPoset, Examples) {
    EXPECT_EQ(constant_for_colored_poset(build_named(ConfigId::diamond(4))[0]), R(10));
    EXPECT_EQ(constant_for_colored_poset(build_named(ConfigId::chain(1))[0]), R(2));
    EXPECT_EQ(constant_for_colored_poset(build_named(ConfigId::chain(2))[0]), R(4));
    EXPECT_TRUE(general_constant_extrapolates({1, 4, 1}));
    EXPECT_FALSE(general_constant_extrapolates({2, 4}));
    EXPECT_THROW(constant_for_colored_poset(ColoredPoset(2, {{0, 1}}, {1, 1})), ValidationError);
}

TEST(ConstantForColoredPoset, MaxOverColorings) {
    // Antichain of 2: colorings [1,1] -> 3, [1,2]/[2,1] -> 4.
    EXPECT_EQ(max_constant_over_colorings(ColoredPoset(2, {}, {1, 1})), R(4));
    // A chain has exactly one order-preserving surjective coloring.
    EXPECT_EQ(max_constant_over_colorings(build_named(ConfigId::chain(3))[0]), R(6));
    const auto d = build_named(ConfigId::diamond(4))[0];
    EXPECT_GE(max_constant_over_colorings(d), constant_for_colored_poset(d));
}
