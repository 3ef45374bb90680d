#include <gtest/gtest.h>

#include "acaforge/algebra.hpp"
#include "acaforge/compilers.hpp"
#include "acaforge/engine.hpp"

using namespace acaforge;

namespace {
std::vector<State> ctx(const OverlapWitness& w) {
    std::vector<State> v;
    for (auto& [c, s] : w.context) v.push_back(s);
    return v;
}
}  // namespace

TEST(Algebra, Rule212) {
    auto r = RuleTable::wolfram(212);
    EXPECT_TRUE(check_commutativity(r));
    EXPECT_TRUE(check_monotonicity(r));
    EXPECT_TRUE(check_no_adjacent_active(r));
    EXPECT_EQ(active_transitions(r).size(), 2u);
}

TEST(Algebra, Rule150Witnesses) {
    auto r = RuleTable::wolfram(150);
    auto c = check_commutativity(r);
    ASSERT_FALSE(c);
    EXPECT_EQ(ctx(*c.witness), (std::vector<State>{1, 0, 0, 1}));
    auto m = check_monotonicity(r);
    ASSERT_FALSE(m);
    EXPECT_EQ(ctx(*m.witness), (std::vector<State>{1, 0, 0, 1}));
    EXPECT_EQ(m.witness->updated, (Cell{1, 0}));
    auto a = check_no_adjacent_active(r);
    ASSERT_FALSE(a);
    EXPECT_EQ(ctx(*a.witness), (std::vector<State>{1, 0, 0, 1}));
}

TEST(Algebra, IdentityIsVacuous) {
    auto id = RuleTable::identity(2, 3, nbhd::von_neumann());
    EXPECT_TRUE(check_commutativity(id));
    EXPECT_TRUE(check_monotonicity(id));
    EXPECT_TRUE(check_no_adjacent_active(id));
}

TEST(Algebra, MarchingSoldiersHostIsCommutative) {
    auto host = compile_marching_soldiers(RuleTable::wolfram(150)).host;
    EXPECT_EQ(host.states(), 12);
    EXPECT_TRUE(check_commutativity(host));
}

TEST(Algebra, OverlapPlacements) {
    EXPECT_EQ(overlap_placements(RuleTable::wolfram(1)).size(), 2u);
    auto moore = RuleTable::identity(2, 2, nbhd::moore());
    EXPECT_EQ(overlap_placements(moore).size(), 8u);
    auto vn = RuleTable::identity(2, 2, nbhd::von_neumann());
    EXPECT_EQ(overlap_placements(vn).size(), 4u);
}

TEST(Algebra, WitnessesReplayThroughEngine) {
    // Every witness, embedded on a zero background, reproduces its violation.
    std::mt19937_64 rng(5);
    int seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto r = RuleTable::wolfram(static_cast<unsigned>(rng() % 256));
        for (auto check : {check_commutativity, check_monotonicity, check_no_adjacent_active}) {
            auto v = check(r);
            if (v) continue;
            ++seen;
            const auto& w = *v.witness;
            auto c = w.as_configuration(1);
            std::vector<Cell> a{w.first}, b{w.second};
            State a_new = apply_update_set(r, c, a).at(w.first);
            State b_new = apply_update_set(r, c, b).at(w.second);
            ASSERT_NE(a_new, c.at(w.first));
            ASSERT_NE(b_new, c.at(w.second));
            if (w.kind == OverlapWitness::Kind::Commutativity) {
                auto ab = apply_update_set(r, apply_update_set(r, c, a), b);
                auto ba = apply_update_set(r, apply_update_set(r, c, b), a);
                EXPECT_NE(ab, ba) << r.name();
            } else if (w.kind == OverlapWitness::Kind::Monotonicity) {
                std::vector<Cell> u{w.updated};
                Cell other = w.updated == w.first ? w.second : w.first;
                auto after = apply_update_set(r, c, u);
                std::vector<Cell> o{other};
                EXPECT_EQ(apply_update_set(r, after, o).at(other), c.at(other)) << r.name();
            }
        }
    }
    EXPECT_GT(seen, 50);
}

TEST(Algebra, CommutativeRulesHaveInvariantHistories) {
    // Checker verdicts agree with sampled runs.
    std::mt19937_64 rng(77);
    int commutative = 0;
    for (unsigned code = 0; code < 256; ++code) {
        auto r = RuleTable::wolfram(code);
        if (!check_commutativity(r) || !check_monotonicity(r)) continue;
        ++commutative;
        for (int k = 0; k < 3; ++k) {
            std::vector<State> w(16);
            for (auto& v : w) v = static_cast<State>(rng() % 2);
            Configuration c(Background::periodic_1d(w));
            Domain d{Box::line(0, 16), Boundary::periodic()};
            auto h1 = extract_history(r, c, UpdateSchedule::fair_random(rng(), 0, 0.2), 300, d);
            auto h2 = extract_history(r, c, UpdateSchedule::sweep(SweepOrder::RightToLeft), 300, d);
            EXPECT_TRUE(h1.agrees_with(h2)) << code;
        }
    }
    EXPECT_GT(commutative, 10);
}
