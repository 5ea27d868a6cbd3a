#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "cowi/envgen.hpp"

using namespace cowi;

namespace {

// Independent class-membership check written directly from the class definitions.
bool in_p1(const PreferenceInstance& inst) {
    for (std::size_t i = 0; i < inst.n(); ++i)
        for (std::size_t j = 0; j < inst.n(); ++j) {
            if (i == j) continue;
            const auto t = inst(i, j);
            if (t.p_cong != 0.0 || std::abs(t.p_succ - 0.5) < 0.1) return false;
        }
    return true;
}

bool in_p2(const PreferenceInstance& inst) {
    for (std::size_t i = 0; i < inst.n(); ++i)
        for (std::size_t j = 0; j < inst.n(); ++j) {
            if (i == j) continue;
            const double off = std::abs(inst(i, j).p_succ - 0.5);
            if (inst(i, j).p_cong != 0.0 || off < 0.05 || off > 0.3) return false;
        }
    return true;
}

bool has_cw(const PreferenceInstance& inst) {
    for (std::size_t r = 0; r < inst.n(); ++r) {
        int beaten = 0;
        for (std::size_t j = 0; j < inst.n(); ++j) beaten += j != r && inst(r, j).p_succ > 0.5;
        if (beaten == int(inst.n()) - 1) return true;
    }
    return false;
}

} // namespace

TEST(Rng, SplitMixReferenceValues) {
    // First outputs of SplitMix64 seeded with 0 (reference implementation).
    EXPECT_EQ(rng::draw_bits(0, 0), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(rng::draw_bits(0, 1), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(rng::draw_bits(0, 2), 0x06C45D188009454FULL);
    rng::Stream s(0);
    EXPECT_EQ(s(), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, BelowIsInRangeAndCoversValues) {
    rng::Stream s(9);
    std::array<int, 7> hits{};
    for (int k = 0; k < 7000; ++k) ++hits[s.below(7)];
    for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Oracle, DeterministicTriples) {
    SeededOracle win(PreferenceInstance(2, {{1, 0, 0}}), 1);
    SeededOracle tie(PreferenceInstance(2, {{0, 1, 0}}), 1);
    for (int k = 0; k < 100; ++k) {
        EXPECT_EQ(win.sample(0, 1), Outcome::win);
        EXPECT_EQ(win.sample(1, 0), Outcome::loss);
        EXPECT_EQ(tie.sample(0, 1), Outcome::indifferent);
    }
}

TEST(Oracle, MarginalsWithinThreeSigma) {
    const int draws = 100000;
    const auto inst = gen_transitive(5, {0.1, 0.3, 0.3}, 17);
    SeededOracle o(inst, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
            std::array<int, 3> c{};
            for (int k = 0; k < draws; ++k) ++c[std::size_t(outcome_index(o.sample(int(i), int(j))) - 1)];
            const auto t = inst(i, j);
            const std::array<double, 3> p{t.p_succ, t.p_cong, t.p_prec};
            for (std::size_t x = 0; x < 3; ++x)
                EXPECT_NEAR(double(c[x]) / draws, p[x], 3 * std::sqrt(p[x] * (1 - p[x]) / draws) + 1e-12);
        }
    SeededOracle q(PreferenceInstance(2, {{0.5, 0.25, 0.25}}), 8);
    std::array<int, 3> c{};
    for (int k = 0; k < draws; ++k) ++c[std::size_t(outcome_index(q.sample(0, 1)) - 1)];
    EXPECT_NEAR(c[0] / double(draws), 0.5, 3 * std::sqrt(0.25 / draws));
    EXPECT_NEAR(c[1] / double(draws), 0.25, 3 * std::sqrt(0.1875 / draws));
}

// The stream of a pair does not depend on how other pairs are interleaved.
TEST(Oracle, SubstreamsIgnoreInterleaving) {
    const auto inst = gen_class(InstanceClass::p2, 4, 3);
    SeededOracle a(inst, 77), b(inst, 77);
    std::vector<Outcome> only, mixed;
    for (int k = 0; k < 200; ++k) only.push_back(a.sample(1, 3));
    for (int k = 0; k < 200; ++k) {
        b.sample(0, 2);
        mixed.push_back(k % 2 ? b.sample(1, 3) : reversed(b.sample(3, 1)));
        b.sample(2, 3);
    }
    EXPECT_EQ(only, mixed);
    EXPECT_EQ(b.draws(1, 3), 200u);
}

TEST(GenClass, Membership) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p1 = gen_class(InstanceClass::p1, 20, seed);
        EXPECT_TRUE(in_p1(p1));
        EXPECT_TRUE(class_member(InstanceClass::p1, p1));
        const auto p2 = gen_class(InstanceClass::p2, 20, seed);
        EXPECT_TRUE(in_p2(p2));
        EXPECT_TRUE(class_member(InstanceClass::p2, p2));
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto c1 = gen_class(InstanceClass::p1cw, 5, seed);
        EXPECT_TRUE(in_p1(c1) && has_cw(c1));
        const auto c2 = gen_class(InstanceClass::p2cw, 5, seed);
        EXPECT_TRUE(in_p2(c2) && has_cw(c2));
    }
}

TEST(GenClass, CondorcetWinnerForTwentyArms) {
    const auto inst = gen_class(InstanceClass::p1cw, 20, 1);
    EXPECT_TRUE(has_cw(inst));
    const auto w = condorcet_winner(inst);
    ASSERT_TRUE(w);
    EXPECT_EQ(copeland_profile(inst).copeland_set, (std::vector<int>{*w}));
}

TEST(GenClass, Reproducible) {
    EXPECT_EQ(gen_class(InstanceClass::p1, 12, 99), gen_class(InstanceClass::p1, 12, 99));
    EXPECT_NE(gen_class(InstanceClass::p1, 12, 99), gen_class(InstanceClass::p1, 12, 100));
}

TEST(GenClass, P1DrawsBothSides) {
    int below = 0, above = 0;
    for (const auto& t : gen_class(InstanceClass::p1, 40, 4).upper_triples()) (t.p_succ < 0.5 ? below : above)++;
    EXPECT_GT(below, 300);
    EXPECT_GT(above, 300);
}

TEST(GenTransitive, StrictOrder) {
    const auto inst = gen_transitive(5, {0.1, 0.3, 0.0}, 2);
    EXPECT_TRUE(is_transitive(inst));
    EXPECT_TRUE(copeland_profile(inst).unique_winner());
    for (const auto& t : inst.upper_triples()) EXPECT_NE(*t.mode(), Outcome::indifferent);
}

TEST(GenTransitive, SingleBlock) {
    const auto inst = gen_transitive(6, {0.1, 0.3, 1.0}, 2);
    for (const auto& t : inst.upper_triples()) EXPECT_EQ(*t.mode(), Outcome::indifferent);
    EXPECT_EQ(copeland_profile(inst).copeland_set.size(), 6u);
}

TEST(GenTransitive, AlwaysTransitiveWithRequestedGaps) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        TransitiveParams p{0.05, 0.5, (seed % 5) * 0.2};
        std::vector<int> blocks;
        const auto inst = gen_transitive(3 + seed % 15, p, seed, &blocks);
        EXPECT_TRUE(is_transitive(inst)) << seed;
        EXPECT_TRUE(validate(inst).ok());
        EXPECT_EQ(validate(inst).warning_count(), 0u);
        for (const auto& t : inst.upper_triples()) {
            EXPECT_GE(t.gap(), p.gap_min - 1e-12);
            EXPECT_LE(t.gap(), p.gap_max + 1e-12);
            EXPECT_GT(t.p_succ, 0.0);
            EXPECT_GT(t.p_cong, 0.0);
            EXPECT_GT(t.p_prec, 0.0);
        }
    }
}

TEST(GenTransitive, RejectsBadParameters) {
    EXPECT_THROW(gen_transitive(5, {0.0, 0.3, 0.0}, 1), std::invalid_argument);
    EXPECT_THROW(gen_transitive(5, {0.3, 0.1, 0.0}, 1), std::invalid_argument);
    EXPECT_THROW(gen_transitive(5, {0.1, 0.7, 0.0}, 1), std::invalid_argument);
    EXPECT_THROW(gen_transitive(5, {0.1, 0.3, 1.5}, 1), std::invalid_argument);
}
