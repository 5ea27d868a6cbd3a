#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cowi/bounds.hpp"
#include "cowi/envgen.hpp"

using namespace cowi;

namespace {

PreferenceInstance counterexample() { return PreferenceInstance::uniform(3, {0.5, 0.25, 0.25}); }

// Binomial coefficient in floating point from the multiplicative formula, 0 outside range.
double choose(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// Random strictly positive triple with a clear mode.
PreferenceTriple positive_triple(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.02, 1.0);
    for (;;) {
        const double a = u(gen), b = u(gen), c = u(gen);
        const double s = a + b + c;
        PreferenceTriple t{a / s, b / s, 1.0 - a / s - b / s};
        if (t.p_prec > 0.0 && t.gap() > 0.02) return t;
    }
}

} // namespace

TEST(Kl, Bernoulli) {
    EXPECT_EQ(kl_bernoulli(0.5, 0.5), 0.0);
    EXPECT_NEAR(kl_bernoulli(0.05, 0.95), 0.9 * std::log(19.0), 1e-12);
    EXPECT_NEAR(kl_bernoulli(0.05, 0.95), 2.6500, 1e-4);
    EXPECT_EQ(kl_bernoulli(0.5, 0.0), infinity);
    EXPECT_EQ(kl_bernoulli(0.0, 0.0), 0.0);
}

TEST(Kl, Categorical) {
    EXPECT_EQ(kl_categorical3({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}), 0.0);
    EXPECT_NEAR(kl_categorical3({0.25, 0.25, 0.5}, {0.5, 0.25, 0.25}), 0.25 * std::log(2.0), 1e-15);
    EXPECT_EQ(kl_categorical3({1, 0, 0}, {0, 0.5, 0.5}), infinity);
}

TEST(Kl, DivergenceToModeFlip) {
    const auto ce = counterexample();
    EXPECT_NEAR(d_jk(ce, 1, 0), 0.25 * std::log(2.0), 1e-15);
    EXPECT_NEAR(d_jk(PreferenceInstance(2, {{0.5, 0.25, 0.25}}), 0, 1), 0.25 * std::log(2.0), 1e-15);
    EXPECT_NEAR(d_jk(PreferenceInstance(2, {{1.0 / 3, 1.0 / 3, 1.0 / 3}}), 0, 1), 0.0, 1e-15);
    EXPECT_THROW(d_jk(PreferenceInstance(2, {{0.6, 0.0, 0.4}}), 0, 1), PreconditionViolated);
}

TEST(KlInequalities, KlOfDeltaAgainstComplement) {
    for (int e = -4; e <= -1; ++e)
        for (double m : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0}) {
            const double delta = m * std::pow(10.0, e);
            if (delta > 0.4) continue;
            EXPECT_GE(kl_bernoulli(delta, 1 - delta), std::log(1 / (2.4 * delta)) - 1e-12) << delta;
        }
}

TEST(KlInequalities, PinskerAndChiSquare) {
    for (int a = 1; a < 100; ++a)
        for (int b = 1; b < 100; ++b) {
            const double p = a / 100.0, q = b / 100.0;
            const double kl = kl_bernoulli(p, q);
            EXPECT_LE(2 * (p - q) * (p - q), kl + 1e-12);
            EXPECT_LE(kl, (p - q) * (p - q) / (q * (1 - q)) + 1e-12);
        }
}

TEST(KlInequalities, ChiSquareOnTriples) {
    std::mt19937_64 gen(5);
    for (int r = 0; r < 5000; ++r) {
        const auto p = positive_triple(gen), q = positive_triple(gen);
        const double chi = (p.p_succ - q.p_succ) * (p.p_succ - q.p_succ) / q.p_succ +
                           (p.p_cong - q.p_cong) * (p.p_cong - q.p_cong) / q.p_cong +
                           (p.p_prec - q.p_prec) * (p.p_prec - q.p_prec) / q.p_prec;
        EXPECT_LE(kl_categorical3(p, q), chi + 1e-12);
    }
}

TEST(NoIndiffBound, TwoArms) {
    const auto inst = PreferenceInstance(2, {{0.7, 0.0, 0.3}});
    const auto b = lower_bound_no_indiff(inst, 0.05);
    const double kappa_ref = 0.4 * std::log(7.0 / 3.0);
    EXPECT_NEAR(kappa(inst, 1, 0), kappa_ref, 1e-15);
    ASSERT_EQ(b.per_arm.size(), 1u);
    EXPECT_DOUBLE_EQ(b.per_arm[0].factor, 1.0);
    EXPECT_NEAR(b.value, std::log(1 / 0.12) / kappa_ref, 1e-12);
    EXPECT_NEAR(b.value, 6.2559, 1e-3);
}

TEST(NoIndiffBound, LinearOrderFactor) {
    const auto inst = PreferenceInstance::uniform(3, {0.8, 0.0, 0.2});
    const auto b = lower_bound_no_indiff(inst, 0.05);
    ASSERT_EQ(b.per_arm.size(), 2u);
    EXPECT_DOUBLE_EQ(b.per_arm[0].factor, 1.0); // arm 2: L = {1}, d = 1
    EXPECT_DOUBLE_EQ(b.per_arm[1].factor, 0.5); // arm 3: L = {1,2}, d = 2
}

TEST(NoIndiffBound, Preconditions) {
    EXPECT_THROW(lower_bound_no_indiff(counterexample(), 0.05), NotApplicable);
    EXPECT_THROW(lower_bound_no_indiff(PreferenceInstance(2, {{1.0, 0.0, 0.0}}), 0.05), NotApplicable);
    // three-cycle: every arm scores 1
    EXPECT_THROW(lower_bound_no_indiff(PreferenceInstance(3, {{0.7, 0, 0.3}, {0.3, 0, 0.7}, {0.7, 0, 0.3}}), 0.05),
                 NotApplicable);
}

TEST(NoIndiffBound, PositiveOnUniqueWinnerInstances) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = gen_class(seed % 2 ? InstanceClass::p1 : InstanceClass::p2, 3 + seed % 10, seed);
        if (!copeland_profile(inst).unique_winner()) continue;
        const auto b = lower_bound_no_indiff(inst, 0.05);
        for (const auto& a : b.per_arm) EXPECT_GT(a.factor, 0.0) << seed;
        EXPECT_GT(b.value, 0.0);
        ++checked;
    }
    EXPECT_GT(checked, 50);
}

TEST(PsiSets, Counterexample) {
    const auto ce = counterexample();
    const auto p2 = psi_sets(ce, 1);
    EXPECT_TRUE(p2.psi.empty());
    EXPECT_EQ(p2.psi_dprime, (std::vector<std::pair<int, int>>{{0, 0}}));
    const auto p3 = psi_sets(ce, 2);
    EXPECT_TRUE(p3.psi.empty());
    EXPECT_EQ(p3.psi_dprime, (std::vector<std::pair<int, int>>{{0, 1}}));
}

// L(j) = {i*}, I(j) empty, deficit 1/2: Ψ'' = {(0,0)}, and Ψ = {(0,1)}
// because 0 + 2·1 >= 2·(1/2) + 1.
TEST(PsiSets, HalfDeficit) {
    const auto s = psi_sets(0, 1, 1);
    EXPECT_EQ(s.psi, (std::vector<std::pair<int, int>>{{0, 1}}));
    EXPECT_EQ(s.psi_dprime, (std::vector<std::pair<int, int>>{{0, 0}}));
    EXPECT_TRUE(s.psi_prime.empty());
}

// The Ψ ratio simplifies to 1 / (i/|I| + l/|L|) for i, l not both zero.
TEST(CFactors, PsiRatioClosedForm) {
    for (int I = 0; I <= 12; ++I)
        for (int L = 0; L <= 12; ++L)
            for (int half = 1; half <= 2 * (I + L) + 2; ++half) {
                const auto s = psi_sets(I, L, half);
                double expected = 0.0;
                for (auto [i, l] : s.psi)
                    expected = std::max(expected, 1.0 / ((I ? double(i) / I : 0.0) + (L ? double(l) / L : 0.0)));
                EXPECT_NEAR(c_factors(I, L, s).c, expected, 1e-12 * (1 + expected));
            }
}

// Primed ratios against a direct floating-point evaluation of the binomials.
TEST(CFactors, PrimedRatiosByDirectEvaluation) {
    for (int I = 0; I <= 10; ++I)
        for (int L = 0; L <= 10; ++L)
            for (int half = 1; half <= 2 * (I + L) + 2; ++half) {
                const auto s = psi_sets(I, L, half);
                double cp = 0.0, cdp = 0.0;
                for (auto [i, l] : s.psi_prime) {
                    const double num = choose(I - 1, i) * choose(L, l);
                    const double den = num + (i >= 1 ? choose(I - 2, i - 1) * choose(L, l) : 0.0) +
                                       (l >= 1 ? choose(I - 1, i) * choose(L - 1, l - 1) : 0.0);
                    cp = std::max(cp, num / den);
                }
                for (auto [i, l] : s.psi_dprime) {
                    const double num = choose(I, i) * choose(L - 1, l);
                    const double den = num + (i >= 1 ? choose(I - 1, i - 1) * choose(L - 1, l) : 0.0) +
                                       (l >= 1 ? choose(I, i) * choose(L - 2, l - 1) : 0.0);
                    cdp = std::max(cdp, num / den);
                }
                const auto f = c_factors(I, L, s);
                EXPECT_NEAR(f.c_prime, cp, 1e-12);
                EXPECT_NEAR(f.c_dprime, cdp, 1e-12);
            }
}

// Beyond 64 arms the log route takes over; it must agree with the closed form.
TEST(CFactors, LogRouteForLargeSets) {
    for (int I : {0, 30, 70}) {
        for (int L : {40, 80, 120}) {
            const int half = I + L;
            const auto s = psi_sets(I, L, half);
            double expected = 0.0;
            for (auto [i, l] : s.psi)
                expected = std::max(expected, 1.0 / ((I ? double(i) / I : 0.0) + (L ? double(l) / L : 0.0)));
            EXPECT_NEAR(c_factors(I, L, s).c, expected, 1e-9 * expected);
        }
    }
}

TEST(DetailedBound, Counterexample) {
    const auto b = lower_bound_detailed(counterexample(), 0.05);
    ASSERT_EQ(b.per_arm.size(), 2u);
    EXPECT_DOUBLE_EQ(b.per_arm[0].factor, 1.0);
    EXPECT_DOUBLE_EQ(b.per_arm[1].factor, 0.5);
    const double D = 0.25 * std::log(2.0);
    EXPECT_NEAR(b.value, std::log(1 / 0.12) * 1.5 / D, 1e-9);
    EXPECT_NEAR(b.value, 18.35, 0.01);

    const auto simple = lower_bound_simple_indiff(counterexample(), 0.05);
    EXPECT_EQ(simple.value, 0.0);
    EXPECT_FALSE(simple.reason.empty());
}

TEST(DetailedBound, ReducesToNoIndiffFactorWithoutIndifferentModes) {
    // strictly positive, but indifference is never the mode
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.05, 0.25);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 3 + std::size_t(rep) % 7;
        std::vector<PreferenceTriple> t(pair_count(n));
        for (auto& x : t) {
            const double c = u(gen), g = 0.1 + u(gen);
            const double top = (1 - c + g) / 2;
            x = gen() % 2 ? PreferenceTriple{top, c, 1 - c - top} : PreferenceTriple{1 - c - top, c, top};
        }
        const PreferenceInstance inst(n, t);
        const auto prof = copeland_profile(inst);
        if (!prof.unique_winner()) continue;
        const auto rel = relation_sets(inst);
        const auto b = lower_bound_detailed(inst, 0.05);
        for (const auto& a : b.per_arm) {
            const auto j = std::size_t(a.arm);
            const int L = int(rel.superior[j].size()), d = prof.half_gaps[j] / 2;
            const double first = L >= d + 1 ? double(L) / (d + 1) : 0.0;
            const double second =
                rel.superior[j].contains(prof.copeland_set[0]) ? (d == 1 ? 1.0 : double(L - 1) / (L + d - 2)) : 0.0;
            EXPECT_NEAR(a.factor, std::max(first, second), 1e-12) << rep;
        }
    }
}

// D = 0 forces the uniform triple, whose mode ties; such a pair is in neither
// L(j) nor I(j), so it never reaches the minimum.
TEST(DetailedBound, SymmetricPairStaysOutOfTheMinimum) {
    PreferenceInstance sym(3, {{0.6, 0.2, 0.2}, {0.6, 0.2, 0.2}, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    const auto b = lower_bound_detailed(sym, 0.05);
    EXPECT_TRUE(b.flags.empty());
    EXPECT_TRUE(std::isfinite(b.value));
    const double d = d_jk(sym, 1, 0);
    ASSERT_EQ(b.per_arm.size(), 2u);
    EXPECT_NEAR(b.per_arm[0].min_inverse_div, 1.0 / d, 1e-12);
    EXPECT_NEAR(b.per_arm[1].min_inverse_div, 1.0 / d, 1e-12);
}

TEST(DetailedBound, Preconditions) {
    EXPECT_THROW(lower_bound_detailed(PreferenceInstance(2, {{0.7, 0.0, 0.3}}), 0.05), NotApplicable);
    EXPECT_THROW(lower_bound_detailed(PreferenceInstance::uniform(3, {0.2, 0.6, 0.2}), 0.05), NotApplicable);
}

// Exactly one of the three non-triviality cases applies per arm, and the bound
// stays below the upper bound of the algorithm.
TEST(DetailedBound, NonTrivialAndBelowUpperBound) {
    std::mt19937_64 gen(21);
    int checked = 0;
    for (int rep = 0; rep < 400 && checked < 60; ++rep) {
        const std::size_t n = 3 + std::size_t(rep) % 8;
        std::vector<PreferenceTriple> t(pair_count(n));
        for (auto& x : t) x = positive_triple(gen);
        const PreferenceInstance inst(n, t);
        const auto prof = copeland_profile(inst);
        if (!prof.unique_winner()) continue;
        const int w = prof.copeland_set[0];
        const auto rel = relation_sets(inst);
        for (std::size_t j = 0; j < n; ++j) {
            if (int(j) == w) continue;
            const auto s = psi_sets(inst, int(j));
            const bool beats = rel.superior[j].contains(w), tied = rel.indifferent[j].contains(w);
            const int cases = (!beats && !tied && !s.psi.empty()) + (tied && !s.psi_prime.empty()) +
                              (beats && !s.psi_dprime.empty());
            EXPECT_EQ(cases, 1) << rep << " arm " << j;
        }
        const double lower = lower_bound_detailed(inst, 0.05).value;
        EXPECT_GT(lower, 0.0);
        EXPECT_LE(lower, upper_bound_pocowista(inst, 0.05));
        ++checked;
    }
    EXPECT_GE(checked, 50);
}

TEST(UpperBound, Pocowista) {
    EXPECT_NEAR(upper_bound_pocowista(PreferenceInstance(2, {{0.6, 0.3, 0.1}}), 0.05), 6116.7299, 1e-4);
    const PreferenceTriple t{0.6, 0.3, 0.1};
    EXPECT_NEAR(upper_bound_pocowista(PreferenceInstance::uniform(3, t), 0.05), 3 * t0_bound(t, 0.05 / 3), 1e-9);
    try {
        upper_bound_pocowista(PreferenceInstance(3, {{0.6, 0.3, 0.1}, {0.4, 0.4, 0.2}, {0.6, 0.3, 0.1}}), 0.05);
        FAIL();
    } catch (const DegenerateGap& e) {
        EXPECT_NE(std::string(e.what()).find("(1,3)"), std::string::npos);
    }
}

TEST(UpperBound, TraFromTrace) {
    const PreferenceInstance two(2, {{0.6, 0.3, 0.1}});
    RunTrace t;
    t.duels.push_back({1, 0, 1, 100, Outcome::win});
    t.rounds = 1;
    EXPECT_NEAR(upper_bound_tra_from_trace(two, t, 0.05), t0_bound({0.6, 0.3, 0.1}, 0.025), 1e-9);
    EXPECT_EQ(upper_bound_tra_from_trace(two, RunTrace{}, 0.05), 0.0);

    RunTrace too_long = t;
    too_long.rounds = 3;
    EXPECT_THROW(upper_bound_tra_from_trace(two, too_long, 0.05), RoundOverflow);
}

TEST(UpperBound, TraOnLinearOrder) {
    const auto inst = PreferenceInstance::uniform(10, {0.9, 0.0, 0.1});
    SeededOracle o(inst, 3);
    const auto t = tra_pocowista(10, o, 0.05);
    const double ub = upper_bound_tra_from_trace(inst, t, 0.05);
    EXPECT_LE(t.duels.size(), 10u);
    EXPECT_NEAR(ub, double(t.duels.size()) * t0_bound({0.9, 0.0, 0.1}, 0.005), 1e-6);
}

TEST(WorstCase, ScoresAndWinner) {
    for (std::size_t n : {6, 8, 12, 15}) {
        for (bool indiff : {false, true}) {
            const auto inst = worst_case_instance(n, 0.1, 1, indiff);
            const auto prof = copeland_profile(inst);
            EXPECT_EQ(prof.copeland_set, (std::vector<int>{0}));
            EXPECT_EQ(prof.half_scores[0], 2 * int((n + 1) / 2 + 1));
            const auto rel = relation_sets(inst);
            for (std::size_t j = 0; j < n; ++j) EXPECT_TRUE(rel.indifferent[j].empty());
            if (indiff) {
                EXPECT_TRUE(strictly_positive(inst));
            } else {
                EXPECT_TRUE(has_no_indifferences(inst));
            }
        }
    }
    EXPECT_EQ(copeland_profile(worst_case_instance(8, 0.1, 1, false)).score(0), 5.0);
}

TEST(WorstCase, ParameterRanges) {
    EXPECT_THROW(worst_case_instance(8, 1.0 / 6.0, 1, false), ParameterOutOfRange);
    EXPECT_THROW(worst_case_instance(8, 0.0, 1, false), ParameterOutOfRange);
    EXPECT_THROW(worst_case_instance(8, 0.1, 0, false), ParameterOutOfRange);
    EXPECT_THROW(worst_case_instance(8, 0.1, 4, false), ParameterOutOfRange);
}

TEST(BoundReport, Routing) {
    const auto ce = bound_report(counterexample(), 0.05);
    EXPECT_TRUE(ce.lower_detailed.applicable);
    EXPECT_TRUE(ce.lower_simple.applicable);
    EXPECT_EQ(ce.lower_simple.value, 0.0);
    ASSERT_TRUE(ce.upper_pocowista);

    // zero entries with indifference mass: no lower bound, upper bound still fine
    const auto z = bound_report(PreferenceInstance(3, {{0.6, 0.4, 0.0}, {0.6, 0.4, 0.0}, {0.6, 0.4, 0.0}}), 0.05);
    EXPECT_FALSE(z.lower_simple.applicable);
    EXPECT_FALSE(z.lower_detailed.applicable);
    EXPECT_FALSE(z.lower_simple.reason.empty());
    EXPECT_TRUE(z.upper_pocowista);

    const auto tie = bound_report(PreferenceInstance(2, {{0.4, 0.4, 0.2}}), 0.05);
    EXPECT_FALSE(tie.upper_pocowista);
    EXPECT_FALSE(tie.lower_detailed.applicable);
}
