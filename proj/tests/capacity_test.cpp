#include <gtest/gtest.h>

#include "lcbc/capacity.hpp"
#include "lcbc/fixtures.hpp"
#include "test_util.hpp"

namespace lcbc {
namespace {

CapacityReport solve_example(int which) {
    return solve_capacity(signal_spaces(normalize(example_instance(which)).normalized));
}

TEST(ClosedForm, FixtureCosts) {
    EXPECT_EQ(solve_example(1).delta_star, Rational(1));
    EXPECT_EQ(solve_example(2).delta_star, Rational(3, 2));
    EXPECT_EQ(solve_example(3).delta_star, Rational(2));
    EXPECT_EQ(solve_example(4).delta_star, Rational(1));
    EXPECT_EQ(solve_example(5).delta_star, Rational(3));
}

TEST(ClosedForm, CapacityIsReciprocal) {
    const CapacityReport rep = solve_example(2);
    ASSERT_TRUE(rep.c_star.has_value());
    EXPECT_EQ(*rep.c_star, Rational(2, 3));
}

TEST(ClosedForm, SingleSharedSymbolCostsOne) {
    const Field f = FieldSpec::make(2, 1);
    std::vector<UserMatrices> users;
    for (int k = 0; k < 3; ++k)
        users.push_back({MatrixFq(f, 1, 0), MatrixFq::from_columns(f, 1, {{1}})});
    const CapacityReport rep = solve_capacity(signal_spaces(LcbcInstance(f, 1, std::move(users))));
    EXPECT_EQ(rep.delta_star, Rational(1));
    EXPECT_EQ(rep.lambda.l123, Rational(1));
}

TEST(RankVectorOp, CyclicFixtureValues) {
    const RankVector rv = rank_vector(signal_spaces(normalize(example_instance(3)).normalized));
    EXPECT_EQ(rv.r12, 0);
    EXPECT_EQ(rv.r13, 0);
    EXPECT_EQ(rv.r23, 0);
    EXPECT_EQ(rv.r1_23, 1);
    EXPECT_EQ(rv.r2_13, 1);
    EXPECT_EQ(rv.r3_12, 1);
}

TEST(RankVectorOp, AllKnownInstanceIsZero) {
    // every user's demand is inside its side information
    const Field f = FieldSpec::make(2, 1);
    std::vector<UserMatrices> users;
    const MatrixFq e1 = MatrixFq::from_columns(f, 2, {{1, 0}});
    for (int k = 0; k < 3; ++k) users.push_back({e1, e1});
    const RankVector rv = rank_vector(signal_spaces(normalize(LcbcInstance(f, 2, std::move(users))).normalized));
    EXPECT_EQ(rv.m1 + rv.m2 + rv.m3, 0);
    EXPECT_EQ(rv.r123, 0);
    EXPECT_EQ(rv.r1_23, 0);
}

TEST(Waterfill, FixtureAllocations) {
    const auto expect_alloc = [](int which, Rational l123, Rational l12, Rational l13, Rational l23, Rational l,
                                 Rational fstar) {
        const CapacityReport rep = solve_example(which);
        EXPECT_EQ(rep.lambda.l123, l123) << "example " << which;
        EXPECT_EQ(rep.lambda.l12, l12) << "example " << which;
        EXPECT_EQ(rep.lambda.l13, l13) << "example " << which;
        EXPECT_EQ(rep.lambda.l23, l23) << "example " << which;
        EXPECT_EQ(rep.lambda.l, l) << "example " << which;
        EXPECT_EQ(rep.f_star, fstar) << "example " << which;
    };
    expect_alloc(1, 1, 0, 0, 0, 0, 1);
    expect_alloc(2, 0, Rational(1, 2), Rational(1, 2), Rational(1, 2), 0, Rational(3, 2));
    expect_alloc(3, 0, 0, 0, 0, 1, 2);
    expect_alloc(4, 1, 0, 0, 0, 0, 1);
    expect_alloc(5, 0, 1, 0, 0, 1, 3);
}

TEST(Waterfill, RejectsInvalidRankVector) {
    RankVector rv{};
    rv.r123 = 2;
    rv.r12 = 1;  // violates r123 <= min pair rank
    EXPECT_THROW(waterfill(rv), std::invalid_argument);
}

TEST(TwoUserCost, IdenticalUsersReduceToConditionalRank) {
    const Field f = FieldSpec::make(2, 1);
    const MatrixFq vp = MatrixFq::from_columns(f, 3, {{1, 0, 0}});
    const MatrixFq v = MatrixFq::from_columns(f, 3, {{0, 1, 0}, {0, 0, 1}});
    EXPECT_EQ(two_user_cost(v, vp, v, vp), Rational(2));
}

TEST(TwoUserCost, CyclicFixturePairCostsTwo) {
    const LcbcInstance inst = example_instance(3);
    EXPECT_EQ(two_user_cost(inst.user(0).demand, inst.user(0).side, inst.user(1).demand, inst.user(1).side),
              Rational(2));
}

TEST(TwoUserCost, KnownDemandDegeneratesToSingleUser) {
    const Field f = FieldSpec::make(3, 1);
    const MatrixFq v1p = MatrixFq::from_columns(f, 2, {{1, 0}});
    const MatrixFq v1 = MatrixFq::from_columns(f, 2, {{0, 1}});
    const MatrixFq v2p = MatrixFq::from_columns(f, 2, {{0, 1}});
    const MatrixFq v2 = v2p;  // user 2 wants what it has
    EXPECT_EQ(two_user_cost(v1, v1p, v2, v2p), Rational(1));
}

// Independent LP oracle: enumerate the lambda lattice at half-integer steps
// inside the constraint box and take the best objective.
Rational lattice_lp_minimum(const RankVector& rv) {
    const auto feasible = [&](int a123, int a12, int a13, int a23, int a) {
        // all values doubled to stay integral
        return a123 <= 2 * rv.r123 && a12 + a123 <= 2 * rv.r12 && a13 + a123 <= 2 * rv.r13 &&
               a23 + a123 <= 2 * rv.r23 && a12 + a13 + a123 <= 2 * rv.r12_13 &&
               a12 + a23 + a123 <= 2 * rv.r12_23 && a13 + a23 + a123 <= 2 * rv.r13_23 &&
               a + a12 + a13 + a123 <= 2 * rv.r1_23 && a + a12 + a23 + a123 <= 2 * rv.r2_13 &&
               a + a13 + a23 + a123 <= 2 * rv.r3_12;
    };
    Rational best(rv.m_total());
    const int cap = 2 * std::max({rv.r1_23, rv.r2_13, rv.r3_12, rv.r123, 0});
    for (int a123 = 0; a123 <= 2 * rv.r123; ++a123)
        for (int a12 = 0; a12 + a123 <= 2 * rv.r12; ++a12)
            for (int a13 = 0; a13 + a123 <= 2 * rv.r13; ++a13)
                for (int a23 = 0; a23 + a123 <= 2 * rv.r23; ++a23)
                    for (int a = 0; a <= cap; ++a) {
                        if (!feasible(a123, a12, a13, a23, a)) continue;
                        const Rational obj =
                            Rational(rv.m_total()) - Rational(2 * a123 + a12 + a13 + a23 + a, 2);
                        best = Rational::min(best, obj);
                    }
    return best;
}

TEST(CrossPath, ClosedFormEqualsWaterfillingAndLattice) {
    const Field f2 = FieldSpec::make(2, 1);
    const Field f4 = FieldSpec::make(2, 2);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Field& f = (seed % 2 == 0) ? f2 : f4;
        const LcbcInstance inst = random_instance(seed, f, 2 + seed % 5, 3, 2);
        const CapacityReport rep = solve_capacity(signal_spaces(inst));
        EXPECT_TRUE(rep.paths_agree);
        if (seed < 60) EXPECT_EQ(lattice_lp_minimum(rep.ranks), rep.delta_star) << "seed " << seed;
    }
}

TEST(Invariants, SandwichAndDenominator) {
    const Field f = FieldSpec::make(3, 1);
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const LcbcInstance inst = random_instance(seed, f, 2 + seed % 5, 3, 2);
        const CapacityReport rep = solve_capacity(signal_spaces(inst));
        const int msum = rep.ranks.m_total();
        const int mmax = std::max({rep.ranks.m1, rep.ranks.m2, rep.ranks.m3});
        EXPECT_GE(rep.delta_star, Rational(mmax));
        EXPECT_LE(rep.delta_star, Rational(msum));
        EXPECT_TRUE(rep.delta_star.den() == 1 || rep.delta_star.den() == 2);
        // max over the six aggregates equals max over the twelve bounds
        Rational direct = rep.delta1[0];
        for (const auto& v : rep.delta1) direct = Rational::max(direct, v);
        for (const auto& v : rep.delta2) direct = Rational::max(direct, v);
        EXPECT_EQ(direct, rep.delta_star);
    }
}

TEST(Invariants, MoreSideInformationNeverCostsMore) {
    Rng rng(2024);
    const Field f = FieldSpec::make(2, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + rng.below(4);
        const LcbcInstance inst = random_instance(rng.next(), f, d, 2, 1);
        const Rational before = solve_capacity(signal_spaces(inst)).delta_star;
        // hand one user an extra random known column
        std::vector<UserMatrices> aug;
        const std::size_t lucky = rng.below(3);
        for (std::size_t k = 0; k < 3; ++k) {
            MatrixFq vp = inst.user(k).side;
            if (k == lucky) {
                MatrixFq extra(f, d, 1);
                for (std::size_t i = 0; i < d; ++i) extra.set(i, 0, rng.below(f->order()));
                vp = hcat(vp, extra);
            }
            aug.push_back({std::move(vp), inst.user(k).demand});
        }
        const Rational after =
            solve_capacity(signal_spaces(normalize(LcbcInstance(f, d, std::move(aug))).normalized)).delta_star;
        EXPECT_LE(after, before);
    }
}

}  // namespace
}  // namespace lcbc
