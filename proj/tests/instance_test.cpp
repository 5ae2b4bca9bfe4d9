#include <gtest/gtest.h>

#include "lcbc/capacity.hpp"
#include "lcbc/fixtures.hpp"
#include "lcbc/instance.hpp"
#include "lcbc/serialize.hpp"
#include "test_util.hpp"

namespace lcbc {
namespace {

TEST(Parse, FixtureRoundTripIsByteIdentical) {
    for (int i = 1; i <= 5; ++i) {
        const LcbcInstance inst = example_instance(i);
        const std::string text = canonical_instance_text(inst);
        const LcbcInstance back = parse_instance(text);
        EXPECT_EQ(inst, back);
        EXPECT_EQ(canonical_instance_text(back), text);
    }
}

TEST(Parse, FirstFixtureShape) {
    const LcbcInstance inst = parse_instance(canonical_instance_text(example_instance(1)));
    EXPECT_EQ(inst.d(), 3u);
    EXPECT_EQ(inst.field()->order(), 3u);
    EXPECT_EQ(inst.user(0).side.cols(), 1u);
}

TEST(Parse, EmptySideInformationParses) {
    const std::string text = R"({"p": 2, "n": 1, "d": 2, "users": [
        {"V_prime": {"rows": 2, "cols": 0, "data": []}, "V": {"rows": 2, "cols": 1, "data": [[1, 0]]}},
        {"V_prime": {"rows": 2, "cols": 0, "data": []}, "V": {"rows": 2, "cols": 1, "data": [[0, 1]]}},
        {"V_prime": {"rows": 2, "cols": 0, "data": []}, "V": {"rows": 2, "cols": 1, "data": [[1, 1]]}}]})";
    const LcbcInstance inst = parse_instance(text);
    EXPECT_EQ(inst.user(0).side.cols(), 0u);
}

TEST(Parse, DiagnosticsNameTheOffender) {
    const std::string bad_entry = R"({"p": 3, "n": 1, "d": 2, "users": [
        {"V_prime": {"rows": 2, "cols": 1, "data": [[5, 0]]}, "V": {"rows": 2, "cols": 1, "data": [[1, 0]]}},
        {"V_prime": {"rows": 2, "cols": 0, "data": []}, "V": {"rows": 2, "cols": 1, "data": [[0, 1]]}},
        {"V_prime": {"rows": 2, "cols": 0, "data": []}, "V": {"rows": 2, "cols": 1, "data": [[1, 1]]}}]})";
    try {
        parse_instance(bad_entry);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("users[0].V_prime"), std::string::npos);
    }
    EXPECT_THROW(parse_instance("{not json"), std::invalid_argument);
    EXPECT_THROW(parse_instance(R"({"p": 2, "n": 1, "d": 2, "users": []})"), std::invalid_argument);
}

TEST(Normalize, AlreadyNormalizedFixtureUnchanged) {
    const LcbcInstance inst = example_instance(2);
    const NormalizedInstance n = normalize(inst);
    EXPECT_EQ(n.normalized, inst);
    for (std::size_t k = 0; k < 3; ++k)
        EXPECT_EQ(n.reconstruction[k].side_columns_kept.size(), inst.user(k).side.cols());
}

TEST(Normalize, DemandAlreadyKnownDropsToNothing) {
    const Field f = FieldSpec::make(2, 1);
    std::vector<UserMatrices> users;
    const MatrixFq e1 = MatrixFq::from_columns(f, 2, {{1, 0}});
    users.push_back({e1, e1});  // wants what it has
    users.push_back({MatrixFq(f, 2, 0), MatrixFq::from_columns(f, 2, {{0, 1}})});
    users.push_back({MatrixFq(f, 2, 0), MatrixFq::from_columns(f, 2, {{1, 1}})});
    const NormalizedInstance n = normalize(LcbcInstance(f, 2, std::move(users)));
    EXPECT_EQ(n.normalized.user(0).demand.cols(), 0u);
    EXPECT_EQ(n.normalized.user(0).side.cols(), 1u);
}

TEST(Normalize, IdempotentOnRandomInstances) {
    const Field f = FieldSpec::make(3, 1);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const LcbcInstance inst = random_instance(seed, f, 4, 3, 2);
        const NormalizedInstance again = normalize(inst);
        EXPECT_EQ(again.normalized, inst);
    }
}

TEST(Normalize, CapacityInvariantUnderRedundancy) {
    // duplicated demand columns must not change the optimum
    Rng rng(17);
    const Field f = FieldSpec::make(2, 1);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 3 + rng.below(2);
        std::vector<UserMatrices> raw;
        for (int k = 0; k < 3; ++k) {
            MatrixFq vp = testing::random_matrix(f, d, 1 + rng.below(2), rng);
            MatrixFq v = testing::random_matrix(f, d, 1 + rng.below(2), rng);
            MatrixFq v2 = hcat(v, v.take_columns(std::vector<std::size_t>{0}));
            raw.push_back({std::move(vp), std::move(v2)});
        }
        const LcbcInstance redundant(f, d, raw);
        const CapacityReport direct = solve_capacity(signal_spaces(normalize(redundant).normalized));
        // strip the duplicate by hand and compare
        std::vector<UserMatrices> slim;
        for (int k = 0; k < 3; ++k) {
            std::vector<std::size_t> keep;
            for (std::size_t j = 0; j + 1 < redundant.user(k).demand.cols(); ++j) keep.push_back(j);
            slim.push_back({redundant.user(k).side, redundant.user(k).demand.take_columns(keep)});
        }
        const CapacityReport slim_rep =
            solve_capacity(signal_spaces(normalize(LcbcInstance(f, d, std::move(slim))).normalized));
        EXPECT_EQ(direct.delta_star, slim_rep.delta_star);
    }
}

TEST(SignalSpaces, FirstFixtureTripleIntersection) {
    const SubspaceFamily fam = signal_spaces(normalize(example_instance(1)).normalized);
    ASSERT_EQ(fam.u123.cols(), 1u);
    const MatrixFq ones = MatrixFq::from_columns(fam.instance.field(), 3, {{1, 1, 1}});
    EXPECT_EQ(conditional_rank(fam.u123, ones), 0u);
    EXPECT_EQ(conditional_rank(ones, fam.u123), 0u);
}

TEST(SignalSpaces, SingleSharedSymbol) {
    // d = 1, everyone wants the only symbol, nobody knows anything
    const Field f = FieldSpec::make(2, 1);
    std::vector<UserMatrices> users;
    for (int k = 0; k < 3; ++k)
        users.push_back({MatrixFq(f, 1, 0), MatrixFq::from_columns(f, 1, {{1}})});
    const SubspaceFamily fam = signal_spaces(LcbcInstance(f, 1, std::move(users)));
    EXPECT_EQ(fam.u123.cols(), 1u);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(fam.r123_given[k], 1);
}

TEST(SignalSpaces, RanksMatchFromScratchRecomputation) {
    const Field f = FieldSpec::make(3, 1);
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        const LcbcInstance inst = random_instance(seed, f, 4, 2, 2);
        const SubspaceFamily fam = signal_spaces(inst);
        // independent recomputation through intersect/rank only
        const MatrixFq u1 = hcat(inst.user(0).side, inst.user(0).demand);
        const MatrixFq u2 = hcat(inst.user(1).side, inst.user(1).demand);
        const MatrixFq u3 = hcat(inst.user(2).side, inst.user(2).demand);
        const MatrixFq i12 = intersect_column_spaces(u1, u2);
        const MatrixFq i123 = intersect_column_spaces(i12, u3);
        EXPECT_EQ(rank(fam.u123), rank(i123));
        for (std::size_t k = 0; k < 3; ++k)
            EXPECT_EQ(fam.r123_given[k], static_cast<int>(conditional_rank(i123, inst.user(k).side)));
        EXPECT_EQ(fam.rpair_given[0],
                  static_cast<int>(conditional_rank(hcat(i12, intersect_column_spaces(u1, u3)), inst.user(0).side)));
        // nesting: U123 within U12 within U1; U12 within U1(2,3)
        EXPECT_EQ(conditional_rank(fam.u123, fam.u12), 0u);
        EXPECT_EQ(conditional_rank(fam.u12, fam.u1), 0u);
        EXPECT_EQ(conditional_rank(fam.u12, fam.u1_23), 0u);
        EXPECT_EQ(conditional_rank(fam.u1_23, fam.u1), 0u);
    }
}

TEST(SignalSpaces, RejectsUnnormalizedInstance) {
    const Field f = FieldSpec::make(2, 1);
    const MatrixFq e1 = MatrixFq::from_columns(f, 2, {{1, 0}});
    std::vector<UserMatrices> users;
    users.push_back({e1, e1});
    users.push_back({MatrixFq(f, 2, 0), e1});
    users.push_back({MatrixFq(f, 2, 0), e1});
    EXPECT_THROW(signal_spaces(LcbcInstance(f, 2, std::move(users))), std::invalid_argument);
}

TEST(EntropicProfile, SingletonsAreColumnCounts) {
    const auto prof = entropic_profile(example_instance(1));
    EXPECT_EQ(prof.at("W1"), 1u);
    EXPECT_EQ(prof.at("W1'"), 1u);
    EXPECT_EQ(prof.size(), 63u);
}

TEST(EntropicProfile, FirstTwoFixturesAgreeExceptAllDemands) {
    // The first two fixtures are entropically near-twins: every subset rank
    // coincides except the all-demands one, where the three demanded vectors
    // of fixture 2 satisfy V1 + 2 V2 + V3 = 0 over GF(3) while fixture 1's
    // are independent (their sum is 2(A+B+C), nonzero in odd
    // characteristic). Verified against an independent elimination.
    const auto p1 = entropic_profile(example_instance(1));
    const auto p2 = entropic_profile(example_instance(2));
    ASSERT_EQ(p1.size(), p2.size());
    for (const auto& [key, v1] : p1) {
        if (key == "W1,W2,W3") {
            EXPECT_EQ(v1, 3u);
            EXPECT_EQ(p2.at(key), 2u);
        } else {
            EXPECT_EQ(v1, p2.at(key)) << "subset " << key;
        }
    }
    const auto p3 = entropic_profile(example_instance(3));
    EXPECT_NE(p1, p3);
}

TEST(RandomInstance, ReproducibleAndWithinBounds) {
    const Field f = FieldSpec::make(5, 1);
    const LcbcInstance a = random_instance(777, f, 5, 3, 2);
    const LcbcInstance b = random_instance(777, f, 5, 3, 2);
    EXPECT_EQ(a, b);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_LE(a.user(k).demand.cols(), 3u);
        EXPECT_LE(a.user(k).side.cols(), 2u);
    }
}

TEST(RandomInstance, FamilyInvariantSweep) {
    const Field f2 = FieldSpec::make(2, 1);
    const Field f3 = FieldSpec::make(3, 1);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Field& f = (seed % 2 == 0) ? f2 : f3;
        const LcbcInstance inst = random_instance(seed, f, 2 + seed % 4, 3, 2);
        const SubspaceFamily fam = signal_spaces(inst);
        for (const MatrixFq* b : {&fam.u12, &fam.u13, &fam.u23, &fam.u123, &fam.u1_23, &fam.u2_13, &fam.u3_12})
            EXPECT_EQ(rank(*b), b->cols());
        EXPECT_EQ(conditional_rank(fam.u123, fam.u12), 0u);
        EXPECT_EQ(conditional_rank(fam.u123, fam.u13), 0u);
        EXPECT_EQ(conditional_rank(fam.u123, fam.u23), 0u);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_EQ(conditional_rank(fam.pair_of(k, (k + 1) % 3), fam.yellow_of(k)), 0u);
            EXPECT_EQ(conditional_rank(fam.yellow_of(k), fam.u_of(k)), 0u);
        }
        EXPECT_TRUE(rank_vector(fam).invariants_hold());
    }
}

}  // namespace
}  // namespace lcbc
