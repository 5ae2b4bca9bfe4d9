#include <gtest/gtest.h>

#include <vector>

#include "lcbc/field.hpp"
#include "lcbc/random.hpp"

namespace lcbc {
namespace {

TEST(MakeField, PrimeFieldHasPlaceholderModulus) {
    const Field f = FieldSpec::make(2, 1);
    EXPECT_EQ(f->order(), 2u);
    EXPECT_EQ(f->modulus(), (std::vector<std::uint32_t>{0, 1}));
}

TEST(MakeField, Gf4UsesXSquaredPlusXPlusOne) {
    const Field f = FieldSpec::make(2, 2);
    EXPECT_EQ(f->order(), 4u);
    EXPECT_EQ(f->modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
}

// Independent oracle: enumerate monic quadratics over GF(3) in the same
// coefficient order and take the first with no roots (degree 2: irreducible
// iff rootless).
TEST(MakeField, Gf9ModulusMatchesExhaustiveScan) {
    std::vector<std::uint32_t> expected;
    for (std::uint32_t c0 = 0; c0 < 3 && expected.empty(); ++c0)
        for (std::uint32_t c1 = 0; c1 < 3 && expected.empty(); ++c1) {
            bool rootless = true;
            for (std::uint32_t x = 0; x < 3; ++x)
                if ((x * x + c1 * x + c0) % 3 == 0) rootless = false;
            if (rootless) expected = {c0, c1, 1};
        }
    const Field f = FieldSpec::make(3, 2);
    EXPECT_EQ(f->modulus(), expected);
}

TEST(MakeField, RejectsBadParameters) {
    EXPECT_THROW(FieldSpec::make(4, 1), std::invalid_argument);
    EXPECT_THROW(FieldSpec::make(1, 1), std::invalid_argument);
    EXPECT_THROW(FieldSpec::make(2, 0), std::invalid_argument);
}

TEST(MakeField, Deterministic) {
    const Field a = FieldSpec::make(5, 2);
    const Field b = FieldSpec::make(5, 2);
    EXPECT_EQ(a->modulus(), b->modulus());
    EXPECT_EQ(a.get(), b.get());  // canonicalized
}

TEST(Arith, Gf4GeneratorSquares) {
    const Field f = FieldSpec::make(2, 2);
    // x * x = x + 1: codes 2 * 2 -> 3
    EXPECT_EQ(f->mul(2, 2), 3u);
}

TEST(Arith, AdditiveInverseEverywhere) {
    for (auto [p, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 3}, {3, 2}, {5, 1}, {7, 1}}) {
        const Field f = FieldSpec::make(p, n);
        for (std::uint64_t a = 0; a < f->order(); ++a) EXPECT_EQ(f->add(a, f->neg(a)), 0u);
    }
}

TEST(Arith, Gf9MultiplicativeOrderDividesQMinusOne) {
    const Field f = FieldSpec::make(3, 2);
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t a = 1 + rng.below(f->order() - 1);
        // repeated-multiplication oracle for a^(q-1)
        std::uint64_t acc = 1;
        for (std::uint64_t i = 0; i + 1 < f->order(); ++i) acc = f->mul(acc, a);
        EXPECT_EQ(acc, 1u);
        EXPECT_EQ(f->pow(a, f->order() - 1), 1u);
    }
}

TEST(Arith, FieldAxiomsExhaustiveSmallFields) {
    for (auto [p, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 1}, {3, 1}, {2, 2}, {5, 1},
                        {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}, {2, 4}}) {
        const Field f = FieldSpec::make(p, n);
        const std::uint64_t q = f->order();
        ASSERT_LE(q, 16u);
        for (std::uint64_t a = 0; a < q; ++a) {
            EXPECT_EQ(f->pow(a, q), a);  // Frobenius fixed point
            if (a != 0) EXPECT_EQ(f->mul(a, f->inv(a)), 1u);
            for (std::uint64_t b = 0; b < q; ++b) {
                EXPECT_EQ(f->add(a, b), f->add(b, a));
                EXPECT_EQ(f->mul(a, b), f->mul(b, a));
                for (std::uint64_t c = 0; c < q; ++c) {
                    EXPECT_EQ(f->mul(a, f->mul(b, c)), f->mul(f->mul(a, b), c));
                    EXPECT_EQ(f->add(a, f->add(b, c)), f->add(f->add(a, b), c));
                    EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
                }
            }
        }
    }
}

TEST(Arith, FieldAxiomsRandomLargerField) {
    const Field f = FieldSpec::make(5, 3);  // q = 125, above the exhaustive tier
    Rng rng(99);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t a = rng.below(f->order());
        const std::uint64_t b = rng.below(f->order());
        const std::uint64_t c = rng.below(f->order());
        EXPECT_EQ(f->mul(a, f->mul(b, c)), f->mul(f->mul(a, b), c));
        EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
        EXPECT_EQ(f->add(a, b), f->add(b, a));
    }
}

TEST(Arith, ZeroHasNoInverse) {
    const Field f = FieldSpec::make(3, 1);
    EXPECT_THROW(f->inv(0), std::domain_error);
}

TEST(FieldElementOps, FieldMismatchRejected) {
    const FieldElement a(FieldSpec::make(2, 1), 1);
    const FieldElement b(FieldSpec::make(3, 1), 1);
    EXPECT_THROW(a + b, std::invalid_argument);
    EXPECT_EQ((a + a).code(), 0u);
}

TEST(Lift, PrimeSubfieldIsFixed) {
    const Embedding e(FieldSpec::make(2, 1), 2);
    EXPECT_EQ(e.lift(0), 0u);
    EXPECT_EQ(e.lift(1), 1u);
    EXPECT_EQ(e.ext()->order(), 4u);
}

TEST(Lift, HomomorphismExhaustive) {
    // all base fields with q <= 8, z <= 3 (within the order cap)
    for (auto [p, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}}) {
        for (std::uint32_t z = 1; z <= 3; ++z) {
            const Field base = FieldSpec::make(p, n);
            const Embedding e(base, z);
            EXPECT_EQ(e.lift(0), 0u);
            EXPECT_EQ(e.lift(1), 1u);
            std::vector<bool> seen(e.ext()->order(), false);
            for (std::uint64_t a = 0; a < base->order(); ++a) {
                EXPECT_FALSE(seen[e.lift(a)]) << "lift not injective";
                seen[e.lift(a)] = true;
                for (std::uint64_t b = 0; b < base->order(); ++b) {
                    EXPECT_EQ(e.lift(base->add(a, b)), e.ext()->add(e.lift(a), e.lift(b)));
                    EXPECT_EQ(e.lift(base->mul(a, b)), e.ext()->mul(e.lift(a), e.lift(b)));
                }
            }
        }
    }
}

TEST(Pack, DegreeOneIsIdentity) {
    const Embedding e(FieldSpec::make(3, 1), 1);
    for (std::uint64_t a = 0; a < 3; ++a) {
        const std::uint64_t block[1] = {a};
        EXPECT_EQ(e.pack(block), a);
        EXPECT_EQ(e.unpack(a), std::vector<std::uint64_t>{a});
    }
}

TEST(Pack, BinaryPairMapsToGf4Polynomial) {
    // (A1, A2) <-> A1 + A2 x; over GF(4) in code form that is A1 + 2 A2
    const Embedding e(FieldSpec::make(2, 1), 2);
    for (std::uint64_t a1 = 0; a1 < 2; ++a1)
        for (std::uint64_t a2 = 0; a2 < 2; ++a2) {
            const std::uint64_t block[2] = {a1, a2};
            EXPECT_EQ(e.pack(block), a1 + 2 * a2);
        }
}

TEST(Pack, RoundTripRandomVectors) {
    Rng rng(5);
    for (auto [p, n] : {std::pair<std::uint32_t, std::uint32_t>{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        const Field base = FieldSpec::make(p, n);
        for (std::uint32_t z = 2; z <= 3; ++z) {
            const Embedding e(base, z);
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<std::uint64_t> block(z);
                for (auto& v : block) v = rng.below(base->order());
                const std::uint64_t packed = e.pack(block);
                EXPECT_EQ(e.unpack(packed), block);
            }
        }
    }
}

TEST(Pack, WrongBlockLengthRejected) {
    const Embedding e(FieldSpec::make(2, 1), 2);
    const std::uint64_t block[3] = {0, 1, 0};
    EXPECT_THROW(e.pack(block), std::invalid_argument);
}

}  // namespace
}  // namespace lcbc
