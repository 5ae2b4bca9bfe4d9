// Decomposition of the three signal spaces into the ten bases B_123, B_ij,
// B_{i(j,k)}, B_kc. Built constructively with Steinitz complements, then the
// three one-sided bases are rewritten so that the exact matrix identity
// B_{1(2,3)} + B_{2(1,3)} = B_{3(1,2)} holds, which is what lets one user
// synthesize its broadcast block from the other two.
#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "lcbc/instance.hpp"

namespace lcbc {

struct DecompositionBases {
    MatrixFq b123;
    MatrixFq b12, b13, b23;      // pair bases modulo the triple intersection
    MatrixFq b1_23, b2_13, b3_12;  // one-sided bases modulo the pair spans
    MatrixFq b1c, b2c, b3c;       // per-user remainders

    std::size_t yellow_cols() const { return b1_23.cols(); }
};

inline DecompositionBases decompose(const SubspaceFamily& f) {
    DecompositionBases d{
        f.u123,
        steinitz_complement(f.u12, f.u123),
        steinitz_complement(f.u13, f.u123),
        steinitz_complement(f.u23, f.u123),
        MatrixFq(f.instance.field(), f.instance.d(), 0),
        MatrixFq(f.instance.field(), f.instance.d(), 0),
        MatrixFq(f.instance.field(), f.instance.d(), 0),
        MatrixFq(f.instance.field(), f.instance.d(), 0),
        MatrixFq(f.instance.field(), f.instance.d(), 0),
        MatrixFq(f.instance.field(), f.instance.d(), 0),
    };
    d.b1_23 = steinitz_complement(f.u1_23, hcat({&d.b123, &d.b12, &d.b13}));
    d.b2_13 = steinitz_complement(f.u2_13, hcat({&d.b123, &d.b12, &d.b23}));
    d.b3_12 = steinitz_complement(f.u3_12, hcat({&d.b123, &d.b13, &d.b23}));
    d.b1c = steinitz_complement(f.u1, hcat({&d.b123, &d.b12, &d.b13, &d.b1_23}));
    d.b2c = steinitz_complement(f.u2, hcat({&d.b123, &d.b12, &d.b23, &d.b2_13}));
    d.b3c = steinitz_complement(f.u3, hcat({&d.b123, &d.b13, &d.b23, &d.b3_12}));

    const std::size_t yellow = d.b1_23.cols();
    if (d.b2_13.cols() != yellow || d.b3_12.cols() != yellow)
        throw std::logic_error("decompose: one-sided bases have unequal column counts");
    if (yellow == 0) return d;  // nothing to repair

    // Uniquely represent B_{3(1,2)} in the basis of <[U1, U2]>. The blocks
    // hitting B_1c and B_2c must vanish and the B_{1(2,3)}, B_{2(1,3)} blocks
    // must have full column rank; failures here are implementation bugs.
    const MatrixFq basis_u1u2 = hcat({&d.b123, &d.b12, &d.b13, &d.b23, &d.b1_23, &d.b1c, &d.b2_13, &d.b2c});
    auto coords = solve_matrix(basis_u1u2, d.b3_12);
    if (!coords || rank(basis_u1u2) != basis_u1u2.cols())
        throw std::logic_error("decompose: B_{3(1,2)} not uniquely representable in the [U1,U2] basis");

    std::array<MatrixFq, 8> r = {MatrixFq(f.instance.field(), 0, 0), MatrixFq(f.instance.field(), 0, 0),
                                 MatrixFq(f.instance.field(), 0, 0), MatrixFq(f.instance.field(), 0, 0),
                                 MatrixFq(f.instance.field(), 0, 0), MatrixFq(f.instance.field(), 0, 0),
                                 MatrixFq(f.instance.field(), 0, 0), MatrixFq(f.instance.field(), 0, 0)};
    const std::array<const MatrixFq*, 8> blocks = {&d.b123, &d.b12, &d.b13, &d.b23,
                                                   &d.b1_23, &d.b1c, &d.b2_13, &d.b2c};
    std::size_t row = 0;
    for (std::size_t t = 0; t < 8; ++t) {
        MatrixFq rt(f.instance.field(), blocks[t]->cols(), yellow);
        for (std::size_t i = 0; i < rt.rows(); ++i)
            for (std::size_t j = 0; j < yellow; ++j) rt.set(i, j, coords->at(row + i, j));
        row += rt.rows();
        r[t] = std::move(rt);
    }
    const MatrixFq& r1 = r[0];
    const MatrixFq& r2 = r[1];
    const MatrixFq& r3 = r[2];
    const MatrixFq& r4 = r[3];
    const MatrixFq& r5 = r[4];  // coefficient of B_{1(2,3)}
    const MatrixFq& r6 = r[5];  // coefficient of B_1c
    const MatrixFq& r7 = r[6];  // coefficient of B_{2(1,3)}
    const MatrixFq& r8 = r[7];  // coefficient of B_2c

    const auto is_zero = [](const MatrixFq& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m.at(i, j) != 0) return false;
        return true;
    };
    if (!is_zero(r6) || !is_zero(r8))
        throw std::logic_error("decompose: remainder blocks R6/R8 are nonzero");
    if (rank(r5) != yellow || rank(r7) != yellow)
        throw std::logic_error("decompose: mixing blocks R5/R7 are column rank deficient");

    MatrixFq b3_new = d.b3_12.sub(d.b123.mul(r1)).sub(d.b13.mul(r3)).sub(d.b23.mul(r4));
    MatrixFq b2_new = d.b2_13.mul(r7).add(d.b12.mul(r2));
    MatrixFq b1_new = d.b1_23.mul(r5);
    d.b3_12 = std::move(b3_new);
    d.b2_13 = std::move(b2_new);
    d.b1_23 = std::move(b1_new);
    return d;
}

struct PropertyCheck {
    std::array<bool, 20> passed{};
    bool all_passed() const {
        for (bool b : passed)
            if (!b) return false;
        return true;
    }
    std::string failures() const {
        std::string s;
        for (std::size_t i = 0; i < 20; ++i)
            if (!passed[i]) s += (s.empty() ? "P" : ", P") + std::to_string(i + 1);
        return s;
    }
};

// Each of P1-P19 checks that the stated concatenation has full column rank
// and spans exactly the stated space; P20 is the exact matrix identity.
inline PropertyCheck verify_properties(const SubspaceFamily& f, const DecompositionBases& d) {
    PropertyCheck pc;
    const auto is_basis_of = [](const MatrixFq& cand, const MatrixFq& space) {
        return rank(cand) == cand.cols() && conditional_rank(cand, space) == 0 &&
               conditional_rank(space, cand) == 0;
    };
    const MatrixFq u12_13 = hcat(f.u12, f.u13);
    const MatrixFq u12_23 = hcat(f.u12, f.u23);
    const MatrixFq u13_23 = hcat(f.u13, f.u23);
    const MatrixFq u1u2 = hcat(f.u1, f.u2);
    const MatrixFq u1u3 = hcat(f.u1, f.u3);
    const MatrixFq u2u3 = hcat(f.u2, f.u3);
    const MatrixFq uall = hcat({&f.u1, &f.u2, &f.u3});

    pc.passed[0] = is_basis_of(d.b123, f.u123);
    pc.passed[1] = is_basis_of(hcat(d.b123, d.b12), f.u12);
    pc.passed[2] = is_basis_of(hcat(d.b123, d.b13), f.u13);
    pc.passed[3] = is_basis_of(hcat(d.b123, d.b23), f.u23);
    pc.passed[4] = is_basis_of(hcat({&d.b123, &d.b12, &d.b13}), u12_13);
    pc.passed[5] = is_basis_of(hcat({&d.b123, &d.b12, &d.b23}), u12_23);
    pc.passed[6] = is_basis_of(hcat({&d.b123, &d.b13, &d.b23}), u13_23);
    pc.passed[7] = is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b1_23}), f.u1_23);
    pc.passed[8] = is_basis_of(hcat({&d.b123, &d.b12, &d.b23, &d.b2_13}), f.u2_13);
    pc.passed[9] = is_basis_of(hcat({&d.b123, &d.b13, &d.b23, &d.b3_12}), f.u3_12);
    pc.passed[10] = is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b1_23, &d.b1c}), f.u1);
    pc.passed[11] = is_basis_of(hcat({&d.b123, &d.b12, &d.b23, &d.b2_13, &d.b2c}), f.u2);
    pc.passed[12] = is_basis_of(hcat({&d.b123, &d.b13, &d.b23, &d.b3_12, &d.b3c}), f.u3);
    pc.passed[13] = is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b23, &d.b1_23, &d.b2_13, &d.b1c, &d.b2c}), u1u2);
    pc.passed[14] = is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b23, &d.b1_23, &d.b3_12, &d.b1c, &d.b3c}), u1u3);
    pc.passed[15] = is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b23, &d.b2_13, &d.b3_12, &d.b2c, &d.b3c}), u2u3);
    pc.passed[16] =
        is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b23, &d.b1_23, &d.b2_13, &d.b1c, &d.b2c, &d.b3c}), uall);
    pc.passed[17] =
        is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b23, &d.b1_23, &d.b3_12, &d.b1c, &d.b2c, &d.b3c}), uall);
    pc.passed[18] =
        is_basis_of(hcat({&d.b123, &d.b12, &d.b13, &d.b23, &d.b2_13, &d.b3_12, &d.b1c, &d.b2c, &d.b3c}), uall);
    pc.passed[19] = (d.b1_23.add(d.b2_13) == d.b3_12);
    return pc;
}

}  // namespace lcbc
