// Optimal broadcast cost, computed two independent ways: the closed form over
// conditional ranks (max of twelve permutation bounds) and the linear program
// solved by constrained waterfilling. Both paths are exact rationals and are
// cross-checked on every call to solve_capacity().
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "lcbc/instance.hpp"
#include "lcbc/rational.hpp"

namespace lcbc {

// The compact rank data the equivalence proof works with. All entries are
// conditional ranks of family subspaces given one user's side information,
// with minima taken over the owning users where applicable.
struct RankVector {
    int r123;
    int r12, r13, r23;
    int r12_13, r12_23, r13_23;
    int r1_23, r2_13, r3_12;
    int m1, m2, m3;

    int m_total() const { return m1 + m2 + m3; }

    bool invariants_hold() const {
        if (r123 < 0 || r12 < 0 || r13 < 0 || r23 < 0) return false;
        if (r123 > std::min({r12, r13, r23})) return false;
        if (r12_13 < std::max(r12, r13)) return false;
        if (r12_23 < std::max(r12, r23)) return false;
        if (r13_23 < std::max(r13, r23)) return false;
        return true;
    }
};

inline RankVector rank_vector(const SubspaceFamily& f) {
    RankVector rv{};
    rv.r123 = std::min({f.r123_given[0], f.r123_given[1], f.r123_given[2]});
    rv.r12 = std::min(f.r12_given_v1, f.r12_given_v2);
    rv.r13 = std::min(f.r13_given_v1, f.r13_given_v3);
    rv.r23 = std::min(f.r23_given_v2, f.r23_given_v3);
    rv.r12_13 = f.rpair_given[0];
    rv.r12_23 = f.rpair_given[1];
    rv.r13_23 = f.rpair_given[2];
    rv.r1_23 = f.ryellow_given[0];
    rv.r2_13 = f.ryellow_given[1];
    rv.r3_12 = f.ryellow_given[2];
    rv.m1 = f.m[0];
    rv.m2 = f.m[1];
    rv.m3 = f.m[2];
    return rv;
}

// Broadcast dimensions drawn from each subspace class.
struct LambdaAllocation {
    Rational l123, l12, l13, l23, l;
};

// permutation order used throughout reports
inline const std::array<std::array<int, 3>, 6>& permutations3() {
    static const std::array<std::array<int, 3>, 6> kPerms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    return kPerms;
}

struct CapacityReport {
    std::array<Rational, 6> delta1;  // indexed like permutations3()
    std::array<Rational, 6> delta2;
    std::array<Rational, 3> delta_single;  // delta_1, delta_2, delta_3
    std::array<Rational, 3> delta_pair;    // delta_12, delta_13, delta_23
    Rational delta_star;
    std::optional<Rational> c_star;  // 1/delta_star, absent when delta_star = 0
    Rational f_star;
    LambdaAllocation lambda;
    RankVector ranks;
    bool paths_agree = false;
};

// Closed-form side only: the twelve permutation bounds, their aggregates, and
// delta_star. Requires a normalized instance's family so that rk(V_k|V'_k)
// equals the stored column count m_k.
inline CapacityReport closed_form(const SubspaceFamily& f) {
    CapacityReport rep{};
    rep.ranks = rank_vector(f);
    const int msum = rep.ranks.m_total();

    const auto& perms = permutations3();
    for (std::size_t pi = 0; pi < 6; ++pi) {
        const int i = perms[pi][0], j = perms[pi][1], k = perms[pi][2];
        rep.delta1[pi] = Rational(msum - f.rpair_given_user(i, j) - f.ryellow_given[k]);
        const int half = rep.ranks.r123 + f.rpair_given[i] + f.ryellow_given[j] + f.ryellow_given[k];
        rep.delta2[pi] = Rational(msum) - Rational(half, 2);
    }

    // delta_t = msum - r_{ij} - r_{t(i,j)} with {i,j} the other two users
    rep.delta_single[0] = Rational(msum - rep.ranks.r23 - rep.ranks.r1_23);
    rep.delta_single[1] = Rational(msum - rep.ranks.r13 - rep.ranks.r2_13);
    rep.delta_single[2] = Rational(msum - rep.ranks.r12 - rep.ranks.r3_12);
    // delta_{jk} collapses the two permutations that fix user i first
    rep.delta_pair[0] = Rational(msum) - Rational(rep.ranks.r123 + rep.ranks.r13_23 + rep.ranks.r1_23 + rep.ranks.r2_13, 2);  // delta_12
    rep.delta_pair[1] = Rational(msum) - Rational(rep.ranks.r123 + rep.ranks.r12_23 + rep.ranks.r1_23 + rep.ranks.r3_12, 2);  // delta_13
    rep.delta_pair[2] = Rational(msum) - Rational(rep.ranks.r123 + rep.ranks.r12_13 + rep.ranks.r2_13 + rep.ranks.r3_12, 2);  // delta_23

    // the aggregates must reproduce the direct permutation maxima
    const Rational d1_23 = Rational::max(rep.delta1[3], rep.delta1[5]);  // perms 231, 321
    const Rational d1_13 = Rational::max(rep.delta1[1], rep.delta1[4]);  // perms 132, 312
    const Rational d1_12 = Rational::max(rep.delta1[0], rep.delta1[2]);  // perms 123, 213
    if (d1_23 != rep.delta_single[0] || d1_13 != rep.delta_single[1] || d1_12 != rep.delta_single[2])
        throw std::logic_error("closed_form: single-user aggregates disagree with permutation maxima");
    if (rep.delta2[0] != rep.delta_pair[2] || rep.delta2[1] != rep.delta_pair[2] ||
        rep.delta2[2] != rep.delta_pair[1] || rep.delta2[3] != rep.delta_pair[1] ||
        rep.delta2[4] != rep.delta_pair[0] || rep.delta2[5] != rep.delta_pair[0])
        throw std::logic_error("closed_form: pair aggregates disagree with permutation values");

    Rational best = rep.delta_single[0];
    for (const auto& v : rep.delta_single) best = Rational::max(best, v);
    for (const auto& v : rep.delta_pair) best = Rational::max(best, v);
    rep.delta_star = best;
    if (!(best == Rational(0))) rep.c_star = Rational(1) / best;
    return rep;
}

// Constrained waterfilling: three vessels with base levels b_i, individual
// fill caps w_i^max and pairwise caps w_{i,j}^max. The optimal common level
// is the smallest of the six candidate levels; the canonical allocation fills
// each vessel exactly up to it.
inline std::pair<LambdaAllocation, Rational> waterfill(const RankVector& rv) {
    if (!rv.invariants_hold()) throw std::invalid_argument("waterfill: rank vector violates its invariants");

    const Rational l123 = Rational(rv.r123);
    const std::array<Rational, 3> b = {Rational(rv.r1_23), Rational(rv.r2_13), Rational(rv.r3_12)};
    const std::array<Rational, 3> wmax = {Rational(rv.r23 - rv.r123), Rational(rv.r13 - rv.r123),
                                          Rational(rv.r12 - rv.r123)};
    // pair caps, indexed (0,1), (0,2), (1,2)
    const std::array<Rational, 3> wpairmax = {Rational(rv.r13_23 - rv.r123), Rational(rv.r12_23 - rv.r123),
                                              Rational(rv.r12_13 - rv.r123)};

    Rational h = b[0] + wmax[0];
    h = Rational::min(h, b[1] + wmax[1]);
    h = Rational::min(h, b[2] + wmax[2]);
    h = Rational::min(h, (b[0] + b[1] + wpairmax[0]) / 2);
    h = Rational::min(h, (b[0] + b[2] + wpairmax[1]) / 2);
    h = Rational::min(h, (b[1] + b[2] + wpairmax[2]) / 2);

    std::array<Rational, 3> w;
    for (int i = 0; i < 3; ++i) w[i] = Rational::max(Rational(0), h - b[i]);

    // exact feasibility of the chosen fill levels
    for (int i = 0; i < 3; ++i)
        if (w[i] > wmax[i]) throw std::logic_error("waterfill: individual capacity violated");
    if (w[0] + w[1] > wpairmax[0] || w[0] + w[2] > wpairmax[1] || w[1] + w[2] > wpairmax[2])
        throw std::logic_error("waterfill: pairwise capacity violated");

    LambdaAllocation alloc;
    alloc.l123 = l123;
    alloc.l23 = w[0];
    alloc.l13 = w[1];
    alloc.l12 = w[2];
    Rational slack = Rational::min(Rational(rv.r1_23) - alloc.l12 - alloc.l13,
                                   Rational::min(Rational(rv.r2_13) - alloc.l12 - alloc.l23,
                                                 Rational(rv.r3_12) - alloc.l13 - alloc.l23));
    alloc.l = slack - l123;
    if (alloc.l < Rational(0)) throw std::logic_error("waterfill: negative yellow allocation");

    const Rational f_star = Rational(rv.m_total()) - Rational(2) * alloc.l123 - alloc.l12 - alloc.l13 -
                            alloc.l23 - alloc.l;

    // the allocation must satisfy the full constraint list of the program
    const auto check = [](bool ok, const char* what) {
        if (!ok) throw std::logic_error(std::string("waterfill: constraint violated: ") + what);
    };
    check(alloc.l123 <= Rational(rv.r123), "l123 <= r123");
    check(alloc.l12 + alloc.l123 <= Rational(rv.r12), "l12 + l123 <= r12");
    check(alloc.l13 + alloc.l123 <= Rational(rv.r13), "l13 + l123 <= r13");
    check(alloc.l23 + alloc.l123 <= Rational(rv.r23), "l23 + l123 <= r23");
    check(alloc.l12 + alloc.l13 + alloc.l123 <= Rational(rv.r12_13), "l12 + l13 + l123 <= r12_13");
    check(alloc.l12 + alloc.l23 + alloc.l123 <= Rational(rv.r12_23), "l12 + l23 + l123 <= r12_23");
    check(alloc.l13 + alloc.l23 + alloc.l123 <= Rational(rv.r13_23), "l13 + l23 + l123 <= r13_23");
    check(alloc.l + alloc.l12 + alloc.l13 + alloc.l123 <= Rational(rv.r1_23), "yellow cap user 1");
    check(alloc.l + alloc.l12 + alloc.l23 + alloc.l123 <= Rational(rv.r2_13), "yellow cap user 2");
    check(alloc.l + alloc.l13 + alloc.l23 + alloc.l123 <= Rational(rv.r3_12), "yellow cap user 3");

    return {alloc, f_star};
}

// Both paths, cross-checked. A disagreement is an internal error and is
// surfaced loudly rather than patched over.
inline CapacityReport solve_capacity(const SubspaceFamily& f) {
    CapacityReport rep = closed_form(f);
    auto [alloc, f_star] = waterfill(rep.ranks);
    rep.lambda = alloc;
    rep.f_star = f_star;
    rep.paths_agree = (f_star == rep.delta_star);
    if (!rep.paths_agree)
        throw std::logic_error("solve_capacity: closed form (" + rep.delta_star.str() +
                               ") and waterfilling (" + f_star.str() + ") disagree");
    return rep;
}

// The 2-user formula: max over (i,j) of
//   rk([V_i, V'_i]) - rk(V'_i) + rk([V_1, V_2, V'_1, V'_2]) - rk([V_i, V'_i, V'_j]).
inline Rational two_user_cost(const MatrixFq& v1, const MatrixFq& v1p, const MatrixFq& v2, const MatrixFq& v2p) {
    const std::size_t all = rank(hcat({&v1, &v2, &v1p, &v2p}));
    const auto side = [&](const MatrixFq& vi, const MatrixFq& vip, const MatrixFq& vjp) {
        return static_cast<std::int64_t>(rank(hcat(vi, vip)) - rank(vip) + all - rank(hcat({&vi, &vip, &vjp})));
    };
    return Rational(std::max(side(v1, v1p, v2p), side(v2, v2p, v1p)));
}

}  // namespace lcbc
