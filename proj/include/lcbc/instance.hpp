// Problem model for the 3-user broadcast setting: instances, redundancy
// elimination, the signal-space family U_1, U_2, U_3 with all intersections,
// and the entropic profile over subsets of demands and side informations.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lcbc/matrix.hpp"
#include "lcbc/random.hpp"

namespace lcbc {

struct UserMatrices {
    MatrixFq side;    // V'_k, d x m'_k
    MatrixFq demand;  // V_k,  d x m_k
};

class LcbcInstance {
public:
    LcbcInstance(Field field, std::size_t d, std::vector<UserMatrices> users)
        : field_(std::move(field)), d_(d), users_(std::move(users)) {
        if (users_.size() != 3) throw std::invalid_argument("LcbcInstance: exactly 3 users required");
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& u = users_[k];
            if (!u.side.field()->same(*field_) || !u.demand.field()->same(*field_))
                throw std::invalid_argument("LcbcInstance: user " + std::to_string(k + 1) + " matrices over wrong field");
            if (u.side.rows() != d_ || u.demand.rows() != d_)
                throw std::invalid_argument("LcbcInstance: user " + std::to_string(k + 1) +
                                            " matrices must have d = " + std::to_string(d_) + " rows");
        }
    }

    const Field& field() const { return field_; }
    std::size_t d() const { return d_; }
    const UserMatrices& user(std::size_t k) const { return users_.at(k); }

    bool operator==(const LcbcInstance& o) const {
        if (!field_->same(*o.field_) || d_ != o.d_) return false;
        for (std::size_t k = 0; k < 3; ++k)
            if (!(users_[k].side == o.users_[k].side) || !(users_[k].demand == o.users_[k].demand)) return false;
        return true;
    }

private:
    Field field_;
    std::size_t d_;
    std::vector<UserMatrices> users_;
};

// How to recover the originally requested demand from the normalized one:
// original V column j equals [V'_norm, V_norm] * demand_coords[:, j], and the
// normalized side information is the listed subset of original V' columns.
struct DemandReconstruction {
    std::vector<std::size_t> side_columns_kept;
    MatrixFq demand_coords;  // (m'+m) x m_original
};

struct NormalizedInstance {
    LcbcInstance original;
    LcbcInstance normalized;
    std::array<DemandReconstruction, 3> reconstruction;
};

// Redundancy elimination: per user, V' is thinned to an independent column
// subset and V to columns completing it, so rk([V'_k, V_k]) = m'_k + m_k.
// Idempotent; the reconstruction data lets decoders restore full demands.
inline NormalizedInstance normalize(const LcbcInstance& inst) {
    std::vector<UserMatrices> users;
    std::array<DemandReconstruction, 3> recon = {
        DemandReconstruction{{}, MatrixFq(inst.field(), 0, 0)},
        DemandReconstruction{{}, MatrixFq(inst.field(), 0, 0)},
        DemandReconstruction{{}, MatrixFq(inst.field(), 0, 0)},
    };
    for (std::size_t k = 0; k < 3; ++k) {
        const MatrixFq& vp = inst.user(k).side;
        const MatrixFq& v = inst.user(k).demand;
        RankTracker t(inst.field(), inst.d());
        std::vector<std::size_t> keep_side;
        for (std::size_t j = 0; j < vp.cols(); ++j)
            if (t.try_insert(vp.column(j))) keep_side.push_back(j);
        std::vector<std::size_t> keep_demand;
        for (std::size_t j = 0; j < v.cols(); ++j)
            if (t.try_insert(v.column(j))) keep_demand.push_back(j);
        MatrixFq vpn = vp.take_columns(keep_side);
        MatrixFq vn = v.take_columns(keep_demand);
        auto coords = solve_matrix(hcat(vpn, vn), v);
        if (!coords) throw std::logic_error("normalize: original demand not spanned by normalized basis");
        recon[k] = DemandReconstruction{std::move(keep_side), std::move(*coords)};
        users.push_back(UserMatrices{std::move(vpn), std::move(vn)});
    }
    return NormalizedInstance{inst, LcbcInstance(inst.field(), inst.d(), std::move(users)), std::move(recon)};
}

// The ten signal-space bases and every conditional rank the capacity
// theorems consume. All bases have full column rank by construction.
struct SubspaceFamily {
    LcbcInstance instance;  // normalized
    MatrixFq u1, u2, u3;
    MatrixFq u12, u13, u23, u123;
    MatrixFq u1_23, u2_13, u3_12;  // U_i intersect [U_j, U_k]

    std::array<int, 3> m, m_prime;
    std::array<int, 3> r123_given;                      // rk(U123 | V'_k)
    int r12_given_v1, r12_given_v2;                     // rk(U12 | V'_1), rk(U12 | V'_2)
    int r13_given_v1, r13_given_v3;
    int r23_given_v2, r23_given_v3;
    std::array<int, 3> rpair_given;                     // rk([U12,U13]|V'_1), rk([U12,U23]|V'_2), rk([U13,U23]|V'_3)
    std::array<int, 3> ryellow_given;                   // rk(U_{k(i,j)} | V'_k)

    const MatrixFq& u_of(std::size_t k) const { return k == 0 ? u1 : (k == 1 ? u2 : u3); }
    const MatrixFq& yellow_of(std::size_t k) const { return k == 0 ? u1_23 : (k == 1 ? u2_13 : u3_12); }
    // unordered pair {i, j}, 0-based
    const MatrixFq& pair_of(std::size_t i, std::size_t j) const {
        const std::size_t lo = std::min(i, j), hi = std::max(i, j);
        if (lo == 0 && hi == 1) return u12;
        if (lo == 0 && hi == 2) return u13;
        return u23;
    }
    // rk(U_{ij} | V'_j), 0-based users
    int rpair_given_user(std::size_t i, std::size_t j) const {
        const std::size_t lo = std::min(i, j), hi = std::max(i, j);
        if (lo == 0 && hi == 1) return j == 0 ? r12_given_v1 : r12_given_v2;
        if (lo == 0 && hi == 2) return j == 0 ? r13_given_v1 : r13_given_v3;
        return j == 1 ? r23_given_v2 : r23_given_v3;
    }
};

inline SubspaceFamily signal_spaces(const LcbcInstance& inst) {
    for (std::size_t k = 0; k < 3; ++k) {
        const MatrixFq u = hcat(inst.user(k).side, inst.user(k).demand);
        if (rank(u) != u.cols())
            throw std::invalid_argument("signal_spaces: instance is not normalized (U_" + std::to_string(k + 1) +
                                        " is column rank deficient)");
    }
    MatrixFq u1 = hcat(inst.user(0).side, inst.user(0).demand);
    MatrixFq u2 = hcat(inst.user(1).side, inst.user(1).demand);
    MatrixFq u3 = hcat(inst.user(2).side, inst.user(2).demand);
    MatrixFq u12 = intersect_column_spaces(u1, u2);
    MatrixFq u13 = intersect_column_spaces(u1, u3);
    MatrixFq u23 = intersect_column_spaces(u2, u3);
    MatrixFq u123 = intersect_column_spaces(u12, u3);
    MatrixFq u1_23 = intersect_column_spaces(u1, hcat(u2, u3));
    MatrixFq u2_13 = intersect_column_spaces(u2, hcat(u1, u3));
    MatrixFq u3_12 = intersect_column_spaces(u3, hcat(u1, u2));

    SubspaceFamily fam{inst,   std::move(u1),   std::move(u2),   std::move(u3),   std::move(u12),
                       std::move(u13), std::move(u23), std::move(u123), std::move(u1_23), std::move(u2_13),
                       std::move(u3_12), {},    {},    {},    0, 0, 0, 0, 0, 0, {}, {}};
    const auto cr = [](const MatrixFq& m1, const MatrixFq& m2) { return static_cast<int>(conditional_rank(m1, m2)); };
    for (std::size_t k = 0; k < 3; ++k) {
        fam.m[k] = static_cast<int>(inst.user(k).demand.cols());
        fam.m_prime[k] = static_cast<int>(inst.user(k).side.cols());
        fam.r123_given[k] = cr(fam.u123, inst.user(k).side);
    }
    fam.r12_given_v1 = cr(fam.u12, inst.user(0).side);
    fam.r12_given_v2 = cr(fam.u12, inst.user(1).side);
    fam.r13_given_v1 = cr(fam.u13, inst.user(0).side);
    fam.r13_given_v3 = cr(fam.u13, inst.user(2).side);
    fam.r23_given_v2 = cr(fam.u23, inst.user(1).side);
    fam.r23_given_v3 = cr(fam.u23, inst.user(2).side);
    fam.rpair_given[0] = cr(hcat(fam.u12, fam.u13), inst.user(0).side);
    fam.rpair_given[1] = cr(hcat(fam.u12, fam.u23), inst.user(1).side);
    fam.rpair_given[2] = cr(hcat(fam.u13, fam.u23), inst.user(2).side);
    fam.ryellow_given[0] = cr(fam.u1_23, inst.user(0).side);
    fam.ryellow_given[1] = cr(fam.u2_13, inst.user(1).side);
    fam.ryellow_given[2] = cr(fam.u3_12, inst.user(2).side);
    return fam;
}

// Ranks of all 63 nonempty subsets of {W1, W1', W2, W2', W3, W3'}; for i.i.d.
// uniform data the rank equals the joint entropy per computation. Keys are
// comma-joined labels in the fixed order above.
inline std::map<std::string, std::size_t> entropic_profile(const LcbcInstance& inst) {
    static const char* kLabels[6] = {"W1", "W1'", "W2", "W2'", "W3", "W3'"};
    const MatrixFq* parts[6] = {&inst.user(0).demand, &inst.user(0).side, &inst.user(1).demand,
                                &inst.user(1).side,   &inst.user(2).demand, &inst.user(2).side};
    std::map<std::string, std::size_t> profile;
    for (unsigned mask = 1; mask < 64; ++mask) {
        std::vector<const MatrixFq*> sel;
        std::string key;
        for (unsigned b = 0; b < 6; ++b) {
            if (mask & (1u << b)) {
                sel.push_back(parts[b]);
                if (!key.empty()) key += ",";
                key += kLabels[b];
            }
        }
        profile[key] = rank(hcat(std::span<const MatrixFq* const>(sel)));
    }
    return profile;
}

// Seeded random instance; the result is already normalized.
inline LcbcInstance random_instance(std::uint64_t seed, const Field& field, std::size_t d,
                                    std::size_t max_m, std::size_t max_m_prime) {
    Rng rng(seed);
    std::vector<UserMatrices> users;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t mp = rng.below(max_m_prime + 1);
        const std::size_t m = max_m == 0 ? 0 : 1 + rng.below(max_m);  // at least one demanded column
        MatrixFq vp(field, d, mp), v(field, d, m);
        for (std::size_t j = 0; j < mp; ++j)
            for (std::size_t i = 0; i < d; ++i) vp.set(i, j, rng.below(field->order()));
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < d; ++i) v.set(i, j, rng.below(field->order()));
        users.push_back(UserMatrices{std::move(vp), std::move(v)});
    }
    return normalize(LcbcInstance(field, d, std::move(users))).normalized;
}

}  // namespace lcbc
