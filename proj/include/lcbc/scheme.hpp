// Construction of optimal broadcast schemes: matrix extension to clear the
// allocation denominators, field-size extension to make the random mixing
// argument work, mixing matrices validated through the three user
// determinants, then the generator and the per-user decoders.
#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcbc/capacity.hpp"
#include "lcbc/decomposition.hpp"
#include "lcbc/instance.hpp"
#include "lcbc/random.hpp"

namespace lcbc {

struct ExtensionPlan {
    std::uint32_t l_prime;  // matrix-extension factor (least common denominator of the lambdas)
    std::uint32_t z;        // field-extension degree, smallest with q^z > 3 L'd
};

inline ExtensionPlan plan_extensions(const LambdaAllocation& alloc, const LcbcInstance& inst) {
    std::int64_t l = 1;
    for (const Rational* r : {&alloc.l123, &alloc.l12, &alloc.l13, &alloc.l23, &alloc.l})
        l = std::lcm(l, r->den());
    const std::uint64_t q = inst.field()->order();
    const std::uint64_t bound = 3 * static_cast<std::uint64_t>(l) * inst.d();
    std::uint32_t z = 1;
    std::uint64_t qz = q;
    while (qz <= bound) {
        qz *= q;
        ++z;
    }
    return ExtensionPlan{static_cast<std::uint32_t>(l), z};
}

struct BroadcastScheme {
    NormalizedInstance base;
    std::uint32_t l_prime;
    std::uint32_t z;
    Embedding emb;      // base field -> GF(q^z)
    std::size_t d_ext;  // L'd

    // integer allocation after scaling by L'
    int il123, il12, il13, il23, il;
    std::array<int, 3> t;

    MatrixFq generator;  // d_ext x (il123+il12+il13+il23+2 il+t1+t2+t3) over the extension

    // extended-problem pieces kept for verification and emission
    MatrixFq u123_e, u12_e, u13_e, u23_e;
    std::array<MatrixFq, 3> yellow_e;    // decomposition bases B_{1(2,3)}, B_{2(1,3)}, B_{3(1,2)}
    std::array<MatrixFq, 3> side_e;      // extended V'_k
    std::array<MatrixFq, 3> demand_e;    // extended V_k
    std::array<MatrixFq, 3> residual;    // U_k^{(t_k)} blocks (transmitted)
    std::array<MatrixFq, 3> completion;  // Z_k identity columns (determinant test only)

    MatrixFq n123, n12, n13, n23;     // random mixing, shared across users
    MatrixFq m12, m13, m23, m_mix;

    std::array<MatrixFq, 3> decode_coeffs;  // coordinates of extended demand in the user basis
    std::array<MatrixFq, 3> consistency;    // kernel of [V'_k, G], for corrupted-input detection

    Rational f_star;
    std::uint64_t seed;
    std::uint32_t attempts;             // total mixing samples drawn (1 = first try succeeded)
    std::vector<std::uint32_t> z_used;  // z values attempted, in order

    std::size_t batch() const { return static_cast<std::size_t>(l_prime) * z; }  // L = L'z

    // column offsets of the generator blocks
    std::size_t off_123() const { return 0; }
    std::size_t off_12() const { return off_123() + il123; }
    std::size_t off_13() const { return off_12() + il12; }
    std::size_t off_23() const { return off_13() + il13; }
    std::size_t off_yellow1() const { return off_23() + il23; }
    std::size_t off_yellow2() const { return off_yellow1() + il; }
    std::size_t off_t(std::size_t k) const {
        std::size_t o = off_yellow2() + il;
        for (std::size_t i = 0; i < k; ++i) o += t[i];
        return o;
    }
};

namespace detail {

inline MatrixFq lift_matrix(const Embedding& emb, const MatrixFq& m) {
    MatrixFq r(emb.ext(), m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.set(i, j, emb.lift(m.at(i, j)));
    return r;
}

inline MatrixFq random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng) {
    MatrixFq m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rng.below(f->order()));
    return m;
}

inline int scaled_lambda(const Rational& r, std::uint32_t l_prime, const char* name) {
    const Rational s = r * Rational(l_prime);
    if (!s.is_integer()) throw std::invalid_argument(std::string("build_scheme: L' does not clear ") + name);
    return static_cast<int>(s.num());
}

}  // namespace detail

// Builds a scheme for the given allocation. Deterministic in (instance,
// allocation, seed). A z override replaces the planner's choice as the
// starting point; the retry policy still escalates z if the mixing samples
// keep vanishing, which at the planner's z has probability below 3L'd / q^z
// per sample.
inline BroadcastScheme build_scheme(const NormalizedInstance& ni, const LambdaAllocation& alloc,
                                    std::uint64_t seed, std::optional<std::uint32_t> force_z = std::nullopt,
                                    std::uint32_t retry_cap = 40) {
    const LcbcInstance& inst = ni.normalized;
    const ExtensionPlan plan = plan_extensions(alloc, inst);
    const std::uint32_t l_prime = plan.l_prime;
    const std::uint32_t z_start = force_z.value_or(plan.z);
    constexpr std::uint32_t kMaxEscalations = 8;

    const int il123 = detail::scaled_lambda(alloc.l123, l_prime, "lambda_123");
    const int il12 = detail::scaled_lambda(alloc.l12, l_prime, "lambda_12");
    const int il13 = detail::scaled_lambda(alloc.l13, l_prime, "lambda_13");
    const int il23 = detail::scaled_lambda(alloc.l23, l_prime, "lambda_23");
    const int il = detail::scaled_lambda(alloc.l, l_prime, "lambda");

    const Rational f_star = Rational(static_cast<std::int64_t>(inst.user(0).demand.cols() +
                                                               inst.user(1).demand.cols() +
                                                               inst.user(2).demand.cols())) -
                            Rational(2) * alloc.l123 - alloc.l12 - alloc.l13 - alloc.l23 - alloc.l;

    std::uint32_t attempts = 0;
    std::vector<std::uint32_t> z_used;
    for (std::uint32_t z = z_start; z <= z_start + kMaxEscalations; ++z) {
        z_used.push_back(z);
        Embedding emb(inst.field(), z);
        const Field& ext = emb.ext();
        const std::size_t d_ext = l_prime * inst.d();

        std::vector<UserMatrices> users_ext;
        for (std::size_t k = 0; k < 3; ++k)
            users_ext.push_back(UserMatrices{identity_kron(l_prime, detail::lift_matrix(emb, inst.user(k).side)),
                                             identity_kron(l_prime, detail::lift_matrix(emb, inst.user(k).demand))});
        const LcbcInstance inst_ext(ext, d_ext, std::move(users_ext));
        const SubspaceFamily fam = signal_spaces(inst_ext);
        const DecompositionBases bases = decompose(fam);

        std::array<int, 3> t{};
        t[0] = fam.m[0] - (il123 + il12 + il13 + il);
        t[1] = fam.m[1] - (il123 + il12 + il23 + il);
        t[2] = fam.m[2] - (il123 + il13 + il23 + il);
        for (int tk : t)
            if (tk < 0) throw std::invalid_argument("build_scheme: allocation exceeds a user's demand dimension");

        // deterministic per-user submatrix chains; these also certify that
        // the determinant polynomials are not identically zero
        std::array<MatrixFq, 3> residual = {MatrixFq(ext, d_ext, 0), MatrixFq(ext, d_ext, 0), MatrixFq(ext, d_ext, 0)};
        std::array<MatrixFq, 3> completion = residual;
        const MatrixFq id_ext = MatrixFq::identity(ext, d_ext);
        for (std::size_t k = 0; k < 3; ++k) {
            const MatrixFq& pair_a = (k == 2) ? fam.u13 : fam.u12;
            const MatrixFq& pair_b = (k == 0) ? fam.u13 : fam.u23;
            const int na = (k == 2) ? il13 : il12;
            const int nb = (k == 0) ? il13 : il23;
            MatrixFq a = inst_ext.user(k).side;
            a = hcat(a, select_submatrix(a, fam.u123, static_cast<std::size_t>(il123)));
            auto [sa, sb] = select_joint_submatrices(a, pair_a, pair_b, static_cast<std::size_t>(na),
                                                     static_cast<std::size_t>(nb));
            a = hcat({&a, &sa, &sb});
            a = hcat(a, select_submatrix(a, fam.yellow_of(k), static_cast<std::size_t>(il)));
            residual[k] = select_submatrix(a, fam.u_of(k), static_cast<std::size_t>(t[k]));
            a = hcat(a, residual[k]);
            completion[k] = select_submatrix(a, id_ext, d_ext - a.cols());
        }

        Rng rng(split_seed(seed, z));
        for (std::uint32_t attempt = 0; attempt < retry_cap; ++attempt) {
            ++attempts;
            MatrixFq n123 = detail::random_matrix(ext, fam.u123.cols(), il123, rng);
            MatrixFq n12 = detail::random_matrix(ext, fam.u12.cols(), il12, rng);
            MatrixFq n13 = detail::random_matrix(ext, fam.u13.cols(), il13, rng);
            MatrixFq n23 = detail::random_matrix(ext, fam.u23.cols(), il23, rng);
            MatrixFq m12 = detail::random_matrix(ext, fam.u12.cols(), il, rng);
            MatrixFq m13 = detail::random_matrix(ext, fam.u13.cols(), il, rng);
            MatrixFq m23 = detail::random_matrix(ext, fam.u23.cols(), il, rng);
            MatrixFq m_mix = detail::random_matrix(ext, bases.b1_23.cols(), il, rng);

            const MatrixFq blk123 = fam.u123.mul(n123);
            const MatrixFq blk12 = fam.u12.mul(n12);
            const MatrixFq blk13 = fam.u13.mul(n13);
            const MatrixFq blk23 = fam.u23.mul(n23);
            const MatrixFq yellow1 = fam.u12.mul(m12).add(fam.u13.mul(m13)).add(bases.b1_23.mul(m_mix));
            const MatrixFq yellow2 = fam.u12.mul(m12).negate().add(fam.u23.mul(m23)).add(bases.b2_13.mul(m_mix));
            const MatrixFq yellow3 = fam.u13.mul(m13).add(fam.u23.mul(m23)).add(bases.b3_12.mul(m_mix));

            const MatrixFq a1 = hcat({&inst_ext.user(0).side, &blk123, &blk12, &blk13, &yellow1, &residual[0],
                                      &completion[0]});
            const MatrixFq a2 = hcat({&inst_ext.user(1).side, &blk123, &blk12, &blk23, &yellow2, &residual[1],
                                      &completion[1]});
            const MatrixFq a3 = hcat({&inst_ext.user(2).side, &blk123, &blk13, &blk23, &yellow3, &residual[2],
                                      &completion[2]});
            if (rank(a1) != d_ext || rank(a2) != d_ext || rank(a3) != d_ext) continue;

            MatrixFq generator =
                hcat({&blk123, &blk12, &blk13, &blk23, &yellow1, &yellow2, &residual[0], &residual[1], &residual[2]});

            std::array<MatrixFq, 3> decode_coeffs = {MatrixFq(ext, 0, 0), MatrixFq(ext, 0, 0), MatrixFq(ext, 0, 0)};
            std::array<MatrixFq, 3> consistency = {MatrixFq(ext, 0, 0), MatrixFq(ext, 0, 0), MatrixFq(ext, 0, 0)};
            for (std::size_t k = 0; k < 3; ++k) {
                const MatrixFq* yellow_k = k == 0 ? &yellow1 : (k == 1 ? &yellow2 : &yellow3);
                const MatrixFq* pa = (k == 2) ? &blk13 : &blk12;
                const MatrixFq* pb = (k == 0) ? &blk13 : &blk23;
                const MatrixFq user_basis =
                    hcat({&inst_ext.user(k).side, &blk123, pa, pb, yellow_k, &residual[k]});
                auto coords = solve_matrix(user_basis, inst_ext.user(k).demand);
                if (!coords) throw std::logic_error("build_scheme: demand not in decoded span despite P_k != 0");
                decode_coeffs[k] = std::move(*coords);
                consistency[k] = kernel_basis(hcat(inst_ext.user(k).side, generator));
            }

            return BroadcastScheme{ni,
                                   l_prime,
                                   z,
                                   std::move(emb),
                                   d_ext,
                                   il123,
                                   il12,
                                   il13,
                                   il23,
                                   il,
                                   t,
                                   std::move(generator),
                                   fam.u123,
                                   fam.u12,
                                   fam.u13,
                                   fam.u23,
                                   {bases.b1_23, bases.b2_13, bases.b3_12},
                                   {inst_ext.user(0).side, inst_ext.user(1).side, inst_ext.user(2).side},
                                   {inst_ext.user(0).demand, inst_ext.user(1).demand, inst_ext.user(2).demand},
                                   std::move(residual),
                                   std::move(completion),
                                   std::move(n123),
                                   std::move(n12),
                                   std::move(n13),
                                   std::move(n23),
                                   std::move(m12),
                                   std::move(m13),
                                   std::move(m23),
                                   std::move(m_mix),
                                   std::move(decode_coeffs),
                                   std::move(consistency),
                                   f_star,
                                   seed,
                                   attempts,
                                   z_used};
        }
    }
    std::string zs;
    for (std::uint32_t zz : z_used) zs += (zs.empty() ? "" : ", ") + std::to_string(zz);
    throw std::runtime_error("build_scheme: retry budget exhausted (attempted z = " + zs + ")");
}

// S = x^T G for the packed data vector. X holds L = L'z base-field
// computations of the d-dimensional data, one per column.
inline std::vector<std::uint64_t> encode(const BroadcastScheme& s, const MatrixFq& x) {
    const LcbcInstance& inst = s.base.normalized;
    if (!x.field()->same(*inst.field())) throw std::invalid_argument("encode: data over wrong field");
    if (x.rows() != inst.d() || x.cols() != s.batch())
        throw std::invalid_argument("encode: data must be d x L'z = " + std::to_string(inst.d()) + " x " +
                                    std::to_string(s.batch()));
    // pack rows into extension symbols, then stack the L' packed columns
    std::vector<std::uint64_t> xt(s.d_ext, 0);
    std::vector<std::uint64_t> block(s.z);
    for (std::size_t i = 0; i < inst.d(); ++i)
        for (std::size_t b = 0; b < s.l_prime; ++b) {
            for (std::size_t tt = 0; tt < s.z; ++tt) block[tt] = x.at(i, b * s.z + tt);
            xt[b * inst.d() + i] = s.emb.pack(block);
        }
    const Field& ext = s.emb.ext();
    std::vector<std::uint64_t> out(s.generator.cols(), 0);
    for (std::size_t r = 0; r < s.d_ext; ++r) {
        const std::uint64_t v = xt[r];
        if (v == 0) continue;
        for (std::size_t c = 0; c < s.generator.cols(); ++c)
            out[c] = ext->add(out[c], ext->mul(v, s.generator.at(r, c)));
    }
    return out;
}

// Recovers user k's originally requested demand from the broadcast and its
// side information (given for the original, un-normalized instance).
inline MatrixFq decode(const BroadcastScheme& s, std::size_t k, std::span<const std::uint64_t> broadcast,
                       const MatrixFq& w_prime) {
    if (k >= 3) throw std::invalid_argument("decode: user index out of range");
    const LcbcInstance& orig = s.base.original;
    const LcbcInstance& inst = s.base.normalized;
    const std::size_t L = s.batch();
    if (broadcast.size() != s.generator.cols()) throw std::invalid_argument("decode: broadcast length mismatch");
    if (w_prime.rows() != L || w_prime.cols() != orig.user(k).side.cols())
        throw std::invalid_argument("decode: side information must be L x m'_k of the original instance");

    const Field& ext = s.emb.ext();
    const std::size_t mp = inst.user(k).side.cols();
    const std::size_t m = inst.user(k).demand.cols();

    // normalized side information, packed into the extension
    const MatrixFq wpn = w_prime.take_columns(s.base.reconstruction[k].side_columns_kept);
    std::vector<std::uint64_t> wp_ext(s.l_prime * mp, 0);
    std::vector<std::uint64_t> block(s.z);
    for (std::size_t j = 0; j < mp; ++j)
        for (std::size_t b = 0; b < s.l_prime; ++b) {
            for (std::size_t tt = 0; tt < s.z; ++tt) block[tt] = wpn.at(b * s.z + tt, j);
            wp_ext[b * mp + j] = s.emb.pack(block);
        }

    // corrupted-input detection: [w', S] must lie in the row space of
    // [V'_k, G], i.e. annihilate its kernel
    const MatrixFq& ker = s.consistency[k];
    for (std::size_t j = 0; j < ker.cols(); ++j) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < wp_ext.size(); ++i) acc = ext->add(acc, ext->mul(wp_ext[i], ker.at(i, j)));
        for (std::size_t i = 0; i < broadcast.size(); ++i)
            acc = ext->add(acc, ext->mul(broadcast[i], ker.at(wp_ext.size() + i, j)));
        if (acc != 0) throw std::runtime_error("decode: broadcast and side information are inconsistent");
    }

    // assemble the user's available coordinates in its basis order
    std::vector<std::uint64_t> avail;
    avail.reserve(mp * s.l_prime + m * s.l_prime);
    for (std::uint64_t v : wp_ext) avail.push_back(v);
    const auto append = [&](std::size_t off, std::size_t len) {
        for (std::size_t c = 0; c < len; ++c) avail.push_back(broadcast[off + c]);
    };
    append(s.off_123(), s.il123);
    if (k == 0) {
        append(s.off_12(), s.il12);
        append(s.off_13(), s.il13);
        append(s.off_yellow1(), s.il);
    } else if (k == 1) {
        append(s.off_12(), s.il12);
        append(s.off_23(), s.il23);
        append(s.off_yellow2(), s.il);
    } else {
        append(s.off_13(), s.il13);
        append(s.off_23(), s.il23);
        // user 3 synthesizes its own block by summing the two transmitted ones
        for (std::size_t c = 0; c < static_cast<std::size_t>(s.il); ++c)
            avail.push_back(ext->add(broadcast[s.off_yellow1() + c], broadcast[s.off_yellow2() + c]));
    }
    append(s.off_t(k), static_cast<std::size_t>(s.t[k]));

    // extended demand values, then unpack and restore the original columns
    const MatrixFq& coeffs = s.decode_coeffs[k];
    std::vector<std::uint64_t> w_ext(s.l_prime * m, 0);
    for (std::size_t j = 0; j < w_ext.size(); ++j) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < avail.size(); ++i) acc = ext->add(acc, ext->mul(avail[i], coeffs.at(i, j)));
        w_ext[j] = acc;
    }
    MatrixFq w_norm(inst.field(), L, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t b = 0; b < s.l_prime; ++b) {
            const auto vals = s.emb.unpack(w_ext[b * m + j]);
            for (std::size_t tt = 0; tt < s.z; ++tt) w_norm.set(b * s.z + tt, j, vals[tt]);
        }
    return hcat(wpn, w_norm).mul(s.base.reconstruction[k].demand_coords);
}

struct SchemeCheck {
    bool determinants_ok = false;
    bool cost_ok = false;
    bool decode_ok = false;
    std::size_t trials_run = 0;
    std::size_t decode_failures = 0;
    bool exhaustive = false;
    bool all_passed() const { return determinants_ok && cost_ok && decode_ok; }
};

// (a) re-evaluates the three determinant tests, (b) checks the broadcast cost
// against the allocation objective exactly, (c) end-to-end encode/decode,
// exhaustive over all data realizations when q^{dL} is small enough.
inline SchemeCheck verify_scheme(const BroadcastScheme& s, std::size_t trials, std::uint64_t seed,
                                 std::size_t exhaustive_cap = 4096) {
    SchemeCheck out;
    const LcbcInstance& orig = s.base.original;
    const Field& ext = s.emb.ext();

    {
        const MatrixFq blk123 = s.u123_e.mul(s.n123);
        const MatrixFq blk12 = s.u12_e.mul(s.n12);
        const MatrixFq blk13 = s.u13_e.mul(s.n13);
        const MatrixFq blk23 = s.u23_e.mul(s.n23);
        const MatrixFq y1 = s.u12_e.mul(s.m12).add(s.u13_e.mul(s.m13)).add(s.yellow_e[0].mul(s.m_mix));
        const MatrixFq y2 = s.u12_e.mul(s.m12).negate().add(s.u23_e.mul(s.m23)).add(s.yellow_e[1].mul(s.m_mix));
        const MatrixFq y3 = s.u13_e.mul(s.m13).add(s.u23_e.mul(s.m23)).add(s.yellow_e[2].mul(s.m_mix));
        const MatrixFq a1 = hcat({&s.side_e[0], &blk123, &blk12, &blk13, &y1, &s.residual[0], &s.completion[0]});
        const MatrixFq a2 = hcat({&s.side_e[1], &blk123, &blk12, &blk23, &y2, &s.residual[1], &s.completion[1]});
        const MatrixFq a3 = hcat({&s.side_e[2], &blk123, &blk13, &blk23, &y3, &s.residual[2], &s.completion[2]});
        out.determinants_ok = rank(a1) == s.d_ext && rank(a2) == s.d_ext && rank(a3) == s.d_ext;
        (void)ext;
    }

    out.cost_ok = Rational(static_cast<std::int64_t>(s.generator.cols()), s.l_prime) == s.f_star;

    // q^{dL} realizations, capped
    const std::uint64_t q = orig.field()->order();
    const std::size_t L = s.batch();
    std::uint64_t space = 1;
    bool exhaustive = true;
    for (std::size_t i = 0; i < orig.d() * L && exhaustive; ++i) {
        space *= q;
        if (space > exhaustive_cap) exhaustive = false;
    }
    out.exhaustive = exhaustive;

    const auto run_one = [&](const MatrixFq& x) {
        const auto bc = encode(s, x);
        const MatrixFq xt = x.transpose();
        for (std::size_t k = 0; k < 3; ++k) {
            const MatrixFq wp = xt.mul(orig.user(k).side);
            const MatrixFq expect = xt.mul(orig.user(k).demand);
            const MatrixFq got = decode(s, k, bc, wp);
            if (!(got == expect)) return false;
        }
        return true;
    };

    if (exhaustive) {
        MatrixFq x(orig.field(), orig.d(), L);
        const std::size_t cells = orig.d() * L;
        for (std::uint64_t idx = 0; idx < space; ++idx) {
            std::uint64_t v = idx;
            for (std::size_t c = 0; c < cells; ++c) {
                x.set(c / L, c % L, v % q);
                v /= q;
            }
            ++out.trials_run;
            if (!run_one(x)) ++out.decode_failures;
        }
    } else {
        Rng rng(seed);
        for (std::size_t tcount = 0; tcount < trials; ++tcount) {
            MatrixFq x(orig.field(), orig.d(), L);
            for (std::size_t i = 0; i < orig.d(); ++i)
                for (std::size_t j = 0; j < L; ++j) x.set(i, j, rng.below(q));
            ++out.trials_run;
            if (!run_one(x)) ++out.decode_failures;
        }
    }
    out.decode_ok = out.decode_failures == 0;
    return out;
}

}  // namespace lcbc
