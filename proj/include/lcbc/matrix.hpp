// Exact dense linear algebra over GF(q): ranks, reduced echelon forms, column
// space intersections, Steinitz complements, and the joint submatrix selection
// procedure behind the broadcast scheme construction.
//
// Zero-column matrices are first-class and represent empty bases (a user with
// no side information has a d x 0 matrix). All operations are deterministic:
// repeated invocation yields bit-identical output.
#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lcbc/field.hpp"

namespace lcbc {

class MatrixFq {
public:
    MatrixFq(Field f, std::size_t rows, std::size_t cols)
        : f_(std::move(f)), rows_(rows), cols_(cols), e_(rows * cols, 0) {
        if (!f_) throw std::invalid_argument("MatrixFq: null field");
    }

    static MatrixFq identity(const Field& f, std::size_t d) {
        MatrixFq m(f, d, d);
        for (std::size_t i = 0; i < d; ++i) m.set(i, i, 1);
        return m;
    }

    static MatrixFq from_columns(const Field& f, std::size_t rows,
                                 const std::vector<std::vector<std::uint64_t>>& cols) {
        MatrixFq m(f, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw std::invalid_argument("MatrixFq::from_columns: column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m.set(i, j, cols[j][i]);
        }
        return m;
    }

    const Field& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return cols_ == 0; }

    std::uint64_t at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::uint64_t v) {
        if (!f_->valid_code(v)) throw std::invalid_argument("MatrixFq::set: entry out of field range");
        e_[i * cols_ + j] = v;
    }

    std::vector<std::uint64_t> column(std::size_t j) const {
        std::vector<std::uint64_t> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    MatrixFq take_columns(std::span<const std::size_t> idx) const {
        MatrixFq m(f_, rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            for (std::size_t i = 0; i < rows_; ++i) m.set(i, j, at(i, idx[j]));
        return m;
    }

    MatrixFq transpose() const {
        MatrixFq m(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m.set(j, i, at(i, j));
        return m;
    }

    MatrixFq mul(const MatrixFq& o) const {
        require_same_field(o);
        if (cols_ != o.rows_) throw std::invalid_argument("MatrixFq::mul: inner dimension mismatch");
        MatrixFq r(f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const std::uint64_t a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    const std::uint64_t b = o.at(k, j);
                    if (b == 0) continue;
                    r.e_[i * r.cols_ + j] = f_->add(r.e_[i * r.cols_ + j], f_->mul(a, b));
                }
            }
        return r;
    }

    MatrixFq add(const MatrixFq& o) const { return combine(o, false); }
    MatrixFq sub(const MatrixFq& o) const { return combine(o, true); }

    MatrixFq negate() const {
        MatrixFq r(f_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_->neg(e_[i]);
        return r;
    }

    bool operator==(const MatrixFq& o) const {
        return f_->same(*o.f_) && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

    void require_same_field(const MatrixFq& o) const {
        if (!f_->same(*o.f_)) throw std::invalid_argument("MatrixFq: matrices over different fields");
    }

private:
    MatrixFq combine(const MatrixFq& o, bool subtract) const {
        require_same_field(o);
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("MatrixFq: shape mismatch");
        MatrixFq r(f_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i)
            r.e_[i] = subtract ? f_->sub(e_[i], o.e_[i]) : f_->add(e_[i], o.e_[i]);
        return r;
    }

    Field f_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> e_;
};

inline MatrixFq hcat(std::span<const MatrixFq* const> parts) {
    if (parts.empty()) throw std::invalid_argument("hcat: no parts");
    const Field& f = parts[0]->field();
    const std::size_t rows = parts[0]->rows();
    std::size_t cols = 0;
    for (const MatrixFq* m : parts) {
        parts[0]->require_same_field(*m);
        if (m->rows() != rows) throw std::invalid_argument("hcat: row count mismatch");
        cols += m->cols();
    }
    MatrixFq r(f, rows, cols);
    std::size_t off = 0;
    for (const MatrixFq* m : parts) {
        for (std::size_t j = 0; j < m->cols(); ++j)
            for (std::size_t i = 0; i < rows; ++i) r.set(i, off + j, m->at(i, j));
        off += m->cols();
    }
    return r;
}

inline MatrixFq hcat(std::initializer_list<const MatrixFq*> parts) {
    std::vector<const MatrixFq*> v(parts);
    return hcat(std::span<const MatrixFq* const>(v));
}

inline MatrixFq hcat(const MatrixFq& a, const MatrixFq& b) { return hcat({&a, &b}); }

struct Rref {
    MatrixFq reduced;
    std::size_t rank;
    std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form. Pivoting is deterministic: first nonzero entry in
// column order, minimal row swaps.
inline Rref rref(const MatrixFq& m) {
    MatrixFq r = m;
    const Field& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
        std::size_t sel = lead;
        while (sel < r.rows() && r.at(sel, col) == 0) ++sel;
        if (sel == r.rows()) continue;
        if (sel != lead)
            for (std::size_t j = 0; j < r.cols(); ++j) {
                const std::uint64_t t = r.at(lead, j);
                r.set(lead, j, r.at(sel, j));
                r.set(sel, j, t);
            }
        const std::uint64_t s = f->inv(r.at(lead, col));
        if (s != 1)
            for (std::size_t j = 0; j < r.cols(); ++j) r.set(lead, j, f->mul(r.at(lead, j), s));
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == lead) continue;
            const std::uint64_t v = r.at(i, col);
            if (v == 0) continue;
            for (std::size_t j = 0; j < r.cols(); ++j)
                r.set(i, j, f->sub(r.at(i, j), f->mul(v, r.at(lead, j))));
        }
        pivots.push_back(col);
        ++lead;
    }
    return Rref{std::move(r), pivots.size(), std::move(pivots)};
}

// Incremental independence tracking: a row-echelon accumulation of columns.
// Drives all greedy selections; insertion order is the determinism contract.
class RankTracker {
public:
    RankTracker(Field f, std::size_t dim) : f_(std::move(f)), dim_(dim) {}

    // Reduce col against the inserted set; if a nonzero remainder survives,
    // keep it and report independence.
    bool try_insert(std::vector<std::uint64_t> col) {
        reduce(col);
        std::size_t p = pivot_of(col);
        if (p == dim_) return false;
        const std::uint64_t s = f_->inv(col[p]);
        if (s != 1)
            for (auto& v : col) v = f_->mul(v, s);
        rows_.push_back(std::move(col));
        pivots_.push_back(p);
        return true;
    }

    bool contains(std::vector<std::uint64_t> col) const {
        reduce(col);
        return pivot_of(col) == dim_;
    }

    std::size_t rank() const { return rows_.size(); }

private:
    void reduce(std::vector<std::uint64_t>& col) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const std::uint64_t v = col[pivots_[k]];
            if (v == 0) continue;
            for (std::size_t i = 0; i < dim_; ++i) col[i] = f_->sub(col[i], f_->mul(v, rows_[k][i]));
        }
    }
    std::size_t pivot_of(const std::vector<std::uint64_t>& col) const {
        for (std::size_t i = 0; i < dim_; ++i)
            if (col[i] != 0) return i;
        return dim_;
    }

    Field f_;
    std::size_t dim_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const MatrixFq& m) {
    RankTracker t(m.field(), m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) t.try_insert(m.column(j));
    return t.rank();
}

// rk(M1 | M2) = rk([M1, M2]) - rk(M2)
inline std::size_t conditional_rank(const MatrixFq& m1, const MatrixFq& m2) {
    m1.require_same_field(m2);
    if (m1.rows() != m2.rows()) throw std::invalid_argument("conditional_rank: row count mismatch");
    RankTracker t(m1.field(), m1.rows());
    for (std::size_t j = 0; j < m2.cols(); ++j) t.try_insert(m2.column(j));
    const std::size_t r2 = t.rank();
    for (std::size_t j = 0; j < m1.cols(); ++j) t.try_insert(m1.column(j));
    return t.rank() - r2;
}

// Pivot columns of M: a basis of the column space made of literal columns.
inline MatrixFq column_basis(const MatrixFq& m) {
    RankTracker t(m.field(), m.rows());
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (t.try_insert(m.column(j))) keep.push_back(j);
    return m.take_columns(keep);
}

// Basis of the null space {x : Mx = 0}, as columns, one per free column of
// the reduced form.
inline MatrixFq kernel_basis(const MatrixFq& m) {
    const Rref r = rref(m);
    const Field& f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : r.pivot_cols) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    MatrixFq k(f, m.cols(), free_cols.size());
    for (std::size_t idx = 0; idx < free_cols.size(); ++idx) {
        const std::size_t fc = free_cols[idx];
        k.set(fc, idx, 1);
        for (std::size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
            k.set(r.pivot_cols[pi], idx, f->neg(r.reduced.at(pi, fc)));
    }
    return k;
}

// Basis of <A> intersect <B>, via the kernel of [A, -B]: each kernel basis
// vector (u; v) contributes A u. Inputs are reduced to column bases first so
// the emitted columns are independent.
inline MatrixFq intersect_column_spaces(const MatrixFq& a_in, const MatrixFq& b_in) {
    a_in.require_same_field(b_in);
    if (a_in.rows() != b_in.rows()) throw std::invalid_argument("intersect_column_spaces: row count mismatch");
    const MatrixFq a = column_basis(a_in);
    const MatrixFq b = column_basis(b_in);
    const MatrixFq k = kernel_basis(hcat(a, b.negate()));
    MatrixFq u(a.field(), a.cols(), k.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < k.cols(); ++j) u.set(i, j, k.at(i, j));
    return a.mul(u);
}

// Steinitz complement C = A \ B: columns of A (lowest indices first) that
// extend the basis B of a subspace of <A> to a basis of <A>.
inline MatrixFq steinitz_complement(const MatrixFq& a, const MatrixFq& b) {
    a.require_same_field(b);
    if (a.rows() != b.rows()) throw std::invalid_argument("steinitz_complement: row count mismatch");
    RankTracker t(a.field(), a.rows());
    for (std::size_t j = 0; j < b.cols(); ++j)
        if (!t.try_insert(b.column(j))) throw std::invalid_argument("steinitz_complement: B is rank deficient");
    const std::size_t rb = t.rank();
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (t.try_insert(a.column(j))) keep.push_back(j);
    // containment <B> within <A> means nothing of B survives outside <A>
    if (conditional_rank(b, a) != 0) throw std::invalid_argument("steinitz_complement: <B> is not contained in <A>");
    (void)rb;
    return a.take_columns(keep);
}

// Joint submatrix selection: given full-column-rank A, B1, B2 and targets
// n1 <= rk(B1|A), n2 <= rk(B2|A), n1 + n2 <= rk([B1,B2]|A), returns n1 columns
// of B1 and n2 columns of B2 such that [A, B1', B2'] has full column rank.
//
// Maximal selections of each B_i against A are thinned by the column-dropping
// loop: while the stack is rank deficient, a kernel vector is computed and a
// column in its support is removed; once full rank, excess columns are
// removed directly. The dropped column is always the highest-index droppable
// one, which fixes the output.
inline std::pair<MatrixFq, MatrixFq> select_joint_submatrices(const MatrixFq& a, const MatrixFq& b1,
                                                              const MatrixFq& b2, std::size_t n1,
                                                              std::size_t n2) {
    a.require_same_field(b1);
    a.require_same_field(b2);
    if (b1.rows() != a.rows() || b2.rows() != a.rows())
        throw std::invalid_argument("select_joint_submatrices: row count mismatch");
    if (rank(a) != a.cols() || rank(b1) != b1.cols() || rank(b2) != b2.cols())
        throw std::invalid_argument("select_joint_submatrices: inputs must have full column rank");
    if (n1 > conditional_rank(b1, a) || n2 > conditional_rank(b2, a) ||
        n1 + n2 > conditional_rank(hcat(b1, b2), a))
        throw std::invalid_argument("select_joint_submatrices: targets exceed conditional ranks");

    auto maximal = [&](const MatrixFq& b) {
        RankTracker t(a.field(), a.rows());
        for (std::size_t j = 0; j < a.cols(); ++j) t.try_insert(a.column(j));
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (t.try_insert(b.column(j))) keep.push_back(j);
        return keep;
    };
    std::vector<std::size_t> s1 = maximal(b1);
    std::vector<std::size_t> s2 = maximal(b2);

    while (s1.size() > n1 || s2.size() > n2) {
        const MatrixFq sel1 = b1.take_columns(s1);
        const MatrixFq sel2 = b2.take_columns(s2);
        const MatrixFq y = hcat({&a, &sel1, &sel2});
        const MatrixFq ker = kernel_basis(y);
        // droppable: positions in a part that still exceeds its target,
        // restricted to the first kernel vector's support while the stack is
        // rank deficient
        std::ptrdiff_t drop = -1;
        const std::size_t off1 = a.cols();
        const std::size_t off2 = off1 + s1.size();
        auto consider = [&](std::size_t ypos) {
            if (ypos >= off1 && ypos < off2 && s1.size() > n1) drop = std::max(drop, static_cast<std::ptrdiff_t>(ypos));
            if (ypos >= off2 && s2.size() > n2) drop = std::max(drop, static_cast<std::ptrdiff_t>(ypos));
        };
        if (!ker.empty()) {
            for (std::size_t i = 0; i < y.cols(); ++i)
                if (ker.at(i, 0) != 0) consider(i);
        } else {
            for (std::size_t i = off1; i < y.cols(); ++i) consider(i);
        }
        if (drop < 0) throw std::logic_error("select_joint_submatrices: no droppable column (hypotheses violated)");
        const std::size_t pos = static_cast<std::size_t>(drop);
        if (pos < off2)
            s1.erase(s1.begin() + static_cast<std::ptrdiff_t>(pos - off1));
        else
            s2.erase(s2.begin() + static_cast<std::ptrdiff_t>(pos - off2));
    }

    MatrixFq out1 = b1.take_columns(s1);
    MatrixFq out2 = b2.take_columns(s2);
    const MatrixFq y = hcat({&a, &out1, &out2});
    if (rank(y) != y.cols()) throw std::logic_error("select_joint_submatrices: postcondition rank not attained");
    return {std::move(out1), std::move(out2)};
}

inline MatrixFq select_submatrix(const MatrixFq& a, const MatrixFq& b, std::size_t n) {
    const MatrixFq empty(a.field(), a.rows(), 0);
    return select_joint_submatrices(a, b, empty, n, 0).first;
}

// M tensor I_z: each entry m becomes the z x z block m I.
inline MatrixFq kron_with_identity(const MatrixFq& m, std::size_t z) {
    if (z == 0) throw std::invalid_argument("kron_with_identity: z must be >= 1");
    MatrixFq r(m.field(), m.rows() * z, m.cols() * z);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const std::uint64_t v = m.at(i, j);
            if (v == 0) continue;
            for (std::size_t t = 0; t < z; ++t) r.set(i * z + t, j * z + t, v);
        }
    return r;
}

// I_z tensor M: z diagonal copies of M.
inline MatrixFq identity_kron(std::size_t z, const MatrixFq& m) {
    if (z == 0) throw std::invalid_argument("identity_kron: z must be >= 1");
    MatrixFq r(m.field(), m.rows() * z, m.cols() * z);
    for (std::size_t t = 0; t < z; ++t)
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const std::uint64_t v = m.at(i, j);
                if (v != 0) r.set(t * m.rows() + i, t * m.cols() + j, v);
            }
    return r;
}

// Some x with A x = b (free variables zero), or nullopt when inconsistent.
inline std::optional<std::vector<std::uint64_t>> solve(const MatrixFq& a, std::span<const std::uint64_t> b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve: rhs length mismatch");
    MatrixFq rhs(a.field(), a.rows(), 1);
    for (std::size_t i = 0; i < a.rows(); ++i) rhs.set(i, 0, b[i]);
    const Rref r = rref(hcat(a, rhs));
    for (std::size_t p : r.pivot_cols)
        if (p == a.cols()) return std::nullopt;  // pivot in the rhs column
    std::vector<std::uint64_t> x(a.cols(), 0);
    for (std::size_t pi = 0; pi < r.pivot_cols.size(); ++pi) x[r.pivot_cols[pi]] = r.reduced.at(pi, a.cols());
    return x;
}

// Columnwise solve A X = B.
inline std::optional<MatrixFq> solve_matrix(const MatrixFq& a, const MatrixFq& b) {
    a.require_same_field(b);
    if (a.rows() != b.rows()) throw std::invalid_argument("solve_matrix: row count mismatch");
    const Rref r = rref(hcat(a, b));
    for (std::size_t p : r.pivot_cols)
        if (p >= a.cols()) return std::nullopt;
    MatrixFq x(a.field(), a.cols(), b.cols());
    for (std::size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
        for (std::size_t j = 0; j < b.cols(); ++j) x.set(r.pivot_cols[pi], j, r.reduced.at(pi, a.cols() + j));
    return x;
}

}  // namespace lcbc
