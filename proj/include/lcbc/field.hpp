// Exact arithmetic in GF(p^n), plus subfield embeddings GF(p^n) -> GF(p^{nz})
// used by the field-size extension of broadcast schemes.
//
// Elements are handled as integer codes in [0, q): the base-p digit expansion
// of the code, little-endian, is the coefficient vector of the residue
// polynomial. This is also the serialized form used in instance files.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcbc {

class FieldSpec;
using Field = std::shared_ptr<const FieldSpec>;

namespace detail {

// Dense little-endian polynomials over F_p, only used during field
// construction (irreducibility scan) and for the generic multiply path.
using Poly = std::vector<std::uint32_t>;

inline void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
    // f monic
    poly_trim(a);
    const std::size_t df = f.size() - 1;
    while (a.size() > df) {
        const std::uint64_t c = a.back();
        const std::size_t shift = a.size() - 1 - df;
        if (c != 0) {
            for (std::size_t j = 0; j <= df; ++j) {
                std::uint64_t t = a[shift + j] + (p - (c * f[j]) % p);
                a[shift + j] = static_cast<std::uint32_t>(t % p);
            }
        }
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
        }
    }
    return poly_mod(std::move(r), f, p);
}

inline Poly poly_pow_xmod(std::uint64_t e, const Poly& f, std::uint32_t p) {
    Poly result{1};
    Poly base{0, 1};
    base = poly_mod(std::move(base), f, p);
    while (e > 0) {
        if (e & 1) result = poly_mulmod(result, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    return result;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
    auto inv_mod_p = [p](std::uint64_t x) {
        // Fermat; p prime
        std::uint64_t r = 1, b2 = x % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * b2 % p;
            b2 = b2 * b2 % p;
            e >>= 1;
        }
        return r;
    };
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // make b monic, then a mod b
        Poly bm = b;
        const std::uint64_t lead_inv = inv_mod_p(bm.back());
        for (auto& c : bm) c = static_cast<std::uint32_t>(c * lead_inv % p);
        a = poly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

inline bool is_prime_u32(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint32_t i = 2; static_cast<std::uint64_t>(i) * i <= v; ++i)
        if (v % i == 0) return false;
    return true;
}

}  // namespace detail

// A finite field GF(p^n). Immutable after construction, shareable across
// threads; instances are canonicalized through make(), so two fields with the
// same (p, n) are the same object and carry the same modulus.
class FieldSpec {
public:
    static constexpr std::uint32_t kMaxP = 1u << 16;   // primality by trial division
    static constexpr std::uint64_t kMaxQ = 1u << 20;   // scan / table sizes stay sane
    static constexpr std::uint64_t kLutMaxQ = 1024;    // cache full mul/inv tables up to here

    // Returns GF(p^n) with the lexicographically smallest monic irreducible
    // modulus of degree n (coefficients compared low-degree-first), so fields
    // are identical across runs and machines.
    static Field make(std::uint32_t p, std::uint32_t n);

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return n_; }
    std::uint64_t order() const { return q_; }
    // Coefficient vector of the modulus, little-endian, length n+1, monic.
    // For n == 1 this is the placeholder x - 0.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    bool same(const FieldSpec& o) const { return p_ == o.p_ && n_ == o.n_; }

    bool valid_code(std::uint64_t a) const { return a < q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (p_ == 2) return a ^ b;
        if (n_ == 1) return (a + b) % p_;
        return digitwise(a, b, /*negate_b=*/false);
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        if (p_ == 2) return a ^ b;
        if (n_ == 1) return (a + p_ - b) % p_;
        return digitwise(a, b, /*negate_b=*/true);
    }
    std::uint64_t neg(std::uint64_t a) const { return sub(0, a); }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (!mul_lut_.empty()) return mul_lut_[a * q_ + b];
        return mul_generic(a, b);
    }

    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw std::domain_error("FieldSpec::inv: zero has no inverse");
        if (!inv_lut_.empty()) return inv_lut_[a];
        return inv_generic(a);
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1, b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    // Code of the residue class of x; the canonical generator of the
    // polynomial representation (n >= 2).
    std::uint64_t generator() const {
        if (n_ < 2) throw std::logic_error("FieldSpec::generator: prime field has no polynomial generator");
        return p_;
    }

    std::vector<std::uint32_t> coeffs(std::uint64_t code) const {
        std::vector<std::uint32_t> c(n_);
        for (std::uint32_t i = 0; i < n_; ++i) {
            c[i] = static_cast<std::uint32_t>(code % p_);
            code /= p_;
        }
        return c;
    }

    std::uint64_t from_coeffs(std::span<const std::uint32_t> c) const {
        std::uint64_t code = 0, w = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            std::uint32_t ci = i < c.size() ? c[i] : 0;
            if (ci >= p_) throw std::invalid_argument("FieldSpec::from_coeffs: coefficient out of range");
            code += ci * w;
            w *= p_;
        }
        return code;
    }

    // Compare element codes by coefficient vectors, low-degree coefficient
    // first. Used for deterministic tie-breaks (embedding root choice).
    bool coeff_less(std::uint64_t a, std::uint64_t b) const {
        for (std::uint32_t i = 0; i < n_; ++i) {
            const std::uint32_t da = a % p_, db = b % p_;
            if (da != db) return da < db;
            a /= p_;
            b /= p_;
        }
        return false;
    }

private:
    FieldSpec(std::uint32_t p, std::uint32_t n, std::vector<std::uint32_t> modulus);

    std::uint64_t digitwise(std::uint64_t a, std::uint64_t b, bool negate_b) const {
        std::uint64_t r = 0, w = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            const std::uint64_t da = a % p_, db = b % p_;
            r += (negate_b ? (da + p_ - db) % p_ : (da + db) % p_) * w;
            a /= p_;
            b /= p_;
            w *= p_;
        }
        return r;
    }

    std::uint64_t mul_generic(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t inv_generic(std::uint64_t a) const;

    std::uint32_t p_;
    std::uint32_t n_;
    std::uint64_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> mul_lut_;  // q*q entries when q <= kLutMaxQ
    std::vector<std::uint32_t> inv_lut_;  // q entries when q <= kLutMaxQ
};

inline std::uint64_t FieldSpec::mul_generic(std::uint64_t a, std::uint64_t b) const {
    if (n_ == 1) return a * b % p_;
    // convolve coefficient digits, then reduce by the (monic) modulus
    std::vector<std::uint64_t> t(2 * n_ - 1, 0);
    std::vector<std::uint32_t> da = coeffs(a), db = coeffs(b);
    for (std::uint32_t i = 0; i < n_; ++i) {
        if (da[i] == 0) continue;
        for (std::uint32_t j = 0; j < n_; ++j) t[i + j] += static_cast<std::uint64_t>(da[i]) * db[j];
    }
    for (std::size_t i = t.size(); i-- > n_;) {
        const std::uint64_t c = t[i] % p_;
        if (c != 0) {
            for (std::uint32_t j = 0; j < n_; ++j) {
                t[i - n_ + j] += c * (p_ - modulus_[j]);
            }
        }
        t[i] = 0;
    }
    std::uint64_t code = 0, w = 1;
    for (std::uint32_t i = 0; i < n_; ++i) {
        code += (t[i] % p_) * w;
        w *= p_;
    }
    return code;
}

inline std::uint64_t FieldSpec::inv_generic(std::uint64_t a) const {
    if (n_ == 1) {
        // Fermat
        std::uint64_t r = 1, b = a % p_, e = p_ - 2;
        while (e) {
            if (e & 1) r = r * b % p_;
            b = b * b % p_;
            e >>= 1;
        }
        return r;
    }
    return pow(a, q_ - 2);
}

inline FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t n, std::vector<std::uint32_t> modulus)
    : p_(p), n_(n), modulus_(std::move(modulus)) {
    q_ = 1;
    for (std::uint32_t i = 0; i < n_; ++i) q_ *= p_;
    if (q_ <= kLutMaxQ) {
        mul_lut_.resize(q_ * q_);
        for (std::uint64_t a = 0; a < q_; ++a)
            for (std::uint64_t b = a; b < q_; ++b) {
                const std::uint32_t v = static_cast<std::uint32_t>(mul_generic(a, b));
                mul_lut_[a * q_ + b] = v;
                mul_lut_[b * q_ + a] = v;
            }
        inv_lut_.assign(q_, 0);
        for (std::uint64_t a = 1; a < q_; ++a) inv_lut_[a] = static_cast<std::uint32_t>(inv_generic(a));
    }
}

inline Field FieldSpec::make(std::uint32_t p, std::uint32_t n) {
    if (!detail::is_prime_u32(p) || p >= kMaxP)
        throw std::invalid_argument("make_field: p must be a prime below 2^16, got " + std::to_string(p));
    if (n == 0) throw std::invalid_argument("make_field: extension degree must be >= 1");
    {
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            q *= p;
            if (q > kMaxQ) throw std::invalid_argument("make_field: field order exceeds supported cap 2^20");
        }
    }

    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, Field> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, n});
    if (it != cache.end()) return it->second;

    std::vector<std::uint32_t> modulus;
    if (n == 1) {
        modulus = {0, 1};  // placeholder x - 0; arithmetic is integers mod p
    } else {
        // enumerate low-order coefficient tuples (c_0 .. c_{n-1}) in
        // lexicographic order, c_0 most significant, and take the first
        // irreducible x^n + sum c_i x^i
        std::vector<std::uint32_t> c(n, 0);
        std::vector<std::uint64_t> prime_divs;
        for (std::uint32_t m = n, t = 2; t <= m; ++t) {
            if (m % t == 0) {
                prime_divs.push_back(t);
                while (m % t == 0) m /= t;
            }
        }
        bool found = false;
        while (!found) {
            detail::Poly f(c.begin(), c.end());
            f.push_back(1);
            // irreducible iff x^{p^n} == x mod f and for each prime t | n,
            // gcd(x^{p^{n/t}} - x, f) = 1
            auto xq = detail::poly_pow_xmod([&] {
                std::uint64_t e = 1;
                for (std::uint32_t i = 0; i < n; ++i) e *= p;
                return e;
            }(), f, p);
            detail::Poly x{0, 1};
            auto minus_x = [&](detail::Poly g) {
                if (g.size() < 2) g.resize(2, 0);
                g[1] = (g[1] + p - 1) % p;
                detail::poly_trim(g);
                return g;
            };
            bool ok = minus_x(xq).empty();
            if (ok) {
                for (std::uint64_t t : prime_divs) {
                    std::uint64_t e = 1;
                    for (std::uint32_t i = 0; i < n / t; ++i) e *= p;
                    auto g = detail::poly_gcd(minus_x(detail::poly_pow_xmod(e, f, p)), f, p);
                    if (g.size() != 1) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) {
                modulus.assign(f.begin(), f.end());
                found = true;
                break;
            }
            // odometer: last coefficient is least significant
            std::size_t i = n;
            while (i-- > 0) {
                if (++c[i] < p) break;
                c[i] = 0;
                if (i == 0) throw std::logic_error("make_field: no irreducible polynomial found");
            }
        }
    }
    Field f(new FieldSpec(p, n, std::move(modulus)));
    cache.emplace(std::make_pair(p, n), f);
    return f;
}

// A single field element bound to its field. Scalar convenience wrapper over
// the code-level FieldSpec operations; mixing fields throws.
class FieldElement {
public:
    FieldElement(Field f, std::uint64_t code) : f_(std::move(f)), c_(code) {
        if (!f_) throw std::invalid_argument("FieldElement: null field");
        if (!f_->valid_code(c_)) throw std::invalid_argument("FieldElement: code out of range");
    }

    const Field& field() const { return f_; }
    std::uint64_t code() const { return c_; }
    bool is_zero() const { return c_ == 0; }

    FieldElement operator+(const FieldElement& o) const { return with(f_->add(c_, check(o))); }
    FieldElement operator-(const FieldElement& o) const { return with(f_->sub(c_, check(o))); }
    FieldElement operator*(const FieldElement& o) const { return with(f_->mul(c_, check(o))); }
    FieldElement operator/(const FieldElement& o) const { return with(f_->mul(c_, f_->inv(check(o)))); }
    FieldElement operator-() const { return with(f_->neg(c_)); }
    FieldElement inv() const { return with(f_->inv(c_)); }
    FieldElement pow(std::uint64_t e) const { return with(f_->pow(c_, e)); }
    bool operator==(const FieldElement& o) const { return c_ == check(o); }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

private:
    FieldElement with(std::uint64_t code) const { return FieldElement(f_, code); }
    std::uint64_t check(const FieldElement& o) const {
        if (!f_->same(*o.f_)) throw std::invalid_argument("FieldElement: operands from different fields");
        return o.c_;
    }

    Field f_;
    std::uint64_t c_;
};

// Field homomorphism GF(p^n) -> GF(p^{nz}) together with the block packing
// that identifies z base-field symbols with one extension-field symbol.
//
// The base generator maps to a root of the base modulus inside the extension,
// found by exhaustive search; the smallest root under the low-degree-first
// coefficient order is chosen so schemes are reproducible. For z == 1 the
// embedding is the identity.
class Embedding {
public:
    Embedding(Field base, std::uint32_t z) : base_(std::move(base)), z_(z) {
        if (z_ == 0) throw std::invalid_argument("Embedding: z must be >= 1");
        ext_ = (z_ == 1) ? base_ : FieldSpec::make(base_->characteristic(), base_->degree() * z_);
        const std::uint32_t n = base_->degree();
        root_pow_.assign(n, 1);
        if (z_ > 1 && n > 1) {
            const std::uint64_t root = find_root();
            for (std::uint32_t i = 1; i < n; ++i) root_pow_[i] = ext_->mul(root_pow_[i - 1], root);
        }
        // x^t basis powers of the extension, used by pack
        basis_pow_.assign(z_, 1);
        for (std::uint32_t t = 1; t < z_; ++t) basis_pow_[t] = ext_->mul(basis_pow_[t - 1], ext_->generator());
        if (z_ > 1) build_unpack_matrix();
    }

    const Field& base() const { return base_; }
    const Field& ext() const { return ext_; }
    std::uint32_t z() const { return z_; }

    std::uint64_t lift(std::uint64_t a) const {
        if (z_ == 1) return a;
        const std::uint32_t n = base_->degree();
        if (n == 1) return a;  // prime subfield embeds as constants
        std::uint64_t r = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::uint32_t d = static_cast<std::uint32_t>(a % base_->characteristic());
            if (d != 0) r = ext_->add(r, ext_->mul(d, root_pow_[i]));
            a /= base_->characteristic();
        }
        return r;
    }

    // [a_0, ..., a_{z-1}] -> sum_t lift(a_t) x^t
    std::uint64_t pack(std::span<const std::uint64_t> block) const {
        if (block.size() != z_) throw std::invalid_argument("Embedding::pack: block length must equal z");
        std::uint64_t r = 0;
        for (std::uint32_t t = 0; t < z_; ++t) {
            if (block[t] != 0) r = ext_->add(r, ext_->mul(lift(block[t]), basis_pow_[t]));
        }
        return r;
    }

    std::vector<std::uint64_t> unpack(std::uint64_t e) const {
        if (z_ == 1) return {e};
        const std::uint32_t p = base_->characteristic();
        const std::uint32_t n = base_->degree();
        const std::uint32_t dim = n * z_;
        // coordinates of e in the (lift(g^i) x^t) basis, via the precomputed
        // inverse over F_p
        std::vector<std::uint32_t> y(dim, 0);
        std::vector<std::uint32_t> ec = ext_->coeffs(e);
        for (std::uint32_t r = 0; r < dim; ++r) {
            std::uint64_t acc = 0;
            for (std::uint32_t c = 0; c < dim; ++c) acc += static_cast<std::uint64_t>(unpack_mat_[r * dim + c]) * ec[c];
            y[r] = static_cast<std::uint32_t>(acc % p);
        }
        std::vector<std::uint64_t> block(z_);
        for (std::uint32_t t = 0; t < z_; ++t)
            block[t] = base_->from_coeffs(std::span<const std::uint32_t>(y.data() + t * n, n));
        return block;
    }

private:
    std::uint64_t find_root() const {
        // roots of the base modulus inside the extension, smallest first
        // under the coefficient order
        const auto& mod = base_->modulus();
        std::uint64_t best = 0;
        bool have = false;
        std::uint64_t cand = enumerate_first();
        do {
            std::uint64_t v = 0, xp = 1;
            for (std::size_t i = 0; i < mod.size(); ++i) {
                if (mod[i] != 0) v = ext_->add(v, ext_->mul(mod[i], xp));
                xp = ext_->mul(xp, cand);
            }
            if (v == 0) {
                best = cand;
                have = true;
                break;  // enumeration is in coefficient order, first hit is smallest
            }
        } while (enumerate_next(cand));
        if (!have) throw std::logic_error("Embedding: base modulus has no root in extension");
        return best;
    }

    // enumerate ext codes in low-degree-first lexicographic coefficient order
    std::uint64_t enumerate_first() const { return 0; }
    bool enumerate_next(std::uint64_t& code) const {
        // increment the highest-degree coefficient first so that the
        // low-degree-first lexicographic order is ascending
        const std::uint32_t p = ext_->characteristic();
        const std::uint32_t dim = ext_->degree();
        std::vector<std::uint32_t> c = ext_->coeffs(code);
        std::size_t i = dim;
        while (i-- > 0) {
            if (++c[i] < p) {
                code = ext_->from_coeffs(c);
                return true;
            }
            c[i] = 0;
            if (i == 0) return false;
        }
        return false;
    }

    void build_unpack_matrix() {
        const std::uint32_t p = base_->characteristic();
        const std::uint32_t n = base_->degree();
        const std::uint32_t dim = n * z_;
        // forward matrix: column (t*n + i) = ext coeffs of lift(g^i) x^t
        std::vector<std::uint32_t> fwd(dim * dim, 0);
        for (std::uint32_t t = 0; t < z_; ++t) {
            for (std::uint32_t i = 0; i < n; ++i) {
                const std::uint64_t v = ext_->mul(root_pow_[i], basis_pow_[t]);
                const auto vc = ext_->coeffs(v);
                for (std::uint32_t r = 0; r < dim; ++r) fwd[r * dim + (t * n + i)] = vc[r];
            }
        }
        // invert over F_p (Gauss-Jordan); the basis property guarantees
        // nonsingularity
        std::vector<std::uint32_t> inv(dim * dim, 0);
        for (std::uint32_t i = 0; i < dim; ++i) inv[i * dim + i] = 1;
        auto inv_mod_p = [p](std::uint64_t x) {
            std::uint64_t r = 1, b = x % p, e = p - 2;
            while (e) {
                if (e & 1) r = r * b % p;
                b = b * b % p;
                e >>= 1;
            }
            return r;
        };
        for (std::uint32_t col = 0; col < dim; ++col) {
            std::uint32_t piv = col;
            while (piv < dim && fwd[piv * dim + col] == 0) ++piv;
            if (piv == dim) throw std::logic_error("Embedding: packing basis is singular");
            if (piv != col) {
                for (std::uint32_t j = 0; j < dim; ++j) {
                    std::swap(fwd[piv * dim + j], fwd[col * dim + j]);
                    std::swap(inv[piv * dim + j], inv[col * dim + j]);
                }
            }
            const std::uint64_t s = inv_mod_p(fwd[col * dim + col]);
            for (std::uint32_t j = 0; j < dim; ++j) {
                fwd[col * dim + j] = static_cast<std::uint32_t>(fwd[col * dim + j] * s % p);
                inv[col * dim + j] = static_cast<std::uint32_t>(inv[col * dim + j] * s % p);
            }
            for (std::uint32_t r = 0; r < dim; ++r) {
                if (r == col) continue;
                const std::uint64_t f = fwd[r * dim + col];
                if (f == 0) continue;
                for (std::uint32_t j = 0; j < dim; ++j) {
                    fwd[r * dim + j] = static_cast<std::uint32_t>((fwd[r * dim + j] + (p - f % p) * fwd[col * dim + j]) % p);
                    inv[r * dim + j] = static_cast<std::uint32_t>((inv[r * dim + j] + (p - f % p) * inv[col * dim + j]) % p);
                }
            }
        }
        unpack_mat_ = std::move(inv);
    }

    Field base_;
    Field ext_;
    std::uint32_t z_;
    std::vector<std::uint64_t> root_pow_;   // rho^0 .. rho^{n-1}
    std::vector<std::uint64_t> basis_pow_;  // x^0 .. x^{z-1}
    std::vector<std::uint32_t> unpack_mat_;
};

}  // namespace lcbc
