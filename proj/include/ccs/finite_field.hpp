#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ccs/errors.hpp"

namespace ccs {

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Prime field F_p
// ---------------------------------------------------------------------------

class PrimeField {
public:
    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (!is_prime_u32(p)) throw Error("modulus " + std::to_string(p) + " is not prime");
    }
    std::uint32_t p() const { return p_; }
    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    std::uint32_t p_;
};

class Fp {
public:
    Fp() : v_(0), f_(nullptr) {}
    Fp(std::uint32_t v, const PrimeField& f) : v_(v % f.p()), f_(&f) {}

    std::uint32_t value() const { return v_; }
    const PrimeField& field() const { return *f_; }

    Fp operator+(Fp o) const { return raw((v_ + o.v_) % p()); }
    Fp operator-(Fp o) const { return raw((v_ + p() - o.v_) % p()); }
    Fp operator*(Fp o) const {
        return raw(static_cast<std::uint32_t>(std::uint64_t(v_) * o.v_ % p()));
    }
    Fp operator-() const { return raw(v_ == 0 ? 0 : p() - v_); }

    Fp inverse() const {
        if (v_ == 0) throw InverseOfZero();
        // Fermat: v^(p-2)
        std::uint64_t r = 1, b = v_, e = p() - 2;
        while (e) {
            if (e & 1) r = r * b % p();
            b = b * b % p();
            e >>= 1;
        }
        return raw(static_cast<std::uint32_t>(r));
    }

    bool operator==(Fp o) const { return v_ == o.v_ && p() == o.p(); }
    bool operator!=(Fp o) const { return !(*this == o); }

private:
    std::uint32_t p() const { return f_->p(); }
    Fp raw(std::uint32_t v) const {
        Fp r;
        r.v_ = v;
        r.f_ = f_;
        return r;
    }
    std::uint32_t v_;
    const PrimeField* f_;
};

// natural map g : F_p -> {0, ..., p-1} in Z, and its inverse on any integer
inline std::int64_t g_map(Fp a) { return a.value(); }

inline Fp g_inv(std::int64_t v, const PrimeField& f) {
    std::int64_t p = f.p();
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return Fp(static_cast<std::uint32_t>(r), f);
}

// ---------------------------------------------------------------------------
// Polynomial helpers over F_p (coefficient index = power of x)
// ---------------------------------------------------------------------------

namespace poly {

using Coeffs = std::vector<std::uint32_t>;

inline void trim(Coeffs& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Coeffs& a) { return static_cast<int>(a.size()) - 1; }

inline Coeffs mul(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Coeffs r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
    return r;
}

// remainder of a mod m, m monic
inline Coeffs mod(Coeffs a, const Coeffs& m, std::uint32_t p) {
    trim(a);
    int dm = degree(m);
    while (degree(a) >= dm) {
        std::uint32_t lead = a.back();
        int shift = degree(a) - dm;
        for (int i = 0; i <= dm; ++i) {
            std::uint64_t sub = std::uint64_t(lead) * m[i] % p;
            a[i + shift] = static_cast<std::uint32_t>((a[i + shift] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

inline Coeffs powmod(Coeffs base, std::uint64_t e, const Coeffs& m, std::uint32_t p) {
    Coeffs r{1};
    base = mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = mod(mul(r, base, p), m, p);
        base = mod(mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

inline Coeffs gcd(Coeffs a, Coeffs b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic before reducing
        Coeffs bm = b;
        std::uint32_t lead = bm.back();
        if (lead != 1) {
            Fp inv = Fp(lead, PrimeField(p)).inverse();
            for (auto& c : bm)
                c = static_cast<std::uint32_t>(std::uint64_t(c) * inv.value() % p);
        }
        Coeffs r = mod(a, bm, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace poly

// ---------------------------------------------------------------------------
// Extension field GF(p^s), polynomial basis modulo a monic irreducible.
// Elements are carried as packed base-p integers (x^0 digit least significant);
// for q <= 2^16 multiplication runs over log/antilog tables.
// ---------------------------------------------------------------------------

class ExtField;

class ExtElem {
public:
    ExtElem() : rep_(0), f_(nullptr) {}
    ExtElem(std::uint32_t rep, const ExtField& f) : rep_(rep), f_(&f) {}

    std::uint32_t rep() const { return rep_; }
    const ExtField& field() const { return *f_; }
    bool is_zero() const { return rep_ == 0; }

    ExtElem operator+(ExtElem o) const;
    ExtElem operator-(ExtElem o) const;
    ExtElem operator*(ExtElem o) const;
    ExtElem operator-() const;
    ExtElem inverse() const;
    ExtElem pow(std::uint64_t e) const;

    bool operator==(ExtElem o) const { return rep_ == o.rep_; }
    bool operator!=(ExtElem o) const { return rep_ != o.rep_; }

private:
    std::uint32_t rep_;
    const ExtField* f_;
};

class ExtField {
public:
    // modulus: length s+1 coefficient list over F_p, x^0 first, monic.
    // alpha_rep 0 means "find the smallest primitive element" (x is tried first).
    ExtField(std::uint32_t p, const std::vector<std::uint32_t>& modulus, std::uint32_t alpha_rep = 0)
        : prime_(p), p_(p), modulus_(modulus) {
        if (modulus.size() < 2) throw Error("modulus must have degree >= 1");
        s_ = static_cast<std::uint32_t>(modulus.size()) - 1;
        if (modulus.back() != 1) throw Error("modulus must be monic");
        for (auto c : modulus)
            if (c >= p) throw Error("modulus coefficient out of range");
        q_ = 1;
        for (std::uint32_t i = 0; i < s_; ++i) {
            q_ *= p;
            if (q_ > (1u << 20)) throw Error("field size p^s > 2^20 unsupported");
        }
        if (!is_irreducible(modulus, p)) throw Error("modulus polynomial is reducible");

        pow_p_.resize(s_);
        pow_p_[0] = 1;
        for (std::uint32_t i = 1; i < s_; ++i) pow_p_[i] = pow_p_[i - 1] * p;

        alpha_ = alpha_rep ? alpha_rep : find_primitive();
        if (multiplicative_order(alpha_) != q_ - 1)
            throw Error("designated alpha is not primitive");

        if (q_ <= 65536) build_tables(); // log/antilog relative to alpha
    }

    // Standard primitive modulus for a handful of common fields, deterministic
    // search (smallest packed representation with x primitive) otherwise.
    static ExtField with_default_modulus(std::uint32_t p, std::uint32_t s);

    std::uint32_t p() const { return p_; }
    std::uint32_t s() const { return s_; }
    std::uint32_t q() const { return q_; }
    const PrimeField& prime_field() const { return prime_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    ExtElem zero() const { return ExtElem(0, *this); }
    ExtElem one() const { return ExtElem(1, *this); }
    ExtElem alpha() const { return ExtElem(alpha_, *this); }
    ExtElem element(std::uint32_t rep) const {
        if (rep >= q_) throw Error("element representation out of range");
        return ExtElem(rep, *this);
    }

    // alpha^e for e in [0, q-2]; table-backed when available
    ExtElem alpha_pow(std::uint64_t e) const {
        e %= (q_ - 1);
        if (!antilog_.empty()) return ExtElem(antilog_[static_cast<std::size_t>(e)], *this);
        return alpha().pow(e);
    }

    // discrete log base alpha; element must be nonzero
    std::uint32_t log(ExtElem a) const {
        if (a.is_zero()) throw InverseOfZero();
        if (!log_.empty()) return log_[a.rep()];
        // fallback scan
        ExtElem cur = one();
        for (std::uint32_t e = 0; e < q_ - 1; ++e) {
            if (cur == a) return e;
            cur = cur * alpha();
        }
        throw Error("log: element not in multiplicative group");
    }

    std::uint32_t add_rep(std::uint32_t a, std::uint32_t b) const {
        if (p_ == 2) return a ^ b;
        std::uint32_t r = 0;
        for (std::uint32_t i = 0; i < s_; ++i) {
            std::uint32_t da = a / pow_p_[i] % p_;
            std::uint32_t db = b / pow_p_[i] % p_;
            r += (da + db) % p_ * pow_p_[i];
        }
        return r;
    }

    std::uint32_t neg_rep(std::uint32_t a) const {
        if (p_ == 2) return a;
        std::uint32_t r = 0;
        for (std::uint32_t i = 0; i < s_; ++i) {
            std::uint32_t da = a / pow_p_[i] % p_;
            r += (da == 0 ? 0 : p_ - da) * pow_p_[i];
        }
        return r;
    }

    std::uint32_t mul_rep(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        if (!log_.empty())
            return antilog_[(std::uint64_t(log_[a]) + log_[b]) % (q_ - 1)];
        return pack(poly::mod(poly::mul(unpack(a), unpack(b), p_), modulus_, p_));
    }

    std::uint32_t inv_rep(std::uint32_t a) const {
        if (a == 0) throw InverseOfZero();
        if (!log_.empty()) return antilog_[(q_ - 1 - log_[a]) % (q_ - 1)];
        return pow_rep(a, q_ - 2);
    }

    std::uint32_t pow_rep(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1) r = mul_rep(r, a);
            a = mul_rep(a, a);
            e >>= 1;
        }
        return r;
    }

    // polynomial-basis coefficient vector, x^0 coefficient first
    std::vector<std::uint32_t> coeffs(ExtElem a) const {
        std::vector<std::uint32_t> c(s_);
        std::uint32_t rep = a.rep();
        for (std::uint32_t i = 0; i < s_; ++i) {
            c[i] = rep % p_;
            rep /= p_;
        }
        return c;
    }

    ExtElem from_coeffs(const std::vector<std::uint32_t>& c) const {
        if (c.size() != s_) throw LengthMismatch("expected " + std::to_string(s_) +
                                                 " coefficients, got " + std::to_string(c.size()));
        std::uint32_t rep = 0;
        for (std::uint32_t i = 0; i < s_; ++i) {
            if (c[i] >= p_) throw Error("coefficient out of range");
            rep += c[i] * pow_p_[i];
        }
        return ExtElem(rep, *this);
    }

    // constant-polynomial embedding F_p -> GF(p^s)
    ExtElem embed(Fp a) const { return ExtElem(a.value(), *this); }
    ExtElem embed(std::uint32_t a) const { return ExtElem(a % p_, *this); }

    // inverse of embed where defined: rep < p means a constant polynomial
    bool in_prime_subfield(ExtElem a) const { return a.rep() < p_; }

    std::uint32_t multiplicative_order(std::uint32_t rep) const {
        if (rep == 0) return 0;
        std::uint32_t order = q_ - 1;
        std::uint32_t m = order;
        for (std::uint32_t d = 2; d * d <= m; ++d) {
            while (m % d == 0) m /= d;
            if (order % d == 0)
                while (order % d == 0 && pow_rep(rep, order / d) == 1) order /= d;
        }
        if (m > 1 && order % m == 0)
            while (order % m == 0 && pow_rep(rep, order / m) == 1) order /= m;
        return order;
    }

    static bool is_irreducible(const std::vector<std::uint32_t>& modulus, std::uint32_t p) {
        std::uint32_t s = static_cast<std::uint32_t>(modulus.size()) - 1;
        if (s == 1) return true;
        // no roots in F_p rules out linear factors; sufficient only for s <= 3
        for (std::uint32_t v = 0; v < p; ++v) {
            std::uint64_t acc = 0, xp = 1;
            for (auto c : modulus) {
                acc = (acc + c * xp) % p;
                xp = xp * v % p;
            }
            if (acc == 0) return false;
        }
        if (s <= 3) return true;
        // Rabin: x^(p^s) == x mod f, and gcd(x^(p^(s/r)) - x, f) = 1 for prime r | s
        std::uint64_t ps = 1;
        for (std::uint32_t i = 0; i < s; ++i) ps *= p;
        poly::Coeffs x{0, 1};
        poly::Coeffs xps = poly::powmod(x, ps, modulus, p);
        poly::Coeffs diff = xps;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        poly::trim(diff);
        if (!diff.empty()) return false;
        for (std::uint32_t r = 2; r <= s; ++r) {
            if (s % r != 0 || !is_prime_u32(r)) continue;
            std::uint64_t pe = 1;
            for (std::uint32_t i = 0; i < s / r; ++i) pe *= p;
            poly::Coeffs xe = poly::powmod(x, pe, modulus, p);
            poly::Coeffs d = xe;
            if (d.size() < 2) d.resize(2, 0);
            d[1] = (d[1] + p - 1) % p;
            poly::trim(d);
            poly::Coeffs g = poly::gcd(modulus, d, p);
            if (poly::degree(g) > 0) return false;
        }
        return true;
    }

private:
    poly::Coeffs unpack(std::uint32_t rep) const {
        poly::Coeffs c;
        while (rep) {
            c.push_back(rep % p_);
            rep /= p_;
        }
        return c;
    }
    std::uint32_t pack(const poly::Coeffs& c) const {
        std::uint32_t rep = 0;
        for (std::size_t i = 0; i < c.size(); ++i) rep += c[i] * pow_p_[i];
        return rep;
    }

    void build_tables() {
        // walk alpha^e by polynomial multiplication; filled locally so mul_rep
        // keeps using the polynomial path until both tables are complete
        std::vector<std::uint32_t> lg(q_, 0), alg(q_ - 1, 0);
        std::uint32_t cur = 1;
        for (std::uint32_t e = 0; e < q_ - 1; ++e) {
            alg[e] = cur;
            lg[cur] = e;
            cur = pack(poly::mod(poly::mul(unpack(cur), unpack(alpha_), p_), modulus_, p_));
        }
        if (cur != 1) throw Error("table construction failed: alpha order mismatch");
        log_ = std::move(lg);
        antilog_ = std::move(alg);
    }

    std::uint32_t find_primitive() const {
        std::uint32_t x_rep = (s_ >= 2) ? p_ : 2;
        if (multiplicative_order(x_rep) == q_ - 1) return x_rep;
        for (std::uint32_t cand = 1; cand < q_; ++cand)
            if (multiplicative_order(cand) == q_ - 1) return cand;
        throw Error("no primitive element found");
    }

    PrimeField prime_;
    std::uint32_t p_, s_, q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> pow_p_;
    std::vector<std::uint32_t> log_, antilog_;
    std::uint32_t alpha_ = 0;
};

inline ExtElem ExtElem::operator+(ExtElem o) const {
    return ExtElem(f_->add_rep(rep_, o.rep_), *f_);
}
inline ExtElem ExtElem::operator-(ExtElem o) const {
    return ExtElem(f_->add_rep(rep_, f_->neg_rep(o.rep_)), *f_);
}
inline ExtElem ExtElem::operator*(ExtElem o) const {
    return ExtElem(f_->mul_rep(rep_, o.rep_), *f_);
}
inline ExtElem ExtElem::operator-() const { return ExtElem(f_->neg_rep(rep_), *f_); }
inline ExtElem ExtElem::inverse() const { return ExtElem(f_->inv_rep(rep_), *f_); }
inline ExtElem ExtElem::pow(std::uint64_t e) const { return ExtElem(f_->pow_rep(rep_, e), *f_); }

// symbol -> length-s word over F_p (x^0 coefficient first) and back
inline std::vector<std::uint32_t> h_expand(ExtElem a) { return a.field().coeffs(a); }

inline ExtElem h_pack(const ExtField& f, const std::vector<std::uint32_t>& word) {
    return f.from_coeffs(word);
}

inline ExtField ExtField::with_default_modulus(std::uint32_t p, std::uint32_t s) {
    if (s == 0) throw Error("extension degree must be positive");
    // pinned moduli for fields the library leans on (all with x primitive)
    static const std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>
        pinned = {
            {{2, 3}, {1, 1, 0, 1}},                   // x^3 + x + 1
            {{2, 6}, {1, 1, 0, 0, 0, 0, 1}},          // x^6 + x + 1
            {{2, 9}, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1}}, // x^9 + x^4 + 1
        };
    auto it = pinned.find({p, s});
    if (it != pinned.end()) return ExtField(p, it->second, p);

    if (s == 1) {
        // F_p itself; any degree-1 modulus works, alpha found by scan
        return ExtField(p, {1, 1}, 0);
    }

    // deterministic search: smallest packed monic modulus with x primitive
    std::uint64_t span = 1;
    for (std::uint32_t i = 0; i < s; ++i) span *= p;
    for (std::uint64_t low = 1; low < span; ++low) {
        std::vector<std::uint32_t> m(s + 1, 0);
        std::uint64_t v = low;
        for (std::uint32_t i = 0; i < s; ++i) {
            m[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        m[s] = 1;
        if (m[0] == 0) continue; // x | modulus
        if (!is_irreducible(m, p)) continue;
        ExtField cand(p, m, 0);
        if (cand.alpha().rep() == p) return cand; // x itself primitive
    }
    throw Error("no primitive modulus found for p=" + std::to_string(p) +
                ", s=" + std::to_string(s));
}

} // namespace ccs
