#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ccs/errors.hpp"
#include "ccs/finite_field.hpp"

namespace ccs {

// [n, b] Reed-Solomon code over GF(p^s), parity-check rows j = 1..m_tilde1
// with entries alpha^(j*l). Syndromes are then the classic power sums, so
// textbook Berlekamp-Massey / Chien / Forney apply unmodified.
struct RsCodeSpec {
    const ExtField* field = nullptr;
    int n = 0;
    int b = 0;

    RsCodeSpec() = default;
    RsCodeSpec(const ExtField& f, int n_, int b_) : field(&f), n(n_), b(b_) {
        if (n > static_cast<int>(f.q()) - 1)
            throw FieldTooSmall("RS length " + std::to_string(n) + " exceeds q-1 = " +
                                std::to_string(f.q() - 1));
        if (b <= 0 || b >= n) throw Error("RS dimension must satisfy 0 < b < n");
    }

    int m_tilde1() const { return n - b; }
    int d_min() const { return m_tilde1() + 1; } // Singleton bound, achieved
    int k_max() const { return (m_tilde1() + 1) / 2; }
};

class ParityCheckMatrix {
public:
    explicit ParityCheckMatrix(const RsCodeSpec& spec) : spec_(spec) {}

    const RsCodeSpec& spec() const { return spec_; }

    // row index j in [1, m_tilde1], column l in [0, n)
    ExtElem entry(int j, int l) const {
        return spec_.field->alpha_pow(static_cast<std::uint64_t>(j) * l);
    }

    // column l as m_tilde1 symbols (j = 1..m_tilde1)
    std::vector<ExtElem> column(int l) const {
        std::vector<ExtElem> col;
        col.reserve(spec_.m_tilde1());
        for (int j = 1; j <= spec_.m_tilde1(); ++j) col.push_back(entry(j, l));
        return col;
    }

private:
    RsCodeSpec spec_;
};

inline ParityCheckMatrix build_parity_check(const RsCodeSpec& spec) {
    return ParityCheckMatrix(spec);
}

// position -> nonzero value
using SparseFieldVector = std::vector<std::pair<int, ExtElem>>;

struct RsOpCounter {
    std::uint64_t mul = 0;
    std::uint64_t add = 0;
    std::uint64_t inv = 0;
    std::uint64_t total() const { return mul + add + inv; }
    RsOpCounter& operator+=(const RsOpCounter& o) {
        mul += o.mul;
        add += o.add;
        inv += o.inv;
        return *this;
    }
};

inline std::vector<ExtElem> syndrome(const SparseFieldVector& x, const ParityCheckMatrix& pcm,
                                     RsOpCounter* ops = nullptr) {
    const RsCodeSpec& spec = pcm.spec();
    const ExtField& f = *spec.field;
    std::vector<ExtElem> s(spec.m_tilde1(), f.zero());
    for (const auto& [pos, val] : x) {
        ExtElem x_l = f.alpha_pow(pos);
        ExtElem term = val * x_l; // val * alpha^(1*pos)
        for (int j = 0; j < spec.m_tilde1(); ++j) {
            s[j] = s[j] + term;
            term = term * x_l;
            if (ops) {
                ops->add += 1;
                ops->mul += 1;
            }
        }
        if (ops) ops->mul += 1;
    }
    return s;
}

namespace detail {

inline int poly_degree(const std::vector<ExtElem>& a) {
    int d = static_cast<int>(a.size()) - 1;
    while (d >= 0 && a[d].is_zero()) --d;
    return d;
}

inline ExtElem poly_eval(const std::vector<ExtElem>& a, ExtElem z, RsOpCounter* ops) {
    const ExtField& f = z.field();
    ExtElem acc = f.zero();
    for (int i = poly_degree(a); i >= 0; --i) {
        acc = acc * z + a[i];
        if (ops) {
            ops->mul += 1;
            ops->add += 1;
        }
    }
    return acc;
}

} // namespace detail

// LFSR synthesis over the m_tilde1 power-sum syndromes; sigma(0) = 1 and
// deg(sigma) = number of errors whenever that number is within k_max.
inline std::vector<ExtElem> bm_locator(const std::vector<ExtElem>& s, const ExtField& f,
                                       RsOpCounter* ops = nullptr) {
    std::vector<ExtElem> sigma{f.one()};
    std::vector<ExtElem> prev{f.one()};
    int L = 0, m = 1;
    ExtElem b = f.one();
    for (int n = 0; n < static_cast<int>(s.size()); ++n) {
        ExtElem d = s[n];
        for (int i = 1; i <= L && i < static_cast<int>(sigma.size()); ++i) {
            d = d + sigma[i] * s[n - i];
            if (ops) {
                ops->mul += 1;
                ops->add += 1;
            }
        }
        if (d.is_zero()) {
            ++m;
            continue;
        }
        ExtElem coef = d * b.inverse();
        if (ops) {
            ops->mul += 1;
            ops->inv += 1;
        }
        std::vector<ExtElem> adjusted = sigma;
        if (adjusted.size() < prev.size() + m) adjusted.resize(prev.size() + m, f.zero());
        for (std::size_t i = 0; i < prev.size(); ++i) {
            adjusted[i + m] = adjusted[i + m] - coef * prev[i];
            if (ops) {
                ops->mul += 1;
                ops->add += 1;
            }
        }
        if (2 * L <= n) {
            prev = sigma;
            L = n + 1 - L;
            b = d;
            m = 1;
        } else {
            ++m;
        }
        sigma = std::move(adjusted);
    }
    sigma.resize(detail::poly_degree(sigma) + 1, f.zero());
    if (sigma.empty()) sigma.push_back(f.one());
    return sigma;
}

struct ChienResult {
    bool ok = false; // root count matched deg(sigma)
    std::vector<int> positions;
};

inline ChienResult chien_search(const std::vector<ExtElem>& sigma, const RsCodeSpec& spec,
                                RsOpCounter* ops = nullptr) {
    const ExtField& f = *spec.field;
    ChienResult r;
    int deg = detail::poly_degree(sigma);
    if (deg <= 0) {
        r.ok = (deg == 0);
        return r;
    }
    std::uint32_t q1 = f.q() - 1;
    for (int l = 0; l < spec.n; ++l) {
        ExtElem zinv = f.alpha_pow((q1 - l % q1) % q1);
        if (detail::poly_eval(sigma, zinv, ops).is_zero()) r.positions.push_back(l);
    }
    r.ok = (static_cast<int>(r.positions.size()) == deg);
    return r;
}

// evaluator Omega = S(z) sigma(z) mod z^m_tilde1 with S(z) = sum_j S_j z^(j-1);
// under the j = 1..m_tilde1 row convention the value at position l is
// -Omega(X^-1) / sigma'(X^-1) with X = alpha^l (no extra power factor).
inline std::vector<ExtElem> forney_values(const std::vector<ExtElem>& sigma,
                                          const std::vector<ExtElem>& s,
                                          const std::vector<int>& positions,
                                          const RsCodeSpec& spec, RsOpCounter* ops = nullptr) {
    const ExtField& f = *spec.field;
    int nt = static_cast<int>(s.size());
    std::vector<ExtElem> omega(nt, f.zero());
    for (int i = 0; i < static_cast<int>(sigma.size()); ++i) {
        if (sigma[i].is_zero()) continue;
        for (int j = 0; j + i < nt && j < nt; ++j) {
            omega[i + j] = omega[i + j] + sigma[i] * s[j];
            if (ops) {
                ops->mul += 1;
                ops->add += 1;
            }
        }
    }
    std::vector<ExtElem> dsigma; // formal derivative
    for (int i = 1; i < static_cast<int>(sigma.size()); ++i) {
        ExtElem c = f.zero();
        std::uint32_t im = static_cast<std::uint32_t>(i) % f.p();
        for (std::uint32_t rep = 0; rep < im; ++rep) c = c + sigma[i];
        dsigma.push_back(c);
    }
    std::uint32_t q1 = f.q() - 1;
    std::vector<ExtElem> values;
    values.reserve(positions.size());
    for (int l : positions) {
        ExtElem zinv = f.alpha_pow((q1 - l % q1) % q1);
        ExtElem num = detail::poly_eval(omega, zinv, ops);
        ExtElem den = detail::poly_eval(dsigma, zinv, ops);
        if (den.is_zero()) {
            values.push_back(f.zero()); // flagged downstream as invalid
            continue;
        }
        values.push_back(-(num * den.inverse()));
        if (ops) {
            ops->mul += 1;
            ops->inv += 1;
        }
    }
    return values;
}

enum class RsStatus {
    ok,
    bm_degree_overflow,
    chien_mismatch,
    value_out_of_alphabet,
    reencode_mismatch,
};

inline const char* to_string(RsStatus s) {
    switch (s) {
        case RsStatus::ok: return "ok";
        case RsStatus::bm_degree_overflow: return "bm_degree_overflow";
        case RsStatus::chien_mismatch: return "chien_mismatch";
        case RsStatus::value_out_of_alphabet: return "value_out_of_alphabet";
        case RsStatus::reencode_mismatch: return "reencode_mismatch";
    }
    return "?";
}

// value domain accepted by the decoder: arbitrary nonzero field values, or
// only constant polynomials (images of F_p), which is what the sensing
// pipeline requires of its signals
enum class ValueDomain { full_field, prime_subfield };

struct RsDecodeResult {
    RsStatus status = RsStatus::ok;
    SparseFieldVector errors;
    RsOpCounter ops;
    bool ok() const { return status == RsStatus::ok; }
};

inline RsDecodeResult syndrome_decode(const std::vector<ExtElem>& s, const RsCodeSpec& spec,
                                      ValueDomain domain = ValueDomain::prime_subfield) {
    const ExtField& f = *spec.field;
    RsDecodeResult r;

    bool all_zero = true;
    for (const auto& v : s)
        if (!v.is_zero()) all_zero = false;
    if (all_zero) return r;

    std::vector<ExtElem> sigma = bm_locator(s, f, &r.ops);
    if (detail::poly_degree(sigma) > spec.k_max()) {
        r.status = RsStatus::bm_degree_overflow;
        return r;
    }
    ChienResult roots = chien_search(sigma, spec, &r.ops);
    if (!roots.ok) {
        r.status = RsStatus::chien_mismatch;
        return r;
    }
    std::vector<ExtElem> values = forney_values(sigma, s, roots.positions, spec, &r.ops);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].is_zero() ||
            (domain == ValueDomain::prime_subfield && !f.in_prime_subfield(values[i]))) {
            r.status = RsStatus::value_out_of_alphabet;
            return r;
        }
        r.errors.emplace_back(roots.positions[i], values[i]);
    }
    // mandatory re-encode check: a returned vector always reproduces the input
    ParityCheckMatrix pcm(spec);
    std::vector<ExtElem> again = syndrome(r.errors, pcm, &r.ops);
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (again[j] != s[j]) {
            r.status = RsStatus::reencode_mismatch;
            r.errors.clear();
            return r;
        }
    }
    return r;
}

} // namespace ccs
