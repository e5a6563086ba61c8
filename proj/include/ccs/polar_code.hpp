#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "ccs/errors.hpp"
#include "ccs/rng.hpp"

namespace ccs {

constexpr double kLlrClamp = 40.0; // avoids infinities from degenerate pmfs

// additive-noise law on F_p: received = code symbol + Z
struct ChannelLaw {
    std::uint32_t p;
    std::vector<double> pmf;

    ChannelLaw(std::uint32_t p_, std::vector<double> pmf_) : p(p_), pmf(std::move(pmf_)) {
        if (pmf.size() != p) throw LengthMismatch("channel pmf must have p entries");
        double tot = 0.0;
        for (double q : pmf) {
            if (q < 0.0) throw Error("channel pmf entry negative");
            tot += q;
        }
        if (std::fabs(tot - 1.0) > 1e-12) throw Error("channel pmf must sum to 1");
    }

    static ChannelLaw delta0(std::uint32_t p) {
        std::vector<double> q(p, 0.0);
        q[0] = 1.0;
        return ChannelLaw(p, std::move(q));
    }

    static ChannelLaw bsc(double eps) { return ChannelLaw(2, {1.0 - eps, eps}); }

    // log P(Z = y) / P(Z = y ^ 1): belief about code bit 0 given received y
    double llr2(std::uint8_t y) const {
        double p0 = pmf[y & 1u];
        double p1 = pmf[(y ^ 1u) & 1u];
        if (p1 <= 0.0 && p0 <= 0.0) return 0.0;
        if (p1 <= 0.0) return kLlrClamp;
        if (p0 <= 0.0) return -kLlrClamp;
        return std::clamp(std::log(p0 / p1), -kLlrClamp, kLlrClamp);
    }

    double log_prob(std::uint32_t z) const {
        double q = pmf[z];
        return q > 0.0 ? std::log(q) : -1e30;
    }
};

namespace polar_detail {

// pairwise z-parameter recursion in natural order; index i < half takes the
// degraded branch (z_a + z_b - z_a z_b), i >= half the upgraded one (z_a z_b)
inline std::vector<double> reliability(std::vector<double> w) {
    if (w.size() <= 1) return w;
    std::size_t half = w.size() / 2;
    std::vector<double> minus(half), plus(half);
    for (std::size_t i = 0; i < half; ++i) {
        double za = w[i], zb = w[i + half];
        minus[i] = za + zb - za * zb;
        plus[i] = za * zb;
    }
    std::vector<double> left = reliability(std::move(minus));
    std::vector<double> right = reliability(std::move(plus));
    left.insert(left.end(), right.begin(), right.end());
    return left;
}

inline double bsc_bhattacharyya(double eps) { return 2.0 * std::sqrt(eps * (1.0 - eps)); }

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int next_pow2(int n) {
    int v = 1;
    while (v < n) v <<= 1;
    return v;
}

} // namespace polar_detail

struct PolarSpec {
    int mother_n = 0;            // N, power of two
    int m = 0;                   // transmitted length after shortening
    int m1 = 0;                  // information bits
    std::vector<int> info;       // sorted information indices
    std::vector<std::uint8_t> frozen; // mask over [0, N): 1 = frozen input
    std::vector<int> shortened;  // sorted known-zero codeword positions
    double design_crossover = 0.0;

    double rate() const { return static_cast<double>(m1) / m; }
};

// frozen set of the plain (unshortened) code: the N - m1 synthetic channels
// with the worst z parameters; ties break toward freezing the lower index
inline std::vector<int> construct_frozen_set(int n, int m1, double design_crossover) {
    if (!polar_detail::is_pow2(n)) throw Error("mother code length must be a power of 2");
    if (m1 < 0 || m1 > n) throw Error("information count out of range");
    std::vector<double> w(n, polar_detail::bsc_bhattacharyya(design_crossover));
    std::vector<double> z = polar_detail::reliability(std::move(w));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (z[a] != z[b]) return z[a] > z[b];
        return a < b;
    });
    std::vector<int> frozen(order.begin(), order.begin() + (n - m1));
    std::sort(frozen.begin(), frozen.end());
    return frozen;
}

// shortened spec: N = next power of two >= m, the tail N - m codeword
// positions are known zero (their inputs frozen), and the m1 info positions
// are the most reliable inputs under the recursion with the known positions
// entered as perfect channels
inline PolarSpec make_polar_spec(int m, int m1, double design_crossover) {
    if (m1 <= 0 || m1 > m) throw Error("need 0 < m1 <= m");
    PolarSpec spec;
    spec.mother_n = polar_detail::next_pow2(m);
    spec.m = m;
    spec.m1 = m1;
    spec.design_crossover = design_crossover;
    for (int i = m; i < spec.mother_n; ++i) spec.shortened.push_back(i);

    std::vector<double> w(spec.mother_n, polar_detail::bsc_bhattacharyya(design_crossover));
    for (int i = m; i < spec.mother_n; ++i) w[i] = 0.0;
    std::vector<double> z = polar_detail::reliability(std::move(w));

    std::vector<int> cand;
    for (int i = 0; i < m; ++i) cand.push_back(i);
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
        if (z[a] != z[b]) return z[a] < z[b];
        return a > b;
    });
    spec.info.assign(cand.begin(), cand.begin() + m1);
    std::sort(spec.info.begin(), spec.info.end());

    spec.frozen.assign(spec.mother_n, 1);
    for (int i : spec.info) spec.frozen[i] = 0;
    return spec;
}

// x = u F^{(x)log N} via the in-place butterfly (natural bit order)
inline void polar_transform(std::vector<std::uint8_t>& u) {
    int n = static_cast<int>(u.size());
    for (int len = 1; len < n; len <<= 1)
        for (int i = 0; i < n; i += 2 * len)
            for (int j = i; j < i + len; ++j) u[j] ^= u[j + len];
}

inline std::vector<std::uint8_t> shorten(const std::vector<std::uint8_t>& full,
                                         const PolarSpec& spec) {
    std::vector<std::uint8_t> out;
    out.reserve(spec.m);
    std::size_t si = 0;
    for (int i = 0; i < spec.mother_n; ++i) {
        if (si < spec.shortened.size() && spec.shortened[si] == i) {
            ++si;
            continue;
        }
        out.push_back(full[i]);
    }
    return out;
}

inline std::vector<std::uint8_t> polar_encode(const std::vector<std::uint8_t>& message,
                                              const PolarSpec& spec, std::uint32_t p = 2) {
    if (p != 2) throw AlphabetUnsupported("polar path supports p = 2 only");
    if (static_cast<int>(message.size()) != spec.m1)
        throw LengthMismatch("message length must equal m1");
    std::vector<std::uint8_t> u(spec.mother_n, 0);
    for (int i = 0; i < spec.m1; ++i) u[spec.info[i]] = message[i] & 1u;
    polar_transform(u);
    for (int i : spec.shortened) {
        if (u[i] != 0) throw Error("shortened position not zero; spec is inconsistent");
    }
    return shorten(u, spec);
}

namespace polar_detail {

// exact check-node combine, stable for large magnitudes
inline double llr_f(double a, double b) {
    double fa = std::fabs(a), fb = std::fabs(b);
    double sgn = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
    double m = std::min(fa, fb);
    return sgn * m + std::log1p(std::exp(-(fa + fb))) - std::log1p(std::exp(-std::fabs(fa - fb)));
}

struct ScWorkspace {
    std::vector<double> llr;      // channel beliefs, length N
    std::vector<std::uint8_t> cw; // codeword estimate, length N
    std::vector<double> ws_llr;   // scratch, length N
    std::vector<std::uint8_t> ws_cw;
    std::vector<std::uint8_t> u; // input decisions, length N
};

inline void sc_rec(const double* llr, std::uint8_t* cw, int len, int ubase,
                   const std::vector<std::uint8_t>& frozen, std::uint8_t* u, double* ws_llr,
                   std::uint8_t* ws_cw) {
    if (len == 1) {
        std::uint8_t bit = frozen[ubase] ? 0 : (llr[0] < 0.0 ? 1 : 0);
        u[ubase] = bit;
        cw[0] = bit;
        return;
    }
    int half = len / 2;
    for (int i = 0; i < half; ++i) ws_llr[i] = llr_f(llr[i], llr[i + half]);
    sc_rec(ws_llr, ws_cw, half, ubase, frozen, u, ws_llr + half, ws_cw + half);
    for (int i = 0; i < half; ++i)
        ws_llr[i] = llr[i + half] + (ws_cw[i] ? -llr[i] : llr[i]);
    sc_rec(ws_llr, cw + half, half, ubase + half, frozen, u, ws_llr + half, ws_cw + half);
    for (int i = 0; i < half; ++i) cw[i] = ws_cw[i] ^ cw[i + half];
}

} // namespace polar_detail

// successive cancellation over hard received symbols; shortened positions are
// reinserted with full-confidence zero beliefs
inline std::vector<std::uint8_t> sc_decode(const std::vector<std::uint8_t>& received,
                                           const ChannelLaw& law, const PolarSpec& spec) {
    if (law.p != 2) throw AlphabetUnsupported("successive cancellation path supports p = 2 only");
    if (static_cast<int>(received.size()) != spec.m)
        throw LengthMismatch("received length must equal m");
    int n = spec.mother_n;
    std::vector<double> llr(n);
    std::vector<std::uint8_t> cw(n), ws_cw(n), u(n);
    std::vector<double> ws_llr(n);
    std::size_t si = 0, ri = 0;
    for (int i = 0; i < n; ++i) {
        if (si < spec.shortened.size() && spec.shortened[si] == i) {
            llr[i] = kLlrClamp;
            ++si;
        } else {
            llr[i] = law.llr2(received[ri++]);
        }
    }
    polar_detail::sc_rec(llr.data(), cw.data(), n, 0, spec.frozen, u.data(), ws_llr.data(),
                         ws_cw.data());
    std::vector<std::uint8_t> msg(spec.m1);
    for (int i = 0; i < spec.m1; ++i) msg[i] = u[spec.info[i]];
    return msg;
}

// ---------------------------------------------------------------------------
// Generic linear code over F_p with a brute-force maximum-likelihood decoder;
// the desk-scale channel-code stand-in for p >= 3
// ---------------------------------------------------------------------------

struct GeneratorMatrix {
    std::uint32_t p = 2;
    int m1 = 0;
    int m = 0;
    std::vector<std::uint8_t> rows; // row-major m1 x m

    std::uint8_t at(int i, int j) const { return rows[static_cast<std::size_t>(i) * m + j]; }

    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& msg) const {
        if (static_cast<int>(msg.size()) != m1) throw LengthMismatch("message length != m1");
        std::vector<std::uint8_t> c(m, 0);
        for (int i = 0; i < m1; ++i) {
            if (msg[i] == 0) continue;
            for (int j = 0; j < m; ++j)
                c[j] = static_cast<std::uint8_t>((c[j] + msg[i] * at(i, j)) % p);
        }
        return c;
    }
};

// deterministic full-rank generator [I | A] with A drawn from a seeded stream
inline GeneratorMatrix make_systematic_generator(std::uint32_t p, int m1, int m,
                                                 std::uint64_t seed) {
    GeneratorMatrix g;
    g.p = p;
    g.m1 = m1;
    g.m = m;
    g.rows.assign(static_cast<std::size_t>(m1) * m, 0);
    Rng rng = Rng::substream(seed, p, m1, m);
    for (int i = 0; i < m1; ++i) {
        g.rows[static_cast<std::size_t>(i) * m + i] = 1;
        for (int j = m1; j < m; ++j)
            g.rows[static_cast<std::size_t>(i) * m + j] =
                static_cast<std::uint8_t>(rng.next_below(p));
    }
    return g;
}

// exact ML under the additive law; ties resolved toward the lexicographically
// smallest message (first symbol most significant)
inline std::vector<std::uint8_t> ml_decode_generic(const std::vector<std::uint8_t>& received,
                                                   const GeneratorMatrix& gen,
                                                   const ChannelLaw& law) {
    if (static_cast<int>(received.size()) != gen.m)
        throw LengthMismatch("received length != block length");
    if (law.p != gen.p) throw Error("channel alphabet does not match the code");
    double count = std::pow(static_cast<double>(gen.p), gen.m1);
    if (count > static_cast<double>(1u << 20))
        throw SearchSpaceTooLarge("p^m1 exceeds the 2^20 enumeration bound");

    std::vector<std::uint8_t> msg(gen.m1, 0), best_msg(gen.m1, 0);
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t total = static_cast<std::uint64_t>(count);
    for (std::uint64_t w = 0; w < total; ++w) {
        std::vector<std::uint8_t> c = gen.encode(msg);
        double score = 0.0;
        for (int j = 0; j < gen.m; ++j) {
            std::uint32_t z = (received[j] + gen.p - c[j]) % gen.p;
            score += law.log_prob(z);
        }
        if (score > best) {
            best = score;
            best_msg = msg;
        }
        // odometer: last symbol fastest, so w ascending = lexicographic ascending
        for (int i = gen.m1 - 1; i >= 0; --i) {
            if (++msg[i] < gen.p) break;
            msg[i] = 0;
        }
    }
    return best_msg;
}

} // namespace ccs
