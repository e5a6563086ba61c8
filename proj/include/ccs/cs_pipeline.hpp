#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ccs/errors.hpp"
#include "ccs/finite_field.hpp"
#include "ccs/lattice_modulation.hpp"
#include "ccs/noise_theory.hpp"
#include "ccs/polar_code.hpp"
#include "ccs/reed_solomon.hpp"
#include "ccs/rng.hpp"

namespace ccs {

struct SparseSignal {
    int n = 0;
    std::vector<std::pair<int, std::uint8_t>> entries; // sorted by position, values in 1..p-1

    int k() const { return static_cast<int>(entries.size()); }
    bool operator==(const SparseSignal& o) const { return n == o.n && entries == o.entries; }
    bool operator!=(const SparseSignal& o) const { return !(*this == o); }

    std::vector<std::uint8_t> dense() const {
        std::vector<std::uint8_t> x(n, 0);
        for (auto [pos, val] : entries) x[pos] = val;
        return x;
    }
};

inline SparseSignal random_sparse_signal(int n, int k, std::uint32_t p, Rng& rng) {
    SparseSignal x;
    x.n = n;
    std::vector<int> pos;
    while (static_cast<int>(pos.size()) < k) {
        int cand = static_cast<int>(rng.next_below(n));
        bool dup = false;
        for (int q : pos) dup |= (q == cand);
        if (!dup) pos.push_back(cand);
    }
    std::sort(pos.begin(), pos.end());
    for (int q : pos) {
        std::uint8_t v = p == 2 ? 1 : static_cast<std::uint8_t>(1 + rng.next_below(p - 1));
        x.entries.emplace_back(q, v);
    }
    return x;
}

struct MeasurementVector {
    LatticeWord samples;
    bool operator==(const MeasurementVector& o) const { return samples == o.samples; }
};

// aggregate noise power sigma^2 split evenly over m measurements
struct NoiseModel {
    double sigma_sq = 0.0;
    int m = 1;

    double per_entry_var() const { return sigma_sq / m; }
    double per_entry_std() const { return std::sqrt(per_entry_var()); }
    double snr(double tau) const {
        return sigma_sq > 0.0 ? tau * tau / per_entry_var()
                              : std::numeric_limits<double>::infinity();
    }

    static NoiseModel from_elementwise_snr(double tau, double snr, int m) {
        NoiseModel nm;
        nm.m = m;
        nm.sigma_sq = std::isinf(snr) ? 0.0 : tau * tau * m / snr;
        return nm;
    }
};

enum class ChannelCodeKind { identity, polar, generic };

inline const char* to_string(ChannelCodeKind k) {
    switch (k) {
        case ChannelCodeKind::identity: return "identity";
        case ChannelCodeKind::polar: return "polar";
        case ChannelCodeKind::generic: return "generic";
    }
    return "?";
}

// The full deterministic sensing design: RS parity check over GF(p^s), its
// p-ary expansion H (the dictionary), the channel code, and the real-valued
// lattice columns t_l. Built once, then shared read-only.
class SensingDesign {
public:
    std::shared_ptr<const ExtField> field;
    RsCodeSpec rs;
    int n = 0, m = 0;
    std::uint32_t p = 2;
    ModulationSpec mod{2};
    ChannelCodeKind code_kind = ChannelCodeKind::identity;
    PolarSpec polar;
    GeneratorMatrix gen; // generic path, p >= 3
    std::uint64_t gen_seed = 0;
    double design_crossover = 0.0;

    std::vector<std::vector<std::uint8_t>> dict; // h_l in F_p^{m1}, n columns
    std::vector<LatticeWord> columns;            // t_l, n columns of length m

    int s() const { return static_cast<int>(field->s()); }
    int m_tilde1() const { return rs.m_tilde1(); }
    int m1() const { return m_tilde1() * s(); }
    int k_max() const { return rs.k_max(); }
    double rate() const { return static_cast<double>(m1()) / m; }

    std::vector<std::uint8_t> encode_message(const std::vector<std::uint8_t>& msg) const {
        switch (code_kind) {
            case ChannelCodeKind::identity: return msg;
            case ChannelCodeKind::polar: return polar_encode(msg, polar, p);
            case ChannelCodeKind::generic: return gen.encode(msg);
        }
        throw Error("bad code kind");
    }

    std::vector<std::uint8_t> decode_message(const std::vector<std::uint8_t>& received,
                                             const ChannelLaw& law) const {
        switch (code_kind) {
            case ChannelCodeKind::identity: return received;
            case ChannelCodeKind::polar: return sc_decode(received, law, polar);
            case ChannelCodeKind::generic: return ml_decode_generic(received, gen, law);
        }
        throw Error("bad code kind");
    }

    // analytic operation charge of one channel-code decode (node visits)
    std::uint64_t stage1_op_charge() const {
        switch (code_kind) {
            case ChannelCodeKind::identity: return m;
            case ChannelCodeKind::polar: {
                std::uint64_t n2 = polar.mother_n;
                std::uint64_t lg = 0;
                while ((1u << lg) < n2) ++lg;
                return n2 * lg;
            }
            case ChannelCodeKind::generic: {
                std::uint64_t cnt = 1;
                for (int i = 0; i < gen.m1; ++i) cnt *= gen.p;
                return cnt * gen.m;
            }
        }
        return 0;
    }
};

inline SensingDesign build_design(int n, int k_max, std::uint32_t p, int m,
                                  double design_crossover = 0.02, double tau = 0.0,
                                  std::uint64_t generic_seed = 0x5eedu) {
    SensingDesign d;
    std::uint32_t s = degree_for_length(static_cast<std::uint64_t>(n), p);
    int m_tilde1 = 2 * k_max;
    if (k_max < 1) throw ConfigError("k_max must be >= 1");
    if (m_tilde1 >= n) throw ConfigError("need n > 2 k_max for a valid RS code");
    int m1 = m_tilde1 * static_cast<int>(s);
    if (m < m1)
        throw RateInfeasible("rate infeasible: m = " + std::to_string(m) + " < m1 = " +
                             std::to_string(m1));

    d.field = std::make_shared<const ExtField>(ExtField::with_default_modulus(p, s));
    d.rs = RsCodeSpec(*d.field, n, n - m_tilde1);
    d.n = n;
    d.m = m;
    d.p = p;
    d.mod = ModulationSpec(p, tau);
    d.design_crossover = design_crossover;
    d.gen_seed = generic_seed;

    if (m == m1) {
        d.code_kind = ChannelCodeKind::identity;
    } else if (p == 2) {
        d.code_kind = ChannelCodeKind::polar;
        d.polar = make_polar_spec(m, m1, design_crossover);
    } else {
        d.code_kind = ChannelCodeKind::generic;
        d.gen = make_systematic_generator(p, m1, m, generic_seed);
    }

    ParityCheckMatrix pcm(d.rs);
    d.dict.resize(n);
    d.columns.resize(n);
    for (int l = 0; l < n; ++l) {
        std::vector<std::uint8_t>& h = d.dict[l];
        h.reserve(m1);
        for (int j = 1; j <= m_tilde1; ++j) {
            auto word = h_expand(pcm.entry(j, l));
            for (auto c : word) h.push_back(static_cast<std::uint8_t>(c));
        }
        d.columns[l] = modulate(d.encode_message(h), d.mod);
    }
    return d;
}

// y = S_p(sum_{l in T} t_l x_l + noise); the integer-weighted superposition is
// carried in grid indices, noise enters as floats just before quantization
inline MeasurementVector sense(const SparseSignal& x, const SensingDesign& design,
                               const NoiseModel& noise, Rng& rng) {
    if (x.n != design.n) throw LengthMismatch("signal length does not match the design");
    std::vector<std::int64_t> acc(design.m, 0);
    for (auto [pos, val] : x.entries) {
        const LatticeWord& col = design.columns[pos];
        for (int i = 0; i < design.m; ++i) acc[i] += static_cast<std::int64_t>(col.idx[i]) * val;
    }
    MeasurementVector y;
    y.samples.idx.resize(design.m);
    double step = design.mod.step();
    double sd = noise.per_entry_std();
    for (int i = 0; i < design.m; ++i) {
        double r = static_cast<double>(acc[i]) * step;
        if (sd > 0.0) r += sd * rng.next_gaussian();
        y.samples.idx[i] = quantize_index(r, design.mod);
    }
    return y;
}

struct Stage1Result {
    std::vector<std::uint8_t> y_tilde; // decoded effective measurement in F_p^{m1}
    bool codeword_valid = true;
    std::uint64_t ops = 0;
};

// fold to F_p^m and decode the dictionary equation through the channel code;
// the decoded message IS the effective measurement H x~
inline Stage1Result compute_stage(const MeasurementVector& y, const SensingDesign& design,
                                  const ChannelLaw& law, double sanity_fraction = 0.5) {
    Stage1Result r;
    std::vector<std::uint8_t> folded(design.m);
    for (int i = 0; i < design.m; ++i)
        folded[i] = static_cast<std::uint8_t>(fold_index(y.samples.idx[i], design.p));
    r.y_tilde = design.decode_message(folded, law);
    r.ops = design.stage1_op_charge();
    std::vector<std::uint8_t> reenc = design.encode_message(r.y_tilde);
    int mismatches = 0;
    for (int i = 0; i < design.m; ++i) mismatches += (reenc[i] != folded[i]);
    r.codeword_valid = mismatches <= sanity_fraction * design.m;
    return r;
}

struct DecodeDiagnostics {
    bool stage1_codeword_valid = true;
    RsStatus stage2_status = RsStatus::ok;
    std::uint64_t stage1_ops = 0;
    RsOpCounter stage2_ops;

    bool ok() const { return stage2_status == RsStatus::ok; }
    // F_p-equivalent operation count: each GF(p^s) operation charged s^2
    std::uint64_t fp_ops(int s) const {
        return stage1_ops + stage2_ops.total() * static_cast<std::uint64_t>(s) * s;
    }
};

// pack s-blocks back to GF(p^s) symbols and run syndrome decoding
inline std::pair<SparseSignal, DecodeDiagnostics> recover_stage(
    const std::vector<std::uint8_t>& y_tilde, const SensingDesign& design) {
    if (static_cast<int>(y_tilde.size()) != design.m1())
        throw LengthMismatch("effective measurement length must equal m1");
    const ExtField& f = *design.field;
    int s = design.s();
    std::vector<ExtElem> ybar;
    ybar.reserve(design.m_tilde1());
    std::vector<std::uint32_t> word(s);
    for (int j = 0; j < design.m_tilde1(); ++j) {
        for (int i = 0; i < s; ++i) word[i] = y_tilde[j * s + i];
        ybar.push_back(h_pack(f, word));
    }
    RsDecodeResult rs = syndrome_decode(ybar, design.rs, ValueDomain::prime_subfield);

    SparseSignal x;
    x.n = design.n;
    DecodeDiagnostics diag;
    diag.stage2_status = rs.status;
    diag.stage2_ops = rs.ops;
    if (rs.ok()) {
        for (const auto& [pos, val] : rs.errors)
            x.entries.emplace_back(pos, static_cast<std::uint8_t>(val.rep()));
        std::sort(x.entries.begin(), x.entries.end());
    }
    return {x, diag};
}

// the two-stage compute-and-recover decoder
inline std::pair<SparseSignal, DecodeDiagnostics> decode(const MeasurementVector& y,
                                                         const SensingDesign& design,
                                                         const ChannelLaw& law) {
    Stage1Result s1 = compute_stage(y, design, law);
    auto [x, diag] = recover_stage(s1.y_tilde, design);
    diag.stage1_codeword_valid = s1.codeword_valid;
    diag.stage1_ops = s1.ops;
    return {x, diag};
}

// channel law implied by the true operating SNR (genie channel knowledge)
inline ChannelLaw law_for_noise(const SensingDesign& design, const NoiseModel& noise) {
    QuantizedNoisePmf pmf = noise_pmf(design.p, noise.snr(design.mod.tau));
    return ChannelLaw(design.p, pmf.probs);
}

// ---------------------------------------------------------------------------
// Design dump: a versioned text serialization carrying everything needed to
// rebuild the sensing matrix bit-exactly.
// ---------------------------------------------------------------------------

inline std::string dump_design(const SensingDesign& d) {
    std::ostringstream os;
    os.precision(17);
    os << "ccs_design_v1\n";
    os << "p " << d.p << "\n";
    os << "s " << d.s() << "\n";
    os << "n " << d.n << "\n";
    os << "k_max " << d.k_max() << "\n";
    os << "mtilde1 " << d.m_tilde1() << "\n";
    os << "m1 " << d.m1() << "\n";
    os << "m " << d.m << "\n";
    os << "tau " << d.mod.tau << "\n";
    os << "modulus";
    for (auto c : d.field->modulus()) os << " " << c;
    os << "\n";
    os << "alpha " << d.field->alpha().rep() << "\n";
    os << "code " << to_string(d.code_kind) << "\n";
    if (d.code_kind == ChannelCodeKind::polar) {
        os << "polar_n " << d.polar.mother_n << "\n";
        os << "design_crossover " << d.design_crossover << "\n";
        os << "info";
        for (int i : d.polar.info) os << " " << i;
        os << "\n";
        os << "shortened";
        for (int i : d.polar.shortened) os << " " << i;
        os << "\n";
    } else if (d.code_kind == ChannelCodeKind::generic) {
        os << "generic_seed " << d.gen_seed << "\n";
    }
    os << "end\n";
    return os.str();
}

inline SensingDesign design_from_dump(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "ccs_design_v1")
        throw ConfigError("unrecognized design dump version");

    std::uint32_t p = 0;
    int s = 0, n = 0, k_max = 0, m = 0, polar_n = 0;
    double tau = 0.0, crossover = 0.0;
    std::uint64_t generic_seed = 0x5eedu;
    std::vector<std::uint32_t> modulus;
    std::uint32_t alpha = 0;
    std::string code;
    std::vector<int> info, shortened;
    bool has_info = false;

    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "end") break;
        if (key == "p") ls >> p;
        else if (key == "s") ls >> s;
        else if (key == "n") ls >> n;
        else if (key == "k_max") ls >> k_max;
        else if (key == "m") ls >> m;
        else if (key == "tau") ls >> tau;
        else if (key == "alpha") ls >> alpha;
        else if (key == "code") ls >> code;
        else if (key == "polar_n") ls >> polar_n;
        else if (key == "design_crossover") ls >> crossover;
        else if (key == "generic_seed") ls >> generic_seed;
        else if (key == "modulus") {
            std::uint32_t c;
            while (ls >> c) modulus.push_back(c);
        } else if (key == "info") {
            int c;
            while (ls >> c) info.push_back(c);
            has_info = true;
        } else if (key == "shortened") {
            int c;
            while (ls >> c) shortened.push_back(c);
        }
        // mtilde1 / m1 are derived; ignored on input
    }
    if (p == 0 || n == 0 || m == 0 || modulus.empty()) throw ConfigError("incomplete design dump");

    SensingDesign d;
    d.field = std::make_shared<const ExtField>(ExtField(p, modulus, alpha));
    if (static_cast<int>(d.field->s()) != s) throw ConfigError("modulus degree disagrees with s");
    d.rs = RsCodeSpec(*d.field, n, n - 2 * k_max);
    d.n = n;
    d.m = m;
    d.p = p;
    d.mod = ModulationSpec(p, tau);
    d.design_crossover = crossover;
    d.gen_seed = generic_seed;

    if (code == "identity") {
        if (m != d.m1()) throw ConfigError("identity-code dump requires m == m1");
        d.code_kind = ChannelCodeKind::identity;
    } else if (code == "polar") {
        if (!has_info) throw ConfigError("polar dump is missing the information set");
        if (static_cast<int>(info.size()) != d.m1())
            throw ConfigError("polar dump information set has the wrong size");
        d.code_kind = ChannelCodeKind::polar;
        d.polar.mother_n = polar_n;
        d.polar.m = m;
        d.polar.m1 = d.m1();
        d.polar.design_crossover = crossover;
        d.polar.info = info;
        d.polar.shortened = shortened;
        d.polar.frozen.assign(polar_n, 1);
        for (int i : info) d.polar.frozen[i] = 0;
    } else if (code == "generic") {
        d.code_kind = ChannelCodeKind::generic;
        d.gen = make_systematic_generator(p, d.m1(), m, generic_seed);
    } else {
        throw ConfigError("unknown channel code kind '" + code + "'");
    }

    ParityCheckMatrix pcm(d.rs);
    d.dict.resize(n);
    d.columns.resize(n);
    for (int l = 0; l < n; ++l) {
        std::vector<std::uint8_t>& h = d.dict[l];
        h.reserve(d.m1());
        for (int j = 1; j <= d.m_tilde1(); ++j) {
            auto word = h_expand(pcm.entry(j, l));
            for (auto c : word) h.push_back(static_cast<std::uint8_t>(c));
        }
        d.columns[l] = modulate(d.encode_message(h), d.mod);
    }
    return d;
}

} // namespace ccs
