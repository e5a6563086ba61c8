#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "ccs/errors.hpp"
#include "ccs/rng.hpp"

namespace ccs {

// Cubic shaping lattice tau*Z^m with the p-way split of its Voronoi cell
// [-tau/2, tau/2). Samples live on the grid (tau/p)*Z; everything is carried
// as integer grid indices so the modulo identities stay exact.
struct ModulationSpec {
    std::uint32_t p;
    double tau;

    static double default_tau(std::uint32_t p) { return p == 2 ? std::sqrt(8.0) : std::sqrt(12.0); }

    explicit ModulationSpec(std::uint32_t p_, double tau_ = 0.0)
        : p(p_), tau(tau_ > 0.0 ? tau_ : default_tau(p_)) {
        if (p < 2) throw Error("alphabet size must be >= 2");
    }

    double step() const { return tau / p; }
};

// representative of j mod p inside [-p/2, p/2)
inline std::int32_t signed_rep(std::int64_t j, std::uint32_t p) {
    std::int64_t jm = j % static_cast<std::int64_t>(p);
    if (jm < 0) jm += p;
    if (jm >= static_cast<std::int64_t>((p + 1) / 2)) jm -= p;
    return static_cast<std::int32_t>(jm);
}

// j mod p into [0, p)
inline std::uint32_t fold_index(std::int64_t j, std::uint32_t p) {
    std::int64_t jm = j % static_cast<std::int64_t>(p);
    if (jm < 0) jm += p;
    return static_cast<std::uint32_t>(jm);
}

struct LatticeWord {
    std::vector<std::int32_t> idx; // grid indices, sample value = idx * tau/p

    std::size_t size() const { return idx.size(); }
    double real(std::size_t i, const ModulationSpec& spec) const { return idx[i] * spec.step(); }
    std::vector<double> reals(const ModulationSpec& spec) const {
        std::vector<double> r(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[i] = idx[i] * spec.step();
        return r;
    }
    bool operator==(const LatticeWord& o) const { return idx == o.idx; }
};

// codeword symbol c -> ((tau/p) * c) mod tau*Z, reduced into the Voronoi cell
inline LatticeWord modulate(const std::vector<std::uint8_t>& codeword, const ModulationSpec& spec) {
    LatticeWord w;
    w.idx.resize(codeword.size());
    for (std::size_t i = 0; i < codeword.size(); ++i) w.idx[i] = signed_rep(codeword[i], spec.p);
    return w;
}

// nearest multiple of tau/p (ties toward +inf), then mod tau*Z
inline std::int32_t quantize_index(double r, const ModulationSpec& spec) {
    double scaled = r / spec.step();
    std::int64_t j = static_cast<std::int64_t>(std::floor(scaled + 0.5));
    return signed_rep(j, spec.p);
}

inline double sawtooth_quantize(double r, const ModulationSpec& spec) {
    return quantize_index(r, spec) * spec.step();
}

// grid value (a quantizer output) -> F_p symbol; validates grid membership
inline std::uint32_t fold_to_field(double y, const ModulationSpec& spec) {
    double scaled = y / spec.step();
    std::int64_t j = static_cast<std::int64_t>(std::llround(scaled));
    if (std::fabs(scaled - static_cast<double>(j)) > 1e-9 || signed_rep(j, spec.p) != j)
        throw NotOnGrid("value is not a valid quantizer output");
    return fold_index(j, spec.p);
}

// exact mean power of the p-point constellation under uniform symbols
inline double constellation_power(const ModulationSpec& spec) {
    double acc = 0.0;
    for (std::uint32_t c = 0; c < spec.p; ++c) {
        double v = signed_rep(c, spec.p) * spec.step();
        acc += v * v;
    }
    return acc / spec.p;
}

// Monte Carlo estimate of (1/m) E ||t||^2 over uniform random messages pushed
// through an arbitrary encoder
inline double average_power(const ModulationSpec& spec,
                            const std::function<std::vector<std::uint8_t>(
                                const std::vector<std::uint8_t>&)>& encode,
                            std::size_t message_len, std::size_t trials, Rng& rng) {
    double acc = 0.0;
    std::size_t samples = 0;
    std::vector<std::uint8_t> msg(message_len);
    for (std::size_t t = 0; t < trials; ++t) {
        for (auto& b : msg) b = static_cast<std::uint8_t>(rng.next_below(spec.p));
        LatticeWord w = modulate(encode(msg), spec);
        for (std::size_t i = 0; i < w.size(); ++i) {
            double v = w.real(i, spec);
            acc += v * v;
        }
        samples += w.size();
    }
    return samples ? acc / samples : 0.0;
}

} // namespace ccs
