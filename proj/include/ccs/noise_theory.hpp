#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ccs/errors.hpp"

namespace ccs {

inline double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double db_to_linear(double db) {
    if (std::isinf(db)) return db > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Law of the effective quantized noise: fold a N(0, (p/sqrt(snr))^2) variable
// to the nearest integer and reduce mod p. snr is the element-wise linear SNR.
struct QuantizedNoisePmf {
    std::uint32_t p = 2;
    std::vector<double> probs; // P(Z = j), j = 0..p-1
    double sigma_n = 0.0;      // std of the pre-fold Gaussian, in grid units
};

inline QuantizedNoisePmf noise_pmf(std::uint32_t p, double snr) {
    if (!(snr > 0.0)) throw Error("snr must be positive");
    QuantizedNoisePmf pmf;
    pmf.p = p;
    pmf.probs.assign(p, 0.0);
    if (std::isinf(snr)) {
        pmf.probs[0] = 1.0;
        return pmf;
    }
    double sigma = p / std::sqrt(snr);
    pmf.sigma_n = sigma;
    // accumulate integer shells until the remaining tail mass drops below 1e-14
    std::int64_t t_max = static_cast<std::int64_t>(std::ceil(8.5 * sigma + 1.0));
    for (std::int64_t t = -t_max; t <= t_max; ++t) {
        double mass = gaussian_cdf((t + 0.5) / sigma) - gaussian_cdf((t - 0.5) / sigma);
        pmf.probs[static_cast<std::size_t>(((t % p) + p) % p)] += mass;
    }
    double tot = 0.0;
    for (double q : pmf.probs) tot += q;
    for (double& q : pmf.probs) q /= tot;
    return pmf;
}

inline double entropy_base_p(const std::vector<double>& probs, std::uint32_t p) {
    double h = 0.0;
    double lp = std::log(static_cast<double>(p));
    for (double q : probs)
        if (q > 0.0) h -= q * std::log(q) / lp;
    return h;
}

inline double entropy_p(const QuantizedNoisePmf& pmf) { return entropy_base_p(pmf.probs, pmf.p); }

// exact extension degree s with n = p^s - 1; the measurement bound is stated
// with this integer rather than a real logarithm
inline std::uint32_t degree_for_length(std::uint64_t n, std::uint32_t p) {
    std::uint64_t q = 1;
    for (std::uint32_t s = 1; s <= 64; ++s) {
        q *= p;
        if (q - 1 == n) return s;
        if (q - 1 > n) break;
    }
    throw ConfigError("n must equal p^s - 1 for some s");
}

// smallest m with m >= 2 k log_p(n) / (1 - H_p(Z))
inline std::int64_t sufficient_m(std::uint64_t n, std::uint64_t k, std::uint32_t p, double snr) {
    if (k == 0) return 0;
    std::uint32_t s = degree_for_length(n, p);
    double h = entropy_p(noise_pmf(p, snr));
    if (h >= 1.0 - 1e-9) throw Unachievable("H_p(Z) >= 1: no finite measurement count suffices");
    return static_cast<std::int64_t>(std::ceil(2.0 * k * s / (1.0 - h)));
}

struct RateFeasibility {
    bool feasible = false;
    double margin = 0.0; // (1 - H_p(Z)) - m1/m
};

inline RateFeasibility rate_feasible(std::int64_t m1, std::int64_t m, std::uint32_t p, double snr) {
    double h = entropy_p(noise_pmf(p, snr));
    RateFeasibility r;
    r.margin = (1.0 - h) - static_cast<double>(m1) / static_cast<double>(m);
    r.feasible = r.margin >= 0.0;
    return r;
}

} // namespace ccs
