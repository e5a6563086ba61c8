#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "ccs/cs_pipeline.hpp"
#include "ccs/rng.hpp"

namespace ccs {

// Unstructured baseline: m x n Gaussian sensing matrix with N(0, 1/m) entries
struct GaussianSensing {
    int m = 0;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<double> a; // row-major

    static GaussianSensing generate(int m, int n, std::uint64_t seed) {
        GaussianSensing g;
        g.m = m;
        g.n = n;
        g.seed = seed;
        g.a.resize(static_cast<std::size_t>(m) * n);
        Rng rng(seed);
        double sd = 1.0 / std::sqrt(static_cast<double>(m));
        for (auto& v : g.a) v = sd * rng.next_gaussian();
        return g;
    }

    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const double* row = &a[static_cast<std::size_t>(i) * n];
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    // transpose-apply accumulated row by row (cache friendly for row-major)
    std::vector<double> apply_t(const std::vector<double>& e) const {
        std::vector<double> r(n, 0.0);
        for (int i = 0; i < m; ++i) {
            if (e[i] == 0.0) continue;
            const double* row = &a[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) r[j] += e[i] * row[j];
        }
        return r;
    }
};

inline int sign_pm(double v) { return v >= 0.0 ? 1 : -1; } // sign(0) = +1

// y = sign(Phi x + noise), noise iid N(0, sigma_sq / m)
inline std::vector<int> sign_measure(const GaussianSensing& phi, const SparseSignal& x,
                                     double sigma_sq, Rng& rng) {
    std::vector<double> xd(x.n, 0.0);
    for (auto [pos, val] : x.entries) xd[pos] = static_cast<double>(val);
    std::vector<double> s = phi.apply(xd);
    double sd = std::sqrt(sigma_sq / phi.m);
    std::vector<int> y(phi.m);
    for (int i = 0; i < phi.m; ++i) {
        double v = s[i];
        if (sd > 0.0) v += sd * rng.next_gaussian();
        y[i] = sign_pm(v);
    }
    return y;
}

struct BihtConfig {
    double step_size = 1.0;
    int max_iters = 100;
    int k = 1;
};

// iterative hard thresholding on sign residuals:
//   a <- thresh_k( a + (eta/m) Phi^T (y - sign(Phi a)) )
// stops on sign consistency, then keeps the k largest magnitudes and assigns
// binary values (lowest index wins ties)
inline std::vector<std::uint8_t> biht_recover(const std::vector<int>& signs,
                                              const GaussianSensing& phi, const BihtConfig& cfg,
                                              const std::optional<std::vector<double>>& init =
                                                  std::nullopt) {
    std::vector<double> a = init ? *init : std::vector<double>(phi.n, 0.0);
    std::vector<double> e(phi.m);
    std::vector<int> order(phi.n);
    for (int it = 0; it < cfg.max_iters; ++it) {
        std::vector<double> proj = phi.apply(a);
        bool consistent = true;
        for (int i = 0; i < phi.m; ++i) {
            double diff = signs[i] - sign_pm(proj[i]);
            e[i] = diff;
            consistent &= (diff == 0.0);
        }
        if (consistent) break;
        std::vector<double> grad = phi.apply_t(e);
        double scale = cfg.step_size / phi.m;
        for (int j = 0; j < phi.n; ++j) a[j] += scale * grad[j];
        if (cfg.k < phi.n) {
            std::iota(order.begin(), order.end(), 0);
            std::nth_element(order.begin(), order.begin() + cfg.k, order.end(), [&](int i, int j) {
                return std::fabs(a[i]) > std::fabs(a[j]);
            });
            for (int i = cfg.k; i < phi.n; ++i) a[order[i]] = 0.0;
        }
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        double ai = std::fabs(a[i]), aj = std::fabs(a[j]);
        if (ai != aj) return ai > aj;
        return i < j;
    });
    std::vector<std::uint8_t> x(phi.n, 0);
    for (int i = 0; i < cfg.k && i < phi.n; ++i) x[order[i]] = 1;
    return x;
}

} // namespace ccs
