#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccs/biht.hpp"

using namespace ccs;

namespace {

double recovery_rate(int n, int m, int k, double sigma_sq, int trials, std::uint64_t seed) {
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, 0, t);
        auto x = random_sparse_signal(n, k, 2, rng);
        auto phi = GaussianSensing::generate(m, n, rng.next_u64());
        auto signs = sign_measure(phi, x, sigma_sq, rng);
        BihtConfig cfg;
        cfg.k = k;
        ok += (biht_recover(signs, phi, cfg) == x.dense());
    }
    return static_cast<double>(ok) / trials;
}

} // namespace

TEST_CASE("gaussian sensing matrices") {
    SECTION("reproducible from the seed") {
        auto a = GaussianSensing::generate(20, 50, 99);
        auto b = GaussianSensing::generate(20, 50, 99);
        CHECK(a.a == b.a);
    }

    SECTION("column norms concentrate near one") {
        auto g = GaussianSensing::generate(2000, 20, 7);
        for (int j = 0; j < 20; ++j) {
            double norm2 = 0.0;
            for (int i = 0; i < 2000; ++i) norm2 += g.at(i, j) * g.at(i, j);
            CHECK(norm2 == Catch::Approx(1.0).margin(0.15));
        }
    }
}

TEST_CASE("sign measurements") {
    SECTION("zero signal, zero noise: all +1 by the tie rule") {
        auto phi = GaussianSensing::generate(32, 64, 1);
        SparseSignal x;
        x.n = 64;
        Rng rng(2);
        auto y = sign_measure(phi, x, 0.0, rng);
        for (int v : y) CHECK(v == 1);
    }

    SECTION("noiseless signs are scale invariant") {
        auto phi = GaussianSensing::generate(48, 64, 3);
        Rng rng(4);
        auto x = random_sparse_signal(64, 3, 2, rng);
        Rng r1(0), r2(0);
        auto y1 = sign_measure(phi, x, 0.0, r1);
        // scale x by 7: same signs
        SparseSignal x7 = x;
        std::vector<double> xd(64, 0.0);
        for (auto [pos, val] : x.entries) xd[pos] = 7.0;
        auto s = phi.apply(xd);
        for (int i = 0; i < 48; ++i) CHECK(sign_pm(s[i]) == y1[i]);
    }

    SECTION("flip rate matches the per-coordinate gaussian orthant probability") {
        auto phi = GaussianSensing::generate(64, 128, 5);
        Rng rng(6);
        auto x = random_sparse_signal(128, 4, 2, rng);
        std::vector<double> xd(128, 0.0);
        for (auto [pos, val] : x.entries) xd[pos] = val;
        auto clean = phi.apply(xd);
        double sigma_sq = 2.0;
        double sd = std::sqrt(sigma_sq / 64.0);
        // oracle: P(flip_i) = Q(|s_i| / sd) per coordinate
        double expected = 0.0;
        for (double s : clean) expected += 0.5 * std::erfc(std::fabs(s) / sd / std::sqrt(2.0));
        expected /= 64.0;
        int flips = 0, trials = 4000;
        for (int t = 0; t < trials; ++t) {
            Rng nr = Rng::substream(7, 0, t);
            auto y = sign_measure(phi, x, sigma_sq, nr);
            for (int i = 0; i < 64; ++i) flips += (y[i] != sign_pm(clean[i]));
        }
        double observed = static_cast<double>(flips) / (64.0 * trials);
        double mc_sd = std::sqrt(expected * (1 - expected) / (64.0 * trials));
        CHECK(std::fabs(observed - expected) < 4.0 * mc_sd + 1e-4);
    }
}

TEST_CASE("biht recovery") {
    SECTION("noiseless n=64 m=48 k=2 exceeds 90% exact recovery") {
        CHECK(recovery_rate(64, 48, 2, 0.0, 500, 100) > 0.9);
    }

    SECTION("output is always exactly k-sparse and binary") {
        Rng rng(9);
        for (int t = 0; t < 20; ++t) {
            auto x = random_sparse_signal(64, 3, 2, rng);
            auto phi = GaussianSensing::generate(32, 64, rng.next_u64());
            auto y = sign_measure(phi, x, 4.0, rng);
            BihtConfig cfg;
            cfg.k = 3;
            auto xh = biht_recover(y, phi, cfg);
            int weight = 0;
            for (auto v : xh) {
                REQUIRE((v == 0 || v == 1));
                weight += v;
            }
            REQUIRE(weight == 3);
        }
    }

    SECTION("consistent signs at the plant are a fixed point") {
        Rng rng(11);
        auto x = random_sparse_signal(64, 3, 2, rng);
        auto phi = GaussianSensing::generate(48, 64, 12);
        Rng nr(0);
        auto y = sign_measure(phi, x, 0.0, nr);
        BihtConfig cfg;
        cfg.k = 3;
        std::vector<double> init(64, 0.0);
        for (auto [pos, val] : x.entries) init[pos] = val;
        auto xh = biht_recover(y, phi, cfg, init);
        CHECK(xh == x.dense()); // no update happens; top-k of x is its support
    }

    SECTION("deterministic given seed and config") {
        double r1 = recovery_rate(64, 40, 2, 1.0, 50, 77);
        double r2 = recovery_rate(64, 40, 2, 1.0, 50, 77);
        CHECK(r1 == r2);
    }

    SECTION("monotone improvement with m at fixed (n, k, snr)") {
        double r30 = recovery_rate(64, 24, 2, 0.5, 400, 200);
        double r48 = recovery_rate(64, 48, 2, 0.5, 400, 201);
        double r96 = recovery_rate(64, 96, 2, 0.5, 400, 202);
        double slack = 3.0 * std::sqrt(0.25 / 400.0);
        CHECK(r48 >= r30 - slack);
        CHECK(r96 >= r48 - slack);
    }

    SECTION("reference operating point degrades sharply at low snr") {
        // aggregate sigma^2 = tau^2 / snr with tau^2 = 8 (matched-noise axis)
        double low = recovery_rate(511, 180, 5, 8.0 / db_to_linear(0.0), 60, 300);
        double high = recovery_rate(511, 180, 5, 8.0 / db_to_linear(24.0), 60, 301);
        CHECK(low < 0.1);
        CHECK(high > 0.9);
    }
}
