#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccs/lattice_modulation.hpp"
#include "ccs/rng.hpp"

using namespace ccs;

TEST_CASE("modulation maps symbols onto the Voronoi grid") {
    SECTION("zero symbol maps to zero") {
        ModulationSpec spec(2);
        auto w = modulate({0, 0, 0}, spec);
        for (auto i : w.idx) CHECK(i == 0);
    }

    SECTION("p = 2: symbol 1 lands on -tau/2") {
        ModulationSpec spec(2);
        REQUIRE(spec.tau == Catch::Approx(std::sqrt(8.0)));
        auto w = modulate({1}, spec);
        CHECK(w.idx[0] == -1);
        CHECK(w.real(0, spec) == Catch::Approx(-std::sqrt(2.0)));
    }

    SECTION("p = 3: symbols reduce to {0, +1, -1} grid indices") {
        ModulationSpec spec(3);
        REQUIRE(spec.tau == Catch::Approx(std::sqrt(12.0)));
        auto w = modulate({0, 1, 2}, spec);
        CHECK(w.idx == std::vector<std::int32_t>{0, 1, -1});
        // oracle: direct reduction of (tau/p)*c into [-tau/2, tau/2)
        for (std::uint32_t c = 0; c < 3; ++c) {
            double v = spec.step() * c;
            while (v >= spec.tau / 2) v -= spec.tau;
            CHECK(w.real(c, spec) == Catch::Approx(v));
        }
    }
}

TEST_CASE("average power meets the unit constraint") {
    auto identity = [](const std::vector<std::uint8_t>& m) { return m; };

    SECTION("p = 2 closed form is exactly 1") {
        ModulationSpec spec(2);
        CHECK(constellation_power(spec) == Catch::Approx(1.0));
        Rng rng(3);
        double est = average_power(spec, identity, 64, 2000, rng);
        CHECK(est == Catch::Approx(1.0).margin(0.02));
    }

    SECTION("all-zero codeword has zero power") {
        ModulationSpec spec(2);
        auto zero_enc = [](const std::vector<std::uint8_t>& m) {
            return std::vector<std::uint8_t>(m.size(), 0);
        };
        Rng rng(4);
        CHECK(average_power(spec, zero_enc, 16, 10, rng) == 0.0);
    }

    SECTION("p = 3 exhaustive constellation average is 8/9") {
        ModulationSpec spec(3);
        double expected = (0.0 + 2.0 * (spec.step() * spec.step())) / 3.0;
        CHECK(expected == Catch::Approx(8.0 / 9.0));
        CHECK(constellation_power(spec) == Catch::Approx(8.0 / 9.0));
        CHECK(constellation_power(spec) <= 1.0);
    }

    SECTION("the constraint holds for the first primes") {
        for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u})
            CHECK(constellation_power(ModulationSpec(p)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("sawtooth quantizer") {
    ModulationSpec spec(2);

    SECTION("fixed points and hand-reduced cases") {
        CHECK(sawtooth_quantize(0.0, spec) == 0.0);
        // 1.6 -> nearest multiple of sqrt(2) is sqrt(2) -> reduces to -sqrt(2)
        CHECK(quantize_index(1.6, spec) == -1);
        // -3.0 -> nearest multiple is -2 sqrt(2) -> reduces to 0
        CHECK(quantize_index(-3.0, spec) == 0);
    }

    SECTION("idempotent on grid values") {
        ModulationSpec s3(3);
        for (std::int32_t j : {-1, 0, 1}) {
            double v = j * s3.step();
            CHECK(quantize_index(v, s3) == j);
        }
    }

    SECTION("ties round toward +infinity") {
        // +tau/4 sits exactly between 0 and tau/2: rounds up to index 1 -> -1
        CHECK(quantize_index(spec.tau / 4.0, spec) == -1);
        CHECK(quantize_index(-spec.tau / 4.0, spec) == 0);
    }

    SECTION("periodicity with period tau") {
        Rng rng(9);
        for (int i = 0; i < 100000; ++i) {
            double r = (rng.next_double() - 0.5) * 40.0;
            REQUIRE(quantize_index(r + spec.tau, spec) == quantize_index(r, spec));
        }
    }
}

TEST_CASE("fold to field") {
    ModulationSpec spec(2);

    SECTION("grid values fold to symbols") {
        CHECK(fold_to_field(0.0, spec) == 0);
        CHECK(fold_to_field(-std::sqrt(2.0), spec) == 1);
    }

    SECTION("off-grid values rejected") {
        CHECK_THROWS_AS(fold_to_field(0.3, spec), NotOnGrid);
        CHECK_THROWS_AS(fold_to_field(std::sqrt(2.0), spec), NotOnGrid); // outside window
    }

    SECTION("round trip over every symbol") {
        for (std::uint32_t p : {2u, 3u, 5u}) {
            ModulationSpec sp(p);
            for (std::uint32_t c = 0; c < p; ++c) {
                auto w = modulate({static_cast<std::uint8_t>(c)}, sp);
                CHECK(fold_index(quantize_index(w.real(0, sp), sp), p) == c);
            }
        }
    }

    SECTION("round trip over random vectors") {
        ModulationSpec s3(3);
        Rng rng(11);
        for (int i = 0; i < 1000; ++i) {
            std::uint8_t c = static_cast<std::uint8_t>(rng.next_below(3));
            auto w = modulate({c}, s3);
            REQUIRE(fold_to_field(sawtooth_quantize(w.real(0, s3), s3), s3) == c);
        }
    }
}

TEST_CASE("shift identity under quantize-fold") {
    // fold(S_p(t + w)) = fold(t) + fold(S_p(w)) for grid values t
    for (std::uint32_t p : {2u, 3u}) {
        ModulationSpec spec(p);
        Rng rng(13 + p);
        for (int i = 0; i < 100000; ++i) {
            std::int32_t jt = signed_rep(static_cast<std::int64_t>(rng.next_below(2 * p)) - p, p);
            double t = jt * spec.step();
            double w = rng.next_gaussian() * 2.0;
            std::uint32_t lhs = fold_index(quantize_index(t + w, spec), p);
            std::uint32_t rhs = (fold_index(jt, p) + fold_index(quantize_index(w, spec), p)) % p;
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("superposition folds to the symbol sum") {
    // k lattice words summed in grid indices fold to the mod-p symbol sum
    for (std::uint32_t p : {2u, 3u}) {
        ModulationSpec spec(p);
        Rng rng(17 + p);
        for (int i = 0; i < 5000; ++i) {
            int m = 8, k = 3;
            std::vector<std::int64_t> acc(m, 0);
            std::vector<std::uint32_t> symsum(m, 0);
            for (int j = 0; j < k; ++j) {
                std::vector<std::uint8_t> cw(m);
                for (auto& c : cw) c = static_cast<std::uint8_t>(rng.next_below(p));
                std::uint32_t coeff = 1 + static_cast<std::uint32_t>(rng.next_below(p - 1));
                auto w = modulate(cw, spec);
                for (int t = 0; t < m; ++t) {
                    acc[t] += static_cast<std::int64_t>(w.idx[t]) * coeff;
                    symsum[t] = (symsum[t] + cw[t] * coeff) % p;
                }
            }
            for (int t = 0; t < m; ++t) {
                double r = acc[t] * spec.step();
                REQUIRE(fold_index(quantize_index(r, spec), p) == symsum[t]);
            }
        }
    }
}
