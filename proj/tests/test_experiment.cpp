#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sys/wait.h>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccs/experiment.hpp"

using namespace ccs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(CCS_CLI_PATH) + " " + args;
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "ccs_test_experiment";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config round trips losslessly") {
    ExperimentConfig c;
    c.n = 63;
    c.k = 2;
    c.p = 2;
    c.m = 32;
    c.snr_grid_db = {-3.0, 0.0, 4.5, std::numeric_limits<double>::infinity()};
    c.convention = SnrConvention::aggregate;
    c.trials = 77;
    c.master_seed = 123456789;
    c.algorithms = {"coded", "biht"};
    c.out = "x.csv";
    c.workers = 3;
    c.design_crossover = 0.015;
    c.timing = false;
    c.stage1_snr_override_db = 12.25;

    auto text = serialize_config(c);
    auto parsed = parse_config(text);
    CHECK(parsed == c);
    CHECK(serialize_config(parsed) == text);

    SECTION("comments and blank lines ignored") {
        auto with_noise = "# header comment\n\n" + text + "\n# trailing\n";
        CHECK(parse_config(with_noise) == c);
    }

    SECTION("unknown keys rejected") {
        CHECK_THROWS_AS(parse_config("bogus_key 1\n"), ConfigError);
    }

    SECTION("validation catches bad grids") {
        ExperimentConfig bad = c;
        bad.snr_grid_db = {3.0, -1.0};
        CHECK_THROWS_AS(bad.validate(), ConfigError);
        bad = c;
        bad.trials = 0;
        CHECK_THROWS_AS(bad.validate(), ConfigError);
        bad = c;
        bad.algorithms = {"omp"};
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    }
}

TEST_CASE("wilson intervals") {
    SECTION("frozen reference values") {
        auto [lo, hi] = wilson_interval(50, 100);
        CHECK(lo == Catch::Approx(0.4038315303659956).epsilon(1e-12));
        CHECK(hi == Catch::Approx(0.5961684696340044).epsilon(1e-12));
        auto [lo0, hi0] = wilson_interval(0, 500);
        CHECK(lo0 == 0.0);
        CHECK(hi0 == Catch::Approx(0.0076243404615522).epsilon(1e-10));
        auto [lo1, hi1] = wilson_interval(500, 500);
        CHECK(lo1 == Catch::Approx(0.9923756595384478).epsilon(1e-10));
        CHECK(hi1 == 1.0);
    }

    SECTION("always contains the point estimate") {
        for (int n : {1, 10, 500})
            for (int s = 0; s <= n; s += std::max(1, n / 7)) {
                auto [lo, hi] = wilson_interval(s, n);
                double rate = static_cast<double>(s) / n;
                REQUIRE(lo <= rate + 1e-12);
                REQUIRE(hi >= rate - 1e-12);
            }
    }
}

TEST_CASE("csv schema") {
    ResultRow r;
    r.algorithm = "coded";
    r.snr_db = -3.0;
    r.trials = 500;
    r.successes = 250;
    r.rate = 0.5;
    r.ci_lo = 0.4;
    r.ci_hi = 0.6;
    r.mean_decode_ms = 1.234;
    CHECK(csv_header() == "algorithm,snr_db,trials,successes,rate,ci_lo,ci_hi,mean_decode_ms");
    CHECK(csv_line(r) == "coded,-3,500,250,0.500000,0.400000,0.600000,1.234");
}

TEST_CASE("sweep engine") {
    SECTION("noiseless sentinel recovers every trial") {
        ExperimentConfig c;
        c.n = 511;
        c.k = 5;
        c.m = 180;
        c.snr_grid_db = {std::numeric_limits<double>::infinity()};
        c.trials = 50;
        c.master_seed = 11;
        c.timing = false;
        auto rows = run_sweep(c);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].successes == 50);
        CHECK(rows[0].rate == 1.0);
    }

    SECTION("byte-identical rows across worker counts") {
        ExperimentConfig c;
        c.n = 63;
        c.k = 2;
        c.m = 32;
        c.snr_grid_db = {0.0, 6.0};
        c.convention = SnrConvention::aggregate;
        c.trials = 40;
        c.master_seed = 5;
        c.algorithms = {"coded", "biht"};
        c.timing = false;
        c.workers = 1;
        auto rows1 = run_sweep(c);
        c.workers = 2;
        auto rows2 = run_sweep(c);
        REQUIRE(rows1.size() == rows2.size());
        for (std::size_t i = 0; i < rows1.size(); ++i)
            REQUIRE(csv_line(rows1[i]) == csv_line(rows2[i]));
    }

    SECTION("repeat runs agree on everything but the timing column") {
        ExperimentConfig c;
        c.n = 63;
        c.k = 2;
        c.m = 32;
        c.snr_grid_db = {6.0};
        c.convention = SnrConvention::aggregate;
        c.trials = 30;
        c.master_seed = 21;
        c.timing = true;
        auto r1 = run_sweep(c);
        auto r2 = run_sweep(c);
        REQUIRE(r1.size() == r2.size());
        for (std::size_t i = 0; i < r1.size(); ++i) {
            CHECK(r1[i].algorithm == r2[i].algorithm);
            CHECK(r1[i].snr_db == r2[i].snr_db);
            CHECK(r1[i].successes == r2[i].successes);
            CHECK(r1[i].rate == r2[i].rate);
            CHECK(r1[i].ci_lo == r2[i].ci_lo);
            CHECK(r1[i].ci_hi == r2[i].ci_hi);
        }
    }

    SECTION("mismatched stage-1 law mode runs") {
        ExperimentConfig c;
        c.n = 63;
        c.k = 1;
        c.m = 16;
        c.snr_grid_db = {20.0};
        c.trials = 20;
        c.stage1_snr_override_db = 14.0;
        c.timing = false;
        auto rows = run_sweep(c);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].trials == 20);
    }

    SECTION("rate-infeasible configs surface as RateInfeasible") {
        ExperimentConfig c;
        c.n = 511;
        c.k = 5;
        c.m = 80;
        c.snr_grid_db = {0.0};
        CHECK_THROWS_AS(run_sweep(c), RateInfeasible);
    }
}

TEST_CASE("theory report") {
    SECTION("noiseless reference point") {
        auto r = make_theory_report(511, 5, 2, std::numeric_limits<double>::infinity());
        CHECK(r.achievable);
        CHECK(r.m_required == 90);
        auto text = format_theory_report(r);
        CHECK(text.find("sufficient m >= 90") != std::string::npos);
    }

    SECTION("k = 0 needs nothing") {
        auto r = make_theory_report(511, 0, 2, 10.0);
        CHECK(r.m_required == 0);
    }

    SECTION("the sigma_N = 0.5 operating point") {
        auto r = make_theory_report(511, 5, 2, linear_to_db(16.0), 180);
        CHECK(r.entropy == Catch::Approx(0.8984248787).epsilon(1e-6));
        CHECK(r.m_required == 887);
        REQUIRE(r.feasibility.has_value());
        CHECK_FALSE(r.feasibility->feasible);
    }
}

TEST_CASE("cli surface") {
    fs::path dir = temp_dir();

    SECTION("design dump is idempotent and echoes the header") {
        fs::path cfg = dir / "ref.cfg";
        std::ofstream(cfg) << "n 511\nk 5\np 2\nm 180\nsnr_db 0\ntrials 1\n";
        fs::path out1 = dir / "d1.txt", out2 = dir / "d2.txt";
        REQUIRE(run_cli("design --config " + cfg.string() + " --out " + out1.string()) == 0);
        REQUIRE(run_cli("design --config " + cfg.string() + " --out " + out2.string()) == 0);
        auto t1 = slurp(out1);
        CHECK(t1 == slurp(out2));
        CHECK(t1.find("n 511") != std::string::npos);
        CHECK(t1.find("m 180") != std::string::npos);
        CHECK(t1.find("k_max 5") != std::string::npos);
        CHECK(t1.find("p 2") != std::string::npos);
    }

    SECTION("infeasible design exits with code 2") {
        fs::path cfg = dir / "bad.cfg";
        std::ofstream(cfg) << "n 511\nk 5\np 2\nm 80\nsnr_db 0\ntrials 1\n";
        CHECK(run_cli("design --config " + cfg.string() + " --out /dev/null 2>/dev/null") == 2);
    }

    SECTION("io failure exits with code 3") {
        fs::path cfg = dir / "io.cfg";
        std::ofstream(cfg) << "n 63\nk 1\np 2\nm 16\nsnr_db inf\ntrials 2\n";
        CHECK(run_cli("simulate --config " + cfg.string() +
                      " --out /nonexistent-dir/x.csv 2>/dev/null") == 3);
    }

    SECTION("one-trial compare smoke run finishes within ten seconds") {
        fs::path cfg = dir / "smoke.cfg";
        std::ofstream(cfg) << "n 63\nk 2\np 2\nm 32\nsnr_db 12\nsnr_convention aggregate\n"
                           << "trials 1\nmaster_seed 3\n";
        fs::path out = dir / "smoke.csv";
        auto t0 = std::chrono::steady_clock::now();
        REQUIRE(run_cli("compare --config " + cfg.string() + " --out " + out.string() +
                        " --no-timing") == 0);
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(secs < 10.0);
        auto text = slurp(out);
        CHECK(text.find(csv_header()) == 0);
        CHECK(text.find("coded,") != std::string::npos);
        CHECK(text.find("biht,") != std::string::npos);
        CHECK_FALSE(fs::exists(out.string() + ".partial"));
    }

    SECTION("theory subcommand prints the bound") {
        REQUIRE(run_cli("theory --n 511 --k 5 --p 2 --snr-db inf > " +
                        (dir / "th.txt").string()) == 0);
        CHECK(slurp(dir / "th.txt").find("sufficient m >= 90") != std::string::npos);
    }
}
