#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ccs/biht.hpp"
#include "ccs/cs_pipeline.hpp"
#include "ccs/errors.hpp"
#include "ccs/noise_theory.hpp"

namespace ccs {

enum class SnrConvention { elementwise, aggregate };

inline const char* to_string(SnrConvention c) {
    return c == SnrConvention::elementwise ? "elementwise" : "aggregate";
}

inline SnrConvention snr_convention_from_string(const std::string& s) {
    if (s == "elementwise") return SnrConvention::elementwise;
    if (s == "aggregate") return SnrConvention::aggregate;
    throw ConfigError("unknown snr convention '" + s + "'");
}

// Flat key-value experiment description; '#' starts a comment. The format
// round-trips losslessly through parse/serialize.
struct ExperimentConfig {
    int n = 511;
    int k = 5;
    std::uint32_t p = 2;
    int m = 180;
    std::vector<double> snr_grid_db; // ascending; +inf allowed as noiseless sentinel
    SnrConvention convention = SnrConvention::elementwise;
    int trials = 500;
    std::uint64_t master_seed = 0;
    std::vector<std::string> algorithms = {"coded"};
    std::string out = "results.csv";
    int workers = 1;
    double design_crossover = 0.02;
    bool timing = true;
    std::optional<double> stage1_snr_override_db; // mismatched-law mode

    bool operator==(const ExperimentConfig& o) const {
        return n == o.n && k == o.k && p == o.p && m == o.m && snr_grid_db == o.snr_grid_db &&
               convention == o.convention && trials == o.trials && master_seed == o.master_seed &&
               algorithms == o.algorithms && out == o.out && workers == o.workers &&
               design_crossover == o.design_crossover && timing == o.timing &&
               stage1_snr_override_db == o.stage1_snr_override_db;
    }

    void validate() const {
        if (trials < 1) throw ConfigError("trials must be >= 1");
        if (snr_grid_db.empty()) throw ConfigError("snr grid is empty");
        for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
            if (!(snr_grid_db[i - 1] <= snr_grid_db[i]))
                throw ConfigError("snr grid must be sorted ascending");
        if (algorithms.empty()) throw ConfigError("no algorithms selected");
        for (const auto& a : algorithms)
            if (a != "coded" && a != "biht") throw ConfigError("unknown algorithm '" + a + "'");
        if (workers < 1) throw ConfigError("workers must be >= 1");
    }
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_double_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace detail

inline std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "n " << c.n << "\n";
    os << "k " << c.k << "\n";
    os << "p " << c.p << "\n";
    os << "m " << c.m << "\n";
    os << "snr_db";
    for (double v : c.snr_grid_db) os << " " << detail::fmt_double(v);
    os << "\n";
    os << "snr_convention " << to_string(c.convention) << "\n";
    os << "trials " << c.trials << "\n";
    os << "master_seed " << c.master_seed << "\n";
    os << "algorithms";
    for (const auto& a : c.algorithms) os << " " << a;
    os << "\n";
    os << "out " << c.out << "\n";
    os << "workers " << c.workers << "\n";
    os << "design_crossover " << detail::fmt_double(c.design_crossover) << "\n";
    os << "timing " << (c.timing ? "on" : "off") << "\n";
    if (c.stage1_snr_override_db)
        os << "stage1_snr_override_db " << detail::fmt_double(*c.stage1_snr_override_db) << "\n";
    return os.str();
}

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    c.snr_grid_db.clear();
    c.algorithms.clear();
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "n") ls >> c.n;
        else if (key == "k") ls >> c.k;
        else if (key == "p") ls >> c.p;
        else if (key == "m") ls >> c.m;
        else if (key == "snr_db") {
            std::string tok;
            while (ls >> tok) {
                try {
                    c.snr_grid_db.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw ConfigError("bad snr_db value '" + tok + "'");
                }
            }
        } else if (key == "snr_convention") {
            std::string v;
            ls >> v;
            c.convention = snr_convention_from_string(v);
        } else if (key == "trials") ls >> c.trials;
        else if (key == "master_seed") ls >> c.master_seed;
        else if (key == "algorithms") {
            std::string a;
            while (ls >> a) c.algorithms.push_back(a);
        } else if (key == "out") ls >> c.out;
        else if (key == "workers") ls >> c.workers;
        else if (key == "design_crossover") ls >> c.design_crossover;
        else if (key == "timing") {
            std::string v;
            ls >> v;
            c.timing = (v == "on" || v == "1" || v == "true");
        } else if (key == "stage1_snr_override_db") {
            double v;
            ls >> v;
            c.stage1_snr_override_db = v;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    if (c.algorithms.empty()) c.algorithms = {"coded"};
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

// Wilson score interval; always contains the point estimate
inline std::pair<double, double> wilson_interval(int successes, int trials) {
    const double z = 1.959963984540054; // 95%
    double n = trials;
    double ph = successes / n;
    double z2 = z * z;
    double den = 1.0 + z2 / n;
    double center = (ph + z2 / (2.0 * n)) / den;
    double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / den;
    double lo = center - half, hi = center + half;
    lo = std::min(std::max(lo, 0.0), ph); // containment survives rounding
    hi = std::max(std::min(hi, 1.0), ph);
    return {lo, hi};
}

struct ResultRow {
    std::string algorithm;
    double snr_db = 0.0;
    int trials = 0;
    int successes = 0;
    double rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_decode_ms = 0.0;
};

inline std::string csv_header() {
    return "algorithm,snr_db,trials,successes,rate,ci_lo,ci_hi,mean_decode_ms";
}

inline std::string csv_line(const ResultRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%.6f,%.6f,%.6f,%.3f", r.algorithm.c_str(),
                  detail::fmt_double_short(r.snr_db).c_str(), r.trials, r.successes, r.rate,
                  r.ci_lo, r.ci_hi, r.mean_decode_ms);
    return buf;
}

// rows are staged into <path>.partial and renamed on completion, so an
// interrupted run leaves a visibly incomplete file behind
inline void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::string partial = path + ".partial";
    {
        std::ofstream out(partial, std::ios::trunc);
        if (!out) throw IoError("cannot open output file '" + partial + "'");
        out << csv_header() << "\n";
        for (const auto& r : rows) {
            out << csv_line(r) << "\n";
            out.flush();
        }
        if (!out) throw IoError("write failed for '" + partial + "'");
    }
    if (std::rename(partial.c_str(), path.c_str()) != 0)
        throw IoError("cannot move '" + partial + "' into place");
}

namespace detail {

constexpr std::uint64_t kAlgoCoded = 1;
constexpr std::uint64_t kAlgoBiht = 2;

struct TrialOutcome {
    std::uint8_t success = 0;
    double decode_ms = 0.0;
};

// element-wise linear SNR for a grid value under the configured convention
inline double elementwise_snr(double snr_db, SnrConvention conv, int m) {
    double lin = db_to_linear(snr_db);
    if (std::isinf(lin)) return lin;
    return conv == SnrConvention::aggregate ? lin * m : lin;
}

inline TrialOutcome coded_trial(const ExperimentConfig& cfg, const SensingDesign& design,
                                const ChannelLaw& law, const NoiseModel& noise,
                                std::size_t snr_index, int trial) {
    Rng rng = Rng::substream(cfg.master_seed, kAlgoCoded, snr_index, trial);
    SparseSignal x = random_sparse_signal(cfg.n, cfg.k, cfg.p, rng);
    MeasurementVector y = sense(x, design, noise, rng);
    auto t0 = std::chrono::steady_clock::now();
    auto [xhat, diag] = decode(y, design, law);
    auto t1 = std::chrono::steady_clock::now();
    TrialOutcome out;
    out.success = (xhat == x) ? 1 : 0;
    out.decode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return out;
}

inline TrialOutcome biht_trial(const ExperimentConfig& cfg, double sigma_sq,
                               std::size_t snr_index, int trial) {
    Rng rng = Rng::substream(cfg.master_seed, kAlgoBiht, snr_index, trial);
    SparseSignal x = random_sparse_signal(cfg.n, cfg.k, cfg.p, rng);
    GaussianSensing phi = GaussianSensing::generate(cfg.m, cfg.n, rng.next_u64());
    std::vector<int> signs = sign_measure(phi, x, sigma_sq, rng);
    BihtConfig bc;
    bc.k = cfg.k;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::uint8_t> xhat = biht_recover(signs, phi, bc);
    auto t1 = std::chrono::steady_clock::now();
    TrialOutcome out;
    out.success = (xhat == x.dense()) ? 1 : 0;
    out.decode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return out;
}

} // namespace detail

// Runs the configured Monte Carlo sweep. Trials are keyed by
// (master_seed, algorithm, snr index, trial index), so the output is
// byte-identical for any worker count.
inline std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    bool want_coded = false, want_biht = false;
    for (const auto& a : cfg.algorithms) {
        want_coded |= (a == "coded");
        want_biht |= (a == "biht");
    }
    if (want_biht && cfg.p != 2)
        throw ConfigError("the biht baseline is defined for binary signals (p = 2)");

    std::optional<SensingDesign> design;
    if (want_coded) design = build_design(cfg.n, cfg.k, cfg.p, cfg.m, cfg.design_crossover);
    double tau = ModulationSpec(cfg.p).tau;

    std::vector<ResultRow> rows;
    for (const auto& algo : cfg.algorithms) {
        for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
            double snr_db = cfg.snr_grid_db[si];
            double snr_elem = detail::elementwise_snr(snr_db, cfg.convention, cfg.m);
            NoiseModel noise = NoiseModel::from_elementwise_snr(tau, snr_elem, cfg.m);

            std::optional<ChannelLaw> law;
            if (algo == "coded") {
                double law_snr = snr_elem;
                if (cfg.stage1_snr_override_db)
                    law_snr = detail::elementwise_snr(*cfg.stage1_snr_override_db,
                                                      cfg.convention, cfg.m);
                law = ChannelLaw(cfg.p, noise_pmf(cfg.p, law_snr).probs);
            }

            std::vector<detail::TrialOutcome> outcomes(cfg.trials);
            auto run_range = [&](int begin, int stride) {
                for (int t = begin; t < cfg.trials; t += stride) {
                    outcomes[t] = (algo == "coded")
                                      ? detail::coded_trial(cfg, *design, *law, noise, si, t)
                                      : detail::biht_trial(cfg, noise.sigma_sq, si, t);
                }
            };
            int w = std::min(cfg.workers, cfg.trials);
            if (w <= 1) {
                run_range(0, 1);
            } else {
                std::vector<std::thread> pool;
                for (int i = 0; i < w; ++i) pool.emplace_back(run_range, i, w);
                for (auto& th : pool) th.join();
            }

            ResultRow row;
            row.algorithm = algo;
            row.snr_db = snr_db;
            row.trials = cfg.trials;
            double ms = 0.0;
            for (const auto& o : outcomes) {
                row.successes += o.success;
                ms += o.decode_ms;
            }
            row.rate = static_cast<double>(row.successes) / cfg.trials;
            auto [lo, hi] = wilson_interval(row.successes, cfg.trials);
            row.ci_lo = lo;
            row.ci_hi = hi;
            row.mean_decode_ms = cfg.timing ? ms / cfg.trials : 0.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Theory report (element-wise SNR throughout)
// ---------------------------------------------------------------------------

struct TheoryReport {
    std::uint32_t p = 2;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double snr_db = 0.0;
    QuantizedNoisePmf pmf;
    double entropy = 0.0;
    bool achievable = false;
    std::int64_t m_required = 0;
    std::optional<RateFeasibility> feasibility; // when a design m is supplied
    std::int64_t m1 = 0;
};

inline TheoryReport make_theory_report(std::uint64_t n, std::uint64_t k, std::uint32_t p,
                                       double snr_db, std::optional<int> m = std::nullopt) {
    TheoryReport r;
    r.p = p;
    r.n = n;
    r.k = k;
    r.snr_db = snr_db;
    double snr = db_to_linear(snr_db);
    r.pmf = noise_pmf(p, snr);
    r.entropy = entropy_p(r.pmf);
    std::uint32_t s = degree_for_length(n, p);
    r.m1 = static_cast<std::int64_t>(2 * k * s);
    try {
        r.m_required = sufficient_m(n, k, p, snr);
        r.achievable = true;
    } catch (const Unachievable&) {
        r.achievable = false;
    }
    if (m) r.feasibility = rate_feasible(r.m1, *m, p, snr);
    return r;
}

inline std::string format_theory_report(const TheoryReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "p = " << r.p << ", n = " << r.n << ", k = " << r.k << ", element-wise SNR = "
       << detail::fmt_double_short(r.snr_db) << " dB\n";
    for (std::uint32_t j = 0; j < r.p; ++j)
        os << "P(Z = " << j << ") = " << r.pmf.probs[j] << "\n";
    os << "H_p(Z) = " << r.entropy << "\n";
    if (r.achievable)
        os << "sufficient m >= " << r.m_required << "\n";
    else
        os << "sufficient m: unachievable (H_p(Z) >= 1)\n";
    if (r.feasibility) {
        os << "design rate m1/m feasible: " << (r.feasibility->feasible ? "yes" : "no")
           << " (margin " << r.feasibility->margin << ")\n";
    }
    return os.str();
}

} // namespace ccs
