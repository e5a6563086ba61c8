// Command-line front end: design construction, Monte Carlo recovery sweeps,
// theory evaluation, and the coded-vs-BIHT comparison. Exit codes: 0 ok,
// 2 infeasible configuration, 3 I/O failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ccs/ccs.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> workers;
    std::string snr_convention;
    bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file");
    cmd->add_option("--seed", opts.seed, "master seed (overrides config)");
    cmd->add_option("--out", opts.out, "output path (overrides config)");
    cmd->add_option("--workers", opts.workers, "worker thread count (overrides config)");
    cmd->add_option("--snr-convention", opts.snr_convention,
                    "SNR axis convention: elementwise | aggregate")
        ->check(CLI::IsMember({"elementwise", "aggregate"}));
    cmd->add_flag("--no-timing", opts.no_timing,
                  "zero the mean_decode_ms column for byte-reproducible output");
}

ccs::ExperimentConfig resolve_config(const CommonOpts& opts) {
    ccs::ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = ccs::load_config(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (!opts.out.empty()) cfg.out = opts.out;
    if (opts.workers) cfg.workers = *opts.workers;
    if (!opts.snr_convention.empty())
        cfg.convention = ccs::snr_convention_from_string(opts.snr_convention);
    if (opts.no_timing) cfg.timing = false;
    return cfg;
}

int run_design(const CommonOpts& opts) {
    ccs::ExperimentConfig cfg = resolve_config(opts);
    ccs::SensingDesign design =
        ccs::build_design(cfg.n, cfg.k, cfg.p, cfg.m, cfg.design_crossover);
    std::string text = ccs::dump_design(design);
    if (cfg.out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(cfg.out, std::ios::trunc);
    if (!out) throw ccs::IoError("cannot open '" + cfg.out + "'");
    out << text;
    if (!out) throw ccs::IoError("write failed for '" + cfg.out + "'");
    std::cerr << "design written to " << cfg.out << "\n";
    return 0;
}

int run_sweep_cmd(const CommonOpts& opts, bool force_compare) {
    ccs::ExperimentConfig cfg = resolve_config(opts);
    if (force_compare) cfg.algorithms = {"coded", "biht"};
    auto rows = ccs::run_sweep(cfg);
    ccs::write_csv(rows, cfg.out);
    std::cerr << rows.size() << " rows written to " << cfg.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded compressive sensing simulator"};
    app.require_subcommand(1);

    CommonOpts design_opts, sim_opts, cmp_opts;
    auto* design_cmd = app.add_subcommand("design", "build and serialize a sensing design");
    add_common(design_cmd, design_opts);

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo recovery sweep, CSV output");
    add_common(sim_cmd, sim_opts);

    auto* cmp_cmd =
        app.add_subcommand("compare", "coded + BIHT on matched noise, one tagged CSV");
    add_common(cmp_cmd, cmp_opts);

    std::uint64_t th_n = 511, th_k = 5;
    std::uint32_t th_p = 2;
    double th_snr_db = 0.0;
    std::optional<int> th_m;
    auto* th_cmd = app.add_subcommand("theory", "quantized-noise law and measurement bound");
    th_cmd->add_option("--n", th_n, "signal dimension (p^s - 1)");
    th_cmd->add_option("--k", th_k, "sparsity level");
    th_cmd->add_option("--p", th_p, "quantization level (prime)");
    th_cmd->add_option("--snr-db", th_snr_db, "element-wise SNR in dB (inf for noiseless)")
        ->required();
    th_cmd->add_option("--m", th_m, "measurement count, reports rate feasibility");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design_cmd->parsed()) return run_design(design_opts);
        if (sim_cmd->parsed()) return run_sweep_cmd(sim_opts, false);
        if (cmp_cmd->parsed()) return run_sweep_cmd(cmp_opts, true);
        if (th_cmd->parsed()) {
            try {
                auto report = ccs::make_theory_report(th_n, th_k, th_p, th_snr_db, th_m);
                std::cout << ccs::format_theory_report(report);
            } catch (const ccs::Unachievable& e) {
                std::cout << "unachievable: " << e.what() << "\n";
            }
            return 0;
        }
    } catch (const ccs::RateInfeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ccs::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ccs::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
