// beamsense command line: overhead table, Monte Carlo campaign, single-drop
// APS export, and the invariant suite.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "beamsense/errors.hpp"
#include "beamsense/harness.hpp"

namespace {

using namespace beamsense;

ExperimentConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return ExperimentConfig{};
    return load_experiment_config(config_path);
}

int cmd_overhead(const std::string& config_path, int drops, double range_min, double range_max,
                 std::uint64_t seed, const std::string& out_dir) {
    SweepConfig sweep;
    sweep.drops = drops;
    sweep.range_min_m = range_min;
    sweep.range_max_m = range_max;
    sweep.seed = seed;
    if (!config_path.empty()) {
        const ExperimentConfig cfg = load_experiment_config(config_path);
        sweep.radar = cfg.radar;
        sweep.gnss_radius_m = cfg.gnss_radius_m;
        sweep.vehicle_array_antennas = cfg.comm.vehicle_array_antennas;
        sweep.vehicle_array_count = cfg.comm.vehicle_array_count;
        sweep.spacing_wavelengths = cfg.comm.spacing_wavelengths;
    }

    const std::vector<OverheadRow> rows = overhead_table(sweep);
    std::printf("%-12s %12s %16s\n", "strategy", "mean_pairs", "training_ms");
    for (const OverheadRow& r : rows)
        std::printf("%-12s %12.6g %16.6g\n", r.strategy.c_str(), r.mean_pair_count,
                    r.training_time_ms);

    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + out_dir);
        const std::string path = out_dir + "/overhead.csv";
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (!f) throw IoError("cannot open for writing: " + path);
        std::fprintf(f, "strategy,mean_pairs,training_ms\n");
        for (const OverheadRow& r : rows)
            std::fprintf(f, "%s,%.6g,%.6g\n", r.strategy.c_str(), r.mean_pair_count,
                         r.training_time_ms);
        std::fclose(f);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int cmd_campaign(ExperimentConfig cfg, const std::string& out_dir, const std::string& format) {
    const CampaignResult result = run_campaign(cfg);
    std::printf("%-16s %8s %12s %12s %14s\n", "strategy", "success%", "mean_pairs", "time_ms",
                "mean_gap_db");
    for (const StrategySummary& s : result.summary)
        std::printf("%-16s %8.6g %12.6g %12.6g %14.6g\n", s.strategy.c_str(), s.success_pct,
                    s.mean_pairs, s.mean_time_ms, s.mean_snr_gap_db);
    std::printf("trials %d, resamples %lld\n", cfg.trials, result.total_resamples);
    if (!out_dir.empty()) {
        emit_results(result, format, out_dir);
        std::printf("wrote %s/%s\n", out_dir.c_str(),
                    format == "csv" ? "summary.csv, trials.csv" : "results.json");
    }
    return 0;
}

int cmd_aps_demo(const ExperimentConfig& cfg, double range_min, double range_max,
                 const std::string& out_dir) {
    const ApsDemo demo = run_aps_demo(cfg, range_min, range_max);
    std::printf("drop seed %llu, range %.6g m\n",
                static_cast<unsigned long long>(demo.drop_seed), demo.range_m);
    std::printf("peak offset %.6g deg, correlation %.6g\n",
                demo.similarity.peak_offset_rad * 180.0 / kPi, demo.similarity.correlation);
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + out_dir);
        write_aps_csv(demo.radar_aps, out_dir + "/radar_aps.csv");
        write_aps_csv(demo.comm_aps, out_dir + "/comm_aps.csv");
        std::printf("wrote %s/radar_aps.csv, %s/comm_aps.csv\n", out_dir.c_str(),
                    out_dir.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensing-aided mmWave beam alignment simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format = "csv";

    auto* overhead_cmd =
        app.add_subcommand("overhead", "Position-assisted pruning overhead table");
    int drops = 500;
    double range_min = 15.0, range_max = 60.0;
    std::uint64_t overhead_seed = 11;
    overhead_cmd->add_option("--config", config_path, "JSON config file");
    overhead_cmd->add_option("--drops", drops, "Number of sweep drops");
    overhead_cmd->add_option("--range-min", range_min, "Minimum plan range, m");
    overhead_cmd->add_option("--range-max", range_max, "Maximum plan range, m");
    overhead_cmd->add_option("--seed", overhead_seed, "Sweep seed");
    overhead_cmd->add_option("--out", out_dir, "Output directory");

    auto* campaign_cmd = app.add_subcommand("campaign", "Monte Carlo strategy comparison");
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0, threads = 0;
    bool nlos_only = false, los_and_nlos = false;
    campaign_cmd->add_option("--config", config_path, "JSON config file");
    campaign_cmd->add_option("--seed", seed, "Campaign seed")->each([&](const std::string&) {
        seed_set = true;
    });
    campaign_cmd->add_option("--trials", trials, "Trial count");
    campaign_cmd->add_option("--threads", threads, "Worker threads (0 = default)");
    campaign_cmd->add_flag("--nlos-only", nlos_only, "Resample drops until NLOS");
    campaign_cmd->add_flag("--any-state", los_and_nlos, "Keep LOS and NLOS drops");
    campaign_cmd->add_option("--out", out_dir, "Output directory");
    campaign_cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    campaign_cmd->add_flag_callback("--dump-config", [&]() {
        std::cout << experiment_config_to_json(ExperimentConfig{}) << std::endl;
        std::exit(0);
    });

    auto* aps_cmd = app.add_subcommand("aps-demo", "Single-drop radar/comm APS export");
    double aps_min = 45.0, aps_max = 150.0;
    aps_cmd->add_option("--config", config_path, "JSON config file");
    aps_cmd->add_option("--seed", seed, "Drop seed")->each([&](const std::string&) {
        seed_set = true;
    });
    aps_cmd->add_option("--range-min", aps_min, "Minimum plan range, m");
    aps_cmd->add_option("--range-max", aps_max, "Maximum plan range, m");
    aps_cmd->add_option("--out", out_dir, "Output directory");

    auto* validate_cmd = app.add_subcommand("validate", "Run the invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (overhead_cmd->parsed())
            return cmd_overhead(config_path, drops, range_min, range_max, overhead_seed,
                                out_dir);
        if (campaign_cmd->parsed()) {
            ExperimentConfig cfg = load_or_default(config_path);
            if (seed_set) cfg.seed = seed;
            if (trials > 0) cfg.trials = trials;
            if (threads > 0) cfg.threads = threads;
            if (nlos_only) cfg.nlos_only = true;
            if (los_and_nlos) cfg.nlos_only = false;
            return cmd_campaign(cfg, out_dir, format);
        }
        if (aps_cmd->parsed()) {
            ExperimentConfig cfg = load_or_default(config_path);
            if (seed_set) cfg.seed = seed;
            return cmd_aps_demo(cfg, aps_min, aps_max, out_dir);
        }
        if (validate_cmd->parsed()) {
            const int failures = beamsense::run_validation(std::cout);
            std::printf("%s (%d failing checks)\n", failures == 0 ? "all checks passed" : "FAILED",
                        failures);
            return failures == 0 ? 0 : 1;
        }
    } catch (const beamsense::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const beamsense::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
