#include "beamsense/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "beamsense/errors.hpp"
#include "beamsense/kernels.hpp"

namespace beamsense {

namespace {

using nlohmann::json;

enum StreamPurpose : std::uint64_t {
    kStreamComm = 1,
    kStreamPassive = 2,
    kStreamGnss = 3,
    kStreamRadarPos = 4,
    kStreamTraining = 5,
};

constexpr int kResampleCap = 1000;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ (a * 0xA24BAED4963EE407ULL);
    h = splitmix64(s);
    s = h ^ (b * 0x9FB21C651E98DF25ULL);
    h = splitmix64(s);
    s = h ^ (c * 0xC2B2AE3D27D4EB4FULL);
    return splitmix64(s);
}

std::string g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double wilson_bound(double successes, double n, bool upper) {
    if (n <= 0) return 0.0;
    const double z = 1.959963984540054;  // 95%
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double margin = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return (center + (upper ? margin : -margin)) / denom;
}

double passive_noise_power(const PassiveRadarConfig& passive) {
    const double n0 = 1.380649e-23 * 290.0 * passive.bandwidth_hz *
                      std::pow(10.0, passive.noise_figure_db / 10.0);
    const double pt_w = std::pow(10.0, passive.tx_power_dbm / 10.0) * 1e-3;
    const double gain = std::pow(10.0, passive.processing_gain_db / 10.0);
    return n0 / (pt_w * gain);
}

std::vector<Ula> vehicle_arrays(const CommConfig& comm, double heading) {
    std::vector<Ula> arrays;
    arrays.reserve(static_cast<std::size_t>(comm.vehicle_array_count));
    for (int a = 0; a < comm.vehicle_array_count; ++a)
        arrays.push_back(Ula{comm.vehicle_array_antennas, comm.spacing_wavelengths,
                             wrap_angle(heading + 2.0 * kPi * a / comm.vehicle_array_count)});
    return arrays;
}

int facing_array(const std::vector<Ula>& arrays, const Vec2& from_xy, const Vec2& to_xy) {
    const double az = azimuth_of(to_xy - from_xy);
    int best = 0;
    double best_off = std::abs(wrap_angle(az - arrays[0].boresight));
    for (std::size_t a = 1; a < arrays.size(); ++a) {
        const double off = std::abs(wrap_angle(az - arrays[a].boresight));
        if (off < best_off) {
            best_off = off;
            best = static_cast<int>(a);
        }
    }
    return best;
}

std::vector<int> scope_rx_indices(const CommConfig& comm, std::optional<int> scope_array) {
    std::vector<int> idx;
    if (scope_array) {
        const int base = *scope_array * comm.vehicle_array_antennas;
        for (int k = 0; k < comm.vehicle_array_antennas; ++k) idx.push_back(base + k);
    } else {
        for (int k = 0; k < comm.vehicle_array_antennas * comm.vehicle_array_count; ++k)
            idx.push_back(k);
    }
    return idx;
}

TrialRecord run_trial(const ExperimentConfig& cfg, int trial) {
    TrialRecord rec;
    rec.trial = trial;

    Scene scene;
    std::vector<Path> comm_paths;
    int attempt = 0;
    for (;; ++attempt) {
        if (attempt > kResampleCap)
            throw CampaignError("trial " + std::to_string(trial) +
                                ": resample cap exceeded while searching for a usable drop");
        SceneConfig sc = cfg.scene;
        sc.seed = derive_seed(cfg.seed, 0xD409, static_cast<std::uint64_t>(trial),
                              static_cast<std::uint64_t>(attempt));
        try {
            scene = build_scene(sc);
        } catch (const InfeasibleDrop&) {
            continue;
        }
        Rng rng_comm = Rng::fork(cfg.seed, kStreamComm, static_cast<std::uint64_t>(trial),
                                 static_cast<std::uint64_t>(attempt));
        comm_paths = trace_paths(scene, scene.rsu_pose, scene.ego_array_pose,
                                 cfg.comm.carrier_hz, rng_comm);
        const ChannelState state = classify_state(comm_paths);
        if (comm_paths.empty()) continue;  // nothing to train against
        if (cfg.nlos_only && state == ChannelState::Los) continue;
        rec.state = state;
        break;
    }
    rec.resamples = attempt;
    rec.drop_seed = scene.drop_seed;

    const double heading = scene.ego().heading;
    const Vec2 ego_xy = scene.ego_array_pose.position.xy();
    const Vec2 rsu_xy = scene.rsu_pose.position.xy();

    const Ula tx_ula{cfg.comm.rsu_antennas, cfg.comm.spacing_wavelengths,
                     scene.rsu_pose.boresight};
    const std::vector<Ula> rx_arrays = vehicle_arrays(cfg.comm, heading);
    const Channel channel =
        assemble_stacked_channel(comm_paths, tx_ula, rx_arrays, cfg.comm.carrier_hz,
                                 scene.rsu_pose.boresight, scene.ego_array_pose.boresight);
    const Codebook cb_tx = dft_codebook(tx_ula);
    const Codebook cb_rx = stacked_codebook(rx_arrays);

    std::optional<int> scope_array;
    if (cfg.comm.rx_array_mode == "best_facing")
        scope_array = facing_array(rx_arrays, ego_xy, rsu_xy);
    const std::vector<int> scope_rx = scope_rx_indices(cfg.comm, scope_array);

    const CandidateSet exhaustive = cartesian_candidates(tx_ula.n, scope_rx);
    Rng rng_gt = Rng::fork(cfg.seed, kStreamTraining, static_cast<std::uint64_t>(trial), 0);
    const TrainingOutcome gt =
        run_training(channel, cb_tx, cb_rx, exhaustive, cfg.comm.tx_power_dbm,
                     cfg.comm.noise_power_dbm, rng_gt, false);
    rec.gt_tx = gt.best.tx;
    rec.gt_rx = gt.best.rx;

    for (const std::string& name : cfg.strategies) {
        CandidateSet cands;
        if (name == "exhaustive") {
            cands = exhaustive;
        } else if (name == "position-gnss" || name == "position-radar") {
            PositionEstimate est;
            if (name == "position-gnss") {
                Rng r = Rng::fork(cfg.seed, kStreamGnss, static_cast<std::uint64_t>(trial),
                                  static_cast<std::uint64_t>(attempt));
                est = gnss_estimate(ego_xy, cfg.gnss_radius_m, r);
            } else {
                Rng r = Rng::fork(cfg.seed, kStreamRadarPos, static_cast<std::uint64_t>(trial),
                                  static_cast<std::uint64_t>(attempt));
                est = rsu_radar_estimate(cfg.radar, ego_xy, scene.rsu_pose, r);
            }
            RxGeometry rxg{rx_arrays, scope_array};
            cands = position_candidates(est, rsu_xy, tx_ula, rxg, cfg.budget_symbols);
        } else if (name == "aps") {
            Rng r = Rng::fork(cfg.seed, kStreamPassive, static_cast<std::uint64_t>(trial),
                              static_cast<std::uint64_t>(attempt));
            const Ula passive_ula{cfg.passive.rsu_antennas, cfg.comm.spacing_wavelengths,
                                  scene.rsu_pose.boresight};
            const SpatialCovariance radar_cov = passive_radar_covariance(
                scene, scene.ego_radar_pose(), passive_ula, cfg.passive.carrier_hz, r,
                cfg.passive.snapshots, passive_noise_power(cfg.passive));
            const Aps radar_aps = estimate_aps(radar_cov, cfg.passive.grid_size);
            const SpatialCovariance comm_cov =
                translate_aps(radar_aps, tx_ula, cfg.comm.carrier_hz);
            cands = aps_candidates(comm_cov, cb_tx, scope_rx, cfg.budget_symbols);
        } else {
            throw ConfigError("unknown strategy: " + name);
        }

        Rng rng_train = Rng::fork(cfg.seed, kStreamTraining, static_cast<std::uint64_t>(trial),
                                  1 + static_cast<std::uint64_t>(attempt));
        const TrainingOutcome res =
            run_training(channel, cb_tx, cb_rx, cands, cfg.comm.tx_power_dbm,
                         cfg.comm.noise_power_dbm, rng_train, cfg.noisy_training);

        TrialStrategyRecord srec;
        srec.strategy = name;
        srec.pair_count = static_cast<long long>(cands.pairs.size());
        srec.chosen_tx = res.best.tx;
        srec.chosen_rx = res.best.rx;
        srec.success = res.best == gt.best;
        srec.snr_gap_db =
            srec.success ? 0.0
                         : std::max(0.0, 10.0 * std::log10(gt.noiseless_metric /
                                                           std::max(res.noiseless_metric,
                                                                    1e-300)));
        rec.strategies.push_back(std::move(srec));
    }
    return rec;
}

}  // namespace beamsense::<anonymous>

CampaignResult run_campaign(const ExperimentConfig& cfg) {
    cfg.validate();
    CampaignResult result;
    result.trials.resize(static_cast<std::size_t>(cfg.trials));

    int threads = cfg.threads;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;
#endif

    std::string error;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int t = 0; t < cfg.trials; ++t) {
        try {
            result.trials[static_cast<std::size_t>(t)] = run_trial(cfg, t);
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw CampaignError(error);

    for (const TrialRecord& rec : result.trials) result.total_resamples += rec.resamples;

    for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
        StrategySummary sum;
        sum.strategy = cfg.strategies[s];
        sum.trials = cfg.trials;
        double successes = 0.0, pairs = 0.0, gap = 0.0;
        for (const TrialRecord& rec : result.trials) {
            const TrialStrategyRecord& sr = rec.strategies[s];
            successes += sr.success ? 1.0 : 0.0;
            pairs += static_cast<double>(sr.pair_count);
            gap += sr.snr_gap_db;
        }
        const double n = static_cast<double>(cfg.trials);
        sum.success_pct = 100.0 * successes / n;
        sum.mean_pairs = pairs / n;
        sum.mean_time_ms = sum.mean_pairs * kSymbolDurationS * 1e3;
        sum.mean_snr_gap_db = gap / n;
        sum.wilson_lo_pct = 100.0 * wilson_bound(successes, n, false);
        sum.wilson_hi_pct = 100.0 * wilson_bound(successes, n, true);
        result.summary.push_back(std::move(sum));
    }
    return result;
}

namespace {

const char* state_name(ChannelState s) { return s == ChannelState::Los ? "LOS" : "NLOS"; }

ChannelState state_from_name(const std::string& s) {
    return s == "LOS" ? ChannelState::Los : ChannelState::Nlos;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace beamsense::<anonymous>

void emit_results(const CampaignResult& result, const std::string& format,
                  const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    if (format == "csv") {
        std::ostringstream summary;
        summary << "strategy,trials,success_pct,mean_pairs,mean_time_ms,mean_snr_gap_db,"
                   "wilson_lo_pct,wilson_hi_pct\n";
        for (const StrategySummary& s : result.summary)
            summary << s.strategy << ',' << s.trials << ',' << g6(s.success_pct) << ','
                    << g6(s.mean_pairs) << ',' << g6(s.mean_time_ms) << ','
                    << g6(s.mean_snr_gap_db) << ',' << g6(s.wilson_lo_pct) << ','
                    << g6(s.wilson_hi_pct) << '\n';
        write_file(out_dir + "/summary.csv", summary.str());

        std::ostringstream trials;
        trials << "trial,drop_seed,state,resamples,gt_tx,gt_rx,strategy,pair_count,chosen_tx,"
                  "chosen_rx,success,snr_gap_db\n";
        for (const TrialRecord& rec : result.trials)
            for (const TrialStrategyRecord& sr : rec.strategies)
                trials << rec.trial << ',' << rec.drop_seed << ',' << state_name(rec.state) << ','
                       << rec.resamples << ',' << rec.gt_tx << ',' << rec.gt_rx << ','
                       << sr.strategy << ',' << sr.pair_count << ',' << sr.chosen_tx << ','
                       << sr.chosen_rx << ',' << (sr.success ? 1 : 0) << ','
                       << g6(sr.snr_gap_db) << '\n';
        write_file(out_dir + "/trials.csv", trials.str());
    } else if (format == "json") {
        json root;
        root["total_resamples"] = result.total_resamples;
        root["summary"] = json::array();
        for (const StrategySummary& s : result.summary)
            root["summary"].push_back({{"strategy", s.strategy},
                                       {"trials", s.trials},
                                       {"success_pct", s.success_pct},
                                       {"mean_pairs", s.mean_pairs},
                                       {"mean_time_ms", s.mean_time_ms},
                                       {"mean_snr_gap_db", s.mean_snr_gap_db},
                                       {"wilson_lo_pct", s.wilson_lo_pct},
                                       {"wilson_hi_pct", s.wilson_hi_pct}});
        root["trials"] = json::array();
        for (const TrialRecord& rec : result.trials) {
            json jt = {{"trial", rec.trial},
                       {"drop_seed", rec.drop_seed},
                       {"state", state_name(rec.state)},
                       {"resamples", rec.resamples},
                       {"gt_tx", rec.gt_tx},
                       {"gt_rx", rec.gt_rx},
                       {"strategies", json::array()}};
            for (const TrialStrategyRecord& sr : rec.strategies)
                jt["strategies"].push_back({{"strategy", sr.strategy},
                                            {"pair_count", sr.pair_count},
                                            {"chosen_tx", sr.chosen_tx},
                                            {"chosen_rx", sr.chosen_rx},
                                            {"success", sr.success},
                                            {"snr_gap_db", sr.snr_gap_db}});
            root["trials"].push_back(std::move(jt));
        }
        write_file(out_dir + "/results.json", root.dump(2) + "\n");
    } else {
        throw ConfigError("unknown output format: " + format);
    }
}

CampaignResult load_result_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open result file: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw IoError("invalid result JSON in " + path + ": " + e.what());
    }
    CampaignResult result;
    result.total_resamples = root.at("total_resamples").get<long long>();
    for (const json& js : root.at("summary")) {
        StrategySummary s;
        s.strategy = js.at("strategy").get<std::string>();
        s.trials = js.at("trials").get<int>();
        s.success_pct = js.at("success_pct").get<double>();
        s.mean_pairs = js.at("mean_pairs").get<double>();
        s.mean_time_ms = js.at("mean_time_ms").get<double>();
        s.mean_snr_gap_db = js.at("mean_snr_gap_db").get<double>();
        s.wilson_lo_pct = js.at("wilson_lo_pct").get<double>();
        s.wilson_hi_pct = js.at("wilson_hi_pct").get<double>();
        result.summary.push_back(std::move(s));
    }
    for (const json& jt : root.at("trials")) {
        TrialRecord rec;
        rec.trial = jt.at("trial").get<int>();
        rec.drop_seed = jt.at("drop_seed").get<std::uint64_t>();
        rec.state = state_from_name(jt.at("state").get<std::string>());
        rec.resamples = jt.at("resamples").get<int>();
        rec.gt_tx = jt.at("gt_tx").get<int>();
        rec.gt_rx = jt.at("gt_rx").get<int>();
        for (const json& js : jt.at("strategies")) {
            TrialStrategyRecord sr;
            sr.strategy = js.at("strategy").get<std::string>();
            sr.pair_count = js.at("pair_count").get<long long>();
            sr.chosen_tx = js.at("chosen_tx").get<int>();
            sr.chosen_rx = js.at("chosen_rx").get<int>();
            sr.success = js.at("success").get<bool>();
            sr.snr_gap_db = js.at("snr_gap_db").get<double>();
            rec.strategies.push_back(std::move(sr));
        }
        result.trials.push_back(std::move(rec));
    }
    return result;
}

bool results_equal(const CampaignResult& a, const CampaignResult& b) {
    auto feq = [](double x, double y) { return g6(x) == g6(y); };
    if (a.total_resamples != b.total_resamples) return false;
    if (a.summary.size() != b.summary.size() || a.trials.size() != b.trials.size()) return false;
    for (std::size_t i = 0; i < a.summary.size(); ++i) {
        const StrategySummary& x = a.summary[i];
        const StrategySummary& y = b.summary[i];
        if (x.strategy != y.strategy || x.trials != y.trials) return false;
        if (!feq(x.success_pct, y.success_pct) || !feq(x.mean_pairs, y.mean_pairs) ||
            !feq(x.mean_time_ms, y.mean_time_ms) || !feq(x.mean_snr_gap_db, y.mean_snr_gap_db) ||
            !feq(x.wilson_lo_pct, y.wilson_lo_pct) || !feq(x.wilson_hi_pct, y.wilson_hi_pct))
            return false;
    }
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        const TrialRecord& x = a.trials[i];
        const TrialRecord& y = b.trials[i];
        if (x.trial != y.trial || x.drop_seed != y.drop_seed || x.state != y.state ||
            x.resamples != y.resamples || x.gt_tx != y.gt_tx || x.gt_rx != y.gt_rx)
            return false;
        if (x.strategies.size() != y.strategies.size()) return false;
        for (std::size_t s = 0; s < x.strategies.size(); ++s) {
            const TrialStrategyRecord& u = x.strategies[s];
            const TrialStrategyRecord& v = y.strategies[s];
            if (u.strategy != v.strategy || u.pair_count != v.pair_count ||
                u.chosen_tx != v.chosen_tx || u.chosen_rx != v.chosen_rx ||
                u.success != v.success || !feq(u.snr_gap_db, v.snr_gap_db))
                return false;
        }
    }
    return true;
}

SweepResult run_position_sweep(const SweepConfig& cfg) {
    // RSU panel at a road corner looking down the swept fan of drops.
    const Pose rsu{{0.0, -2.5, 5.0}, kPi / 6.0};
    const double lane_centers[4] = {2.5, 7.5, 12.5, 17.5};

    CommConfig comm;
    comm.rsu_antennas = cfg.rsu_antennas;
    comm.vehicle_array_antennas = cfg.vehicle_array_antennas;
    comm.vehicle_array_count = cfg.vehicle_array_count;
    comm.spacing_wavelengths = cfg.spacing_wavelengths;
    const Ula tx_ula{cfg.rsu_antennas, cfg.spacing_wavelengths, rsu.boresight};

    SweepResult result;
    result.gnss_counts.reserve(static_cast<std::size_t>(cfg.drops));
    result.radar_counts.reserve(static_cast<std::size_t>(cfg.drops));

    int radar_smaller = 0;
    for (int i = 0; i < cfg.drops; ++i) {
        const double range = cfg.drops == 1
                                 ? cfg.range_min_m
                                 : cfg.range_min_m + (cfg.range_max_m - cfg.range_min_m) * i /
                                                         (cfg.drops - 1);
        // Broadest lane whose lateral offset stays inside the drop range.
        int lane = 3;
        while (lane > 0 && lane_centers[lane] - rsu.position.y >= 0.95 * range) --lane;
        const double dy = lane_centers[lane] - rsu.position.y;
        const double dx = std::sqrt(std::max(0.0, range * range - dy * dy));
        const Vec2 ego_xy{rsu.position.x + dx, lane_centers[lane]};
        const double heading = lane < 2 ? 0.0 : kPi;
        const std::vector<Ula> arrays = vehicle_arrays(comm, heading);

        Rng rng_g = Rng::fork(cfg.seed, kStreamGnss, static_cast<std::uint64_t>(i));
        const PositionEstimate gnss = gnss_estimate(ego_xy, cfg.gnss_radius_m, rng_g);
        const RxGeometry rxg_g{arrays, facing_array(arrays, gnss.reported, rsu.position.xy())};
        const CandidateSet cg = position_candidates(gnss, rsu.position.xy(), tx_ula, rxg_g);

        Rng rng_r = Rng::fork(cfg.seed, kStreamRadarPos, static_cast<std::uint64_t>(i));
        const PositionEstimate radar = rsu_radar_estimate(cfg.radar, ego_xy, rsu, rng_r);
        const RxGeometry rxg_r{arrays, facing_array(arrays, radar.reported, rsu.position.xy())};
        const CandidateSet cr = position_candidates(radar, rsu.position.xy(), tx_ula, rxg_r);

        result.gnss_counts.push_back(static_cast<long long>(cg.pairs.size()));
        result.radar_counts.push_back(static_cast<long long>(cr.pairs.size()));
        if (cr.pairs.size() < cg.pairs.size()) ++radar_smaller;
    }

    double gsum = 0.0, rsum = 0.0;
    for (long long v : result.gnss_counts) gsum += static_cast<double>(v);
    for (long long v : result.radar_counts) rsum += static_cast<double>(v);
    result.mean_gnss_pairs = gsum / cfg.drops;
    result.mean_radar_pairs = rsum / cfg.drops;
    result.fraction_radar_smaller = static_cast<double>(radar_smaller) / cfg.drops;
    return result;
}

std::vector<OverheadRow> overhead_table(const SweepConfig& cfg) {
    const SweepResult sweep = run_position_sweep(cfg);
    const double exhaustive_pairs =
        static_cast<double>(cfg.rsu_antennas) * cfg.vehicle_array_antennas;
    auto row = [](const std::string& name, double pairs) {
        return OverheadRow{name, pairs, pairs * kSymbolDurationS * 1e3};
    };
    return {row("exhaustive", exhaustive_pairs), row("gnss", sweep.mean_gnss_pairs),
            row("rsu-radar", sweep.mean_radar_pairs)};
}

ApsDemo run_aps_demo(const ExperimentConfig& cfg, double min_range_m, double max_range_m) {
    for (int attempt = 0; attempt <= 2 * kResampleCap; ++attempt) {
        SceneConfig sc = cfg.scene;
        sc.seed = derive_seed(cfg.seed, 0xA9DE, 0, static_cast<std::uint64_t>(attempt));
        Scene scene;
        try {
            scene = build_scene(sc);
        } catch (const InfeasibleDrop&) {
            continue;
        }
        const double range = (scene.ego_array_pose.position.xy() - scene.rsu_pose.position.xy())
                                 .norm();
        if (range < min_range_m || range > max_range_m) continue;

        Rng rng_comm = Rng::fork(cfg.seed, kStreamComm, 0, static_cast<std::uint64_t>(attempt));
        const std::vector<Path> comm_paths = trace_paths(
            scene, scene.rsu_pose, scene.ego_array_pose, cfg.comm.carrier_hz, rng_comm);
        if (classify_state(comm_paths) != ChannelState::Los) continue;

        const Ula tx_ula{cfg.comm.rsu_antennas, cfg.comm.spacing_wavelengths,
                         scene.rsu_pose.boresight};

        // Passive pipeline for the radar side.
        Rng rng_p = Rng::fork(cfg.seed, kStreamPassive, 0, static_cast<std::uint64_t>(attempt));
        const Ula passive_ula{cfg.passive.rsu_antennas, cfg.comm.spacing_wavelengths,
                              scene.rsu_pose.boresight};
        const SpatialCovariance radar_cov = passive_radar_covariance(
            scene, scene.ego_radar_pose(), passive_ula, cfg.passive.carrier_hz, rng_p,
            cfg.passive.snapshots, passive_noise_power(cfg.passive));

        // Ideal departure-side covariance of the comm channel.
        cmat r_comm = cmat::Zero(tx_ula.n, tx_ula.n);
        for (const Path& p : comm_paths) {
            if (std::abs(p.aod_azimuth) >= 0.5 * kPi) continue;
            const cvec a = steering_vector_rel(tx_ula, p.aod_azimuth);
            r_comm.noalias() += std::norm(p.gain) * (a * a.adjoint());
        }

        ApsDemo demo;
        demo.radar_aps = estimate_aps(radar_cov, cfg.passive.grid_size);
        demo.comm_aps =
            estimate_aps(SpatialCovariance{r_comm, cfg.comm.carrier_hz, tx_ula},
                         cfg.passive.grid_size);
        demo.similarity = aps_similarity(demo.radar_aps, demo.comm_aps);
        demo.range_m = range;
        demo.drop_seed = scene.drop_seed;
        return demo;
    }
    throw CampaignError("no LOS drop found in the requested range window");
}

void write_aps_csv(const Aps& aps, const std::string& path) {
    std::ostringstream out;
    out << "angle_deg,power\n";
    for (Eigen::Index g = 0; g < aps.grid.size(); ++g)
        out << g6(aps.grid(g) * 180.0 / kPi) << ',' << g6(aps.power(g)) << '\n';
    write_file(path, out.str());
}

int run_validation(std::ostream& out) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& name) {
        out << (ok ? "ok   " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };

    // Overhead arithmetic.
    {
        const OverheadReport a = overhead(1024);
        const OverheadReport b = overhead(475);
        const OverheadReport c = overhead(32);
        check(std::abs(a.training_time_s - 4.864e-3) < 1e-12 &&
                  std::abs(b.training_time_s - 2.25625e-3) < 1e-12 &&
                  std::abs(c.training_time_s - 1.52e-4) < 1e-12,
              "overhead arithmetic (1024/475/32 pairs)");
    }

    // Scene determinism, non-overlap, containment.
    {
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
            SceneConfig sc;
            sc.seed = seed;
            const Scene s1 = build_scene(sc);
            const Scene s2 = build_scene(sc);
            ok = s1.ego_vehicle_index == s2.ego_vehicle_index &&
                 s1.vehicles.size() == s2.vehicles.size();
            for (std::size_t i = 0; ok && i < s1.vehicles.size(); ++i) {
                ok = s1.vehicles[i].box.center.x == s2.vehicles[i].box.center.x &&
                     s1.vehicles[i].box.center.y == s2.vehicles[i].box.center.y;
                for (std::size_t j = i + 1; ok && j < s1.vehicles.size(); ++j)
                    ok = !s1.vehicles[i].box.overlaps(s1.vehicles[j].box);
                ok = ok && std::abs(s1.vehicles[i].box.center.x) <= sc.canyon_length_m / 2 &&
                     s1.vehicles[i].box.center.y >= 0 &&
                     s1.vehicles[i].box.center.y <= sc.road_width_m;
            }
        }
        check(ok, "scene determinism, non-overlap, containment");
    }

    // Infeasible packing rejected.
    {
        SceneConfig sc;
        sc.canyon_length_m = 200.0;
        sc.lane_count = 1;
        sc.road_width_m = 5.0;
        sc.vehicle_count = 100;
        sc.truck_fraction = 0.0;
        bool threw = false;
        try {
            build_scene(sc);
        } catch (const InfeasibleDrop&) {
            threw = true;
        }
        check(threw, "infeasible drop rejected");
    }

    // DFT codebook orthonormality and completeness.
    {
        const Ula ula{64, 0.5, 0.0};
        const Codebook cb = dft_codebook(ula);
        const cmat gram = cb.beams.adjoint() * cb.beams;
        const double err = (gram - cmat::Identity(64, 64)).cwiseAbs().maxCoeff();
        Rng rng(123);
        double worst = 0.0;
        for (int i = 0; i < 32; ++i) {
            const double theta = rng.uniform(-0.5 * kPi, 0.5 * kPi);
            const cvec a = steering_vector_rel(ula, theta);
            const double total = (cb.beams.adjoint() * a).squaredNorm();
            worst = std::max(worst, std::abs(total - 64.0) / 64.0);
        }
        check(err < 1e-12 && worst < 1e-9, "DFT codebook Gram identity and completeness");
    }

    // APS nonnegativity and linearity on random PSD inputs.
    {
        Rng rng(77);
        const Ula ula{16, 0.5, 0.0};
        bool ok = true;
        for (int rep = 0; rep < 10 && ok; ++rep) {
            cmat x(16, 24);
            for (int i = 0; i < 16; ++i)
                for (int j = 0; j < 24; ++j) x(i, j) = rng.cnormal();
            const cmat r1 = kernels::sample_covariance(x);
            for (int i = 0; i < 16; ++i)
                for (int j = 0; j < 24; ++j) x(i, j) = rng.cnormal();
            const cmat r2 = kernels::sample_covariance(x);
            const SpatialCovariance c1{r1, 76e9, ula};
            const SpatialCovariance c2{r2, 76e9, ula};
            const double alpha = 2.75;
            const SpatialCovariance mix{alpha * r1 + r2, 76e9, ula};
            const Aps p1 = estimate_aps(c1, 128);
            const Aps p2 = estimate_aps(c2, 128);
            const Aps pm = estimate_aps(mix, 128);
            ok = p1.power.minCoeff() >= 0.0 && p2.power.minCoeff() >= 0.0;
            const Eigen::VectorXd expect = alpha * p1.power + p2.power;
            ok = ok && ((pm.power - expect).cwiseAbs().maxCoeff() <=
                        1e-9 * expect.cwiseAbs().maxCoeff());
        }
        check(ok, "APS nonnegative and linear in the covariance");
    }

    // translate_aps PSD.
    {
        Rng rng(99);
        const Ula comm{32, 0.5, 0.0};
        bool ok = true;
        for (int rep = 0; rep < 10 && ok; ++rep) {
            Aps aps;
            aps.grid.resize(64);
            aps.power.resize(64);
            for (int g = 0; g < 64; ++g) {
                aps.grid(g) = -0.5 * kPi + kPi * g / 63.0;
                aps.power(g) = rng.uniform();
            }
            const SpatialCovariance cov = translate_aps(aps, comm, 73e9);
            Eigen::SelfAdjointEigenSolver<cmat> eig(cov.r);
            ok = eig.eigenvalues().minCoeff() >= -1e-9 * cov.r.trace().real();
        }
        check(ok, "translated covariance is Hermitian PSD");
    }

    // Budget law.
    {
        Rng rng(5);
        const Ula ula{32, 0.5, 0.0};
        const Codebook cb = dft_codebook(ula);
        const SpatialCovariance cov{cmat::Identity(32, 32), 73e9, ula};
        bool ok = true;
        for (int rep = 0; rep < 20 && ok; ++rep) {
            const int n_rx = 1 + static_cast<int>(rng.uniform_int(16));
            std::vector<int> rx(static_cast<std::size_t>(n_rx));
            for (int k = 0; k < n_rx; ++k) rx[static_cast<std::size_t>(k)] = k;
            const int budget = n_rx + static_cast<int>(rng.uniform_int(512));
            const CandidateSet set = aps_candidates(cov, cb, rx, budget);
            const long long expect =
                static_cast<long long>(std::min(budget / n_rx, 32)) * n_rx;
            ok = static_cast<long long>(set.pairs.size()) == expect;
        }
        check(ok, "aps candidate budget law");
    }

    // Radar accuracy beats the 5 m GNSS radius out to 100 m.
    {
        const RadarSpec spec;
        const Pose rsu{{0.0, 0.0, 5.0}, 0.0};
        Rng rng(17);
        bool ok = true;
        for (double range = 5.0; range <= 100.0 && ok; range += 2.5) {
            const PositionEstimate est =
                rsu_radar_estimate(spec, Vec2{range, 0.0}, rsu, rng);
            ok = est.uncertainty_radius_m < 5.0;
        }
        check(ok, "radar uncertainty below GNSS radius for ranges <= 100 m");
    }

    // Subset consistency of noiseless training.
    {
        Rng rng(31);
        const Ula tx{32, 0.5, 0.0};
        const Ula rx{8, 0.5, 0.0};
        const Codebook cb_tx = dft_codebook(tx);
        const Codebook cb_rx = dft_codebook(rx);
        bool ok = true;
        for (int rep = 0; rep < 50 && ok; ++rep) {
            std::vector<Path> paths(1);
            paths[0].aod_azimuth = std::asin(rng.uniform(-0.95, 0.95));
            paths[0].aoa_azimuth = std::asin(rng.uniform(-0.95, 0.95));
            paths[0].gain = std::polar(1e-4, rng.uniform(0.0, 2.0 * kPi));
            paths[0].length_m = 10.0;
            const Channel ch = assemble_channel(paths, tx, rx, 73e9);
            const CandidateSet full = exhaustive_candidates(32, 8);
            const TrainingOutcome gt =
                run_training(ch, cb_tx, cb_rx, full, 30.0, -84.0, rng, false);
            CandidateSet pruned;
            pruned.strategy = Strategy::PositionAssisted;
            pruned.pairs.push_back(gt.best);
            for (int extra = 0; extra < 6; ++extra)
                pruned.pairs.push_back({static_cast<int>(rng.uniform_int(32)),
                                        static_cast<int>(rng.uniform_int(8))});
            const TrainingOutcome res =
                run_training(ch, cb_tx, cb_rx, pruned, 30.0, -84.0, rng, false);
            ok = res.best == gt.best;
        }
        check(ok, "noiseless training returns the best pair from any containing subset");
    }

    // Parallel kernels match the serial reference bit for bit.
    {
        Rng rng(41);
        cmat h(24, 48);
        for (int i = 0; i < 24; ++i)
            for (int j = 0; j < 48; ++j) h(i, j) = rng.cnormal();
        const Ula tx{48, 0.5, 0.0};
        const Ula rx{24, 0.5, 0.0};
        const cmat g1 = kernels::beam_gain_matrix(h, dft_codebook(tx).beams,
                                                  dft_codebook(rx).beams);
        const cmat g2 = kernels::beam_gain_matrix_serial(h, dft_codebook(tx).beams,
                                                         dft_codebook(rx).beams);
        bool ok = (g1 - g2).cwiseAbs().maxCoeff() == 0.0;

        cmat snaps(16, 40);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 40; ++j) snaps(i, j) = rng.cnormal();
        ok = ok && (kernels::sample_covariance(snaps) -
                    kernels::sample_covariance_serial(snaps))
                           .cwiseAbs()
                           .maxCoeff() == 0.0;
        check(ok, "parallel kernels bit-identical to serial reference");
    }

    return failures;
}

}  // namespace beamsense
