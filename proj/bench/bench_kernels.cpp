// Times each parallel kernel against its serial reference and checks that
// the outputs match bit for bit. Also times a short campaign at one worker
// versus the full complement.

#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "beamsense/harness.hpp"
#include "beamsense/kernels.hpp"

using namespace beamsense;

namespace {

double now_s() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return static_cast<double>(clock()) / CLOCKS_PER_SEC;
#endif
}

template <typename F>
double time_best_of(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_s();
        fn();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx   %s\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif
    Rng rng(2024);

    {
        const int n_rx = 64, n_tx = 128;
        cmat h(n_rx, n_tx);
        for (int i = 0; i < n_rx; ++i)
            for (int j = 0; j < n_tx; ++j) h(i, j) = rng.cnormal();
        const cmat tx = dft_codebook(Ula{n_tx, 0.5, 0.0}).beams;
        const cmat rx = dft_codebook(Ula{n_rx, 0.5, 0.0}).beams;
        cmat gs, gp;
        const double ts = time_best_of([&] { gs = kernels::beam_gain_matrix_serial(h, tx, rx); }, 5);
        const double tp = time_best_of([&] { gp = kernels::beam_gain_matrix(h, tx, rx); }, 5);
        report("beam_gain_matrix 64x128", ts, tp, (gs - gp).cwiseAbs().maxCoeff() == 0.0);
    }

    {
        const Ula array{128, 0.5, 0.0};
        cmat snaps(array.n, 256);
        for (int i = 0; i < array.n; ++i)
            for (int s = 0; s < 256; ++s) snaps(i, s) = rng.cnormal();
        cmat rs, rp;
        const double ts = time_best_of([&] { rs = kernels::sample_covariance_serial(snaps); }, 5);
        const double tp = time_best_of([&] { rp = kernels::sample_covariance(snaps); }, 5);
        report("sample_covariance 128x256", ts, tp, (rs - rp).cwiseAbs().maxCoeff() == 0.0);

        Eigen::VectorXd grid(512);
        for (int g = 0; g < 512; ++g) grid(g) = -0.5 * kPi + kPi * g / 511.0;
        Eigen::VectorXd ps, pp;
        const double bs = time_best_of([&] { ps = kernels::bartlett_spectrum_serial(rs, array, grid); }, 5);
        const double bp = time_best_of([&] { pp = kernels::bartlett_spectrum(rs, array, grid); }, 5);
        report("bartlett_spectrum 128/512", bs, bp, (ps - pp).cwiseAbs().maxCoeff() == 0.0);

        Eigen::VectorXd power = ps.cwiseMax(0.0);
        cmat cs, cp;
        const double xs = time_best_of(
            [&] { cs = kernels::power_profile_covariance_serial(power, grid, array); }, 5);
        const double xp =
            time_best_of([&] { cp = kernels::power_profile_covariance(power, grid, array); }, 5);
        report("power_profile_cov 512->128", xs, xp, (cs - cp).cwiseAbs().maxCoeff() == 0.0);
    }

    {
        ExperimentConfig cfg;
        cfg.trials = 24;
        cfg.nlos_only = false;
        cfg.strategies = {"exhaustive", "position-gnss", "aps"};

        ExperimentConfig serial = cfg;
        serial.threads = 1;
        CampaignResult r1, rn;
        const double ts = time_best_of([&] { r1 = run_campaign(serial); }, 1);
        const double tp = time_best_of([&] { rn = run_campaign(cfg); }, 1);
        report("campaign 24 trials", ts, tp, results_equal(r1, rn));
    }
    return 0;
}
