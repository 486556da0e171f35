// Compares the serial reference implementations against the OpenMP kernels
// on the two heavy workloads: the integer envelope search and the Monte
// Carlo rate estimate. Results must agree exactly; only the wall time may
// differ.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "repeaterlab/envelope.hpp"
#include "repeaterlab/stochastic.hpp"

using namespace repeaterlab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void bench_envelope(const ChannelParams& ch, const HardwareParams& hw) {
    std::printf("envelope search, L = 100..800 km step 100, 2 dB switches\n");
    std::printf("%10s %14s %14s %9s\n", "L (km)", "serial (s)", "openmp (s)",
                "speedup");
    for (double length = 100.0; length <= 800.0; length += 100.0) {
        auto t0 = std::chrono::steady_clock::now();
        const EnvelopePoint a =
            exact_envelope_serial(ch, hw, length, LossModel::switch_loss);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const EnvelopePoint b =
            exact_envelope(ch, hw, length, LossModel::switch_loss);
        const double tp = seconds_since(t0);
        if (a.rate != b.rate || a.n_opt != b.n_opt || a.m_opt != b.m_opt) {
            std::fprintf(stderr, "mismatch at L=%g\n", length);
            std::exit(1);
        }
        std::printf("%10.0f %14.4f %14.4f %8.2fx\n", length, ts, tp,
                    tp > 0.0 ? ts / tp : 0.0);
    }
}

void bench_simulation(const ChannelParams& ch, const HardwareParams& hw) {
    const RepeaterConfig cfg{4, 10};
    std::printf("\nMonte Carlo rate, n=4, m=10, L=100 km\n");
    std::printf("%10s %14s %14s %9s\n", "trials", "serial (s)", "openmp (s)",
                "speedup");
    for (long long trials : {100000LL, 1000000LL, 4000000LL}) {
        ChannelParams at = ch;
        at.length_km = 100.0;
        auto t0 = std::chrono::steady_clock::now();
        const RateEstimate a = simulate_rate_serial(at, hw, cfg,
                                                    LossModel::ideal,
                                                    {7, trials, 1});
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const RateEstimate b =
            simulate_rate(at, hw, cfg, LossModel::ideal, {7, trials, 0});
        const double tp = seconds_since(t0);
        if (a.delivered != b.delivered) {
            std::fprintf(stderr, "mismatch at %lld trials\n", trials);
            std::exit(1);
        }
        std::printf("%10lld %14.4f %14.4f %8.2fx\n", trials, ts, tp,
                    tp > 0.0 ? ts / tp : 0.0);
    }
}

} // namespace

int main() {
    ChannelParams ch;
    ch.alpha_db = 0.15;
    HardwareParams hw;
    hw.tau_s = 50e-9;
    hw.channels = 1;
    hw.mu = 0.405;
    hw.q = 0.255;
    hw.lambda_t = db_to_transmissivity(2.0);

    bench_envelope(ch, hw);
    hw.lambda_t = 1.0;
    bench_simulation(ch, hw);
    return 0;
}
