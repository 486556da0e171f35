#include "repeaterlab/stochastic.hpp"

#include <cmath>
#include <vector>

#include "repeaterlab/rng.hpp"

namespace repeaterlab {

double delta1_analytic(double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("delta1_analytic requires p in (0,1]");
    return 2.0 * (1.0 - p) / ((2.0 - p) * p);
}

double protocol2_mean_x(double p_attempt, int channels, int m) {
    if (!(p_attempt > 0.0 && p_attempt <= 1.0))
        throw std::domain_error("protocol2_mean_x requires p in (0,1]");
    if (channels < 1 || m < 1)
        throw std::domain_error("protocol2_mean_x requires M >= 1, m >= 1");
    if (p_attempt == 1.0)
        return 0.0;
    const double fail_slot = std::pow(1.0 - p_attempt, channels);
    const double fail_block = std::pow(1.0 - p_attempt, channels * static_cast<double>(m));
    return fail_slot / (1.0 - fail_slot) -
           m * fail_block / (1.0 - fail_block);
}

namespace {

struct TrialSetup {
    double p_attempt = 0.0;
    double p_slot = 0.0;       // 1 - (1 - p_attempt)^M per time slot
    double q_eff = 0.0;        // per-swap probability for the chosen model
    double q_switch = 0.0;     // q * lambda_t^{log2 m}, decoherence excluded
    double lambda_mem = 1.0;
    int links = 1;             // n + 1
    int nodes = 0;             // n
    int m = 1;
    int channels = 1;
    double block_s = 0.0;      // m * tau
};

TrialSetup make_setup(const ChannelParams& ch, const HardwareParams& hw,
                      const RepeaterConfig& cfg, LossModel model) {
    const DerivedProbabilities d = link_success_prob(ch, hw, cfg);
    TrialSetup s;
    s.p_attempt = d.p_attempt;
    s.p_slot = -std::expm1(hw.channels * std::log1p(-d.p_attempt));
    s.q_eff = effective_swap_prob(hw, cfg.m, model);
    s.q_switch = effective_swap_prob(hw, cfg.m, LossModel::switch_loss);
    s.lambda_mem = hw.lambda_mem;
    s.links = cfg.n + 1;
    s.nodes = cfg.n;
    s.m = cfg.m;
    s.channels = hw.channels;
    s.block_s = cfg.m * hw.tau_s;
    return s;
}

RateEstimate finalize_rate(long long delivered, const SimConfig& sim,
                           double block_s) {
    RateEstimate est;
    est.delivered = delivered;
    est.trials = sim.trials;
    est.delivered_fraction =
        static_cast<double>(delivered) / static_cast<double>(sim.trials);
    est.rate = est.delivered_fraction / block_s;
    const double phat = est.delivered_fraction;
    est.std_error = std::sqrt(phat * (1.0 - phat) /
                              static_cast<double>(sim.trials)) /
                    block_s;
    est.unreliable_errors = sim.trials < 100;
    return est;
}

// One m*tau block: M*m Bernoulli(p_attempt) per link, then n swap draws.
bool run_block_trial(TrialRng& rng, const TrialSetup& s) {
    bool all_links = true;
    for (int link = 0; link < s.links; ++link) {
        bool any = false;
        const long long attempts =
            static_cast<long long>(s.channels) * s.m;
        for (long long a = 0; a < attempts; ++a)
            any = rng.bernoulli(s.p_attempt) || any;
        all_links = all_links && any;
    }
    if (!all_links)
        return false;
    for (int node = 0; node < s.nodes; ++node)
        if (!rng.bernoulli(s.q_eff))
            return false;
    return true;
}

// Per-link first/last success slots (1-based), sampled per slot with the
// M-channel per-slot success probability. Returns false if some link saw
// no success in the block.
bool run_slot_trial(TrialRng& rng, const TrialSetup& s,
                    std::vector<int>& first_slot, std::vector<int>& last_slot) {
    bool all_links = true;
    for (int link = 0; link < s.links; ++link) {
        int first = 0, last = 0;
        for (int slot = 1; slot <= s.m; ++slot) {
            if (rng.bernoulli(s.p_slot)) {
                if (first == 0)
                    first = slot;
                last = slot;
            }
        }
        first_slot[static_cast<std::size_t>(link)] = first;
        last_slot[static_cast<std::size_t>(link)] = last;
        all_links = all_links && first != 0;
    }
    return all_links;
}

int wait_time(Protocol protocol, const TrialSetup& s,
              const std::vector<int>& first_slot,
              const std::vector<int>& last_slot, int node) {
    const std::size_t left = static_cast<std::size_t>(node);
    const std::size_t right = static_cast<std::size_t>(node) + 1;
    if (protocol == Protocol::first_success)
        return std::abs(first_slot[left] - first_slot[right]);
    return (s.m - last_slot[left]) + (s.m - last_slot[right]);
}

} // namespace

RateEstimate simulate_rate_serial(const ChannelParams& ch,
                                  const HardwareParams& hw,
                                  const RepeaterConfig& cfg, LossModel model,
                                  const SimConfig& sim) {
    if (sim.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    const TrialSetup s = make_setup(ch, hw, cfg, model);
    long long delivered = 0;
    for (long long t = 0; t < sim.trials; ++t) {
        TrialRng rng(sim.seed, static_cast<std::uint64_t>(t));
        if (run_block_trial(rng, s))
            ++delivered;
    }
    return finalize_rate(delivered, sim, s.block_s);
}

RateEstimate simulate_rate(const ChannelParams& ch, const HardwareParams& hw,
                           const RepeaterConfig& cfg, LossModel model,
                           const SimConfig& sim) {
    if (sim.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    const TrialSetup s = make_setup(ch, hw, cfg, model);
    const int workers = resolve_workers(sim.workers);
    long long delivered = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers) \
    reduction(+ : delivered)
#endif
    for (long long t = 0; t < sim.trials; ++t) {
        TrialRng rng(sim.seed, static_cast<std::uint64_t>(t));
        if (run_block_trial(rng, s))
            ++delivered;
    }
    (void)workers;
    return finalize_rate(delivered, sim, s.block_s);
}

WaitTimeStats simulate_wait_times(const ChannelParams& ch,
                                  const HardwareParams& hw,
                                  const RepeaterConfig& cfg, Protocol protocol,
                                  const SimConfig& sim) {
    if (sim.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    const TrialSetup s = make_setup(ch, hw, cfg, LossModel::ideal);
    const int workers = resolve_workers(sim.workers);

    long long blocks = 0;
    long long sum_y = 0, sum_xl = 0, sum_xr = 0;
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
#endif
    {
        std::vector<int> first_slot(static_cast<std::size_t>(s.links));
        std::vector<int> last_slot(static_cast<std::size_t>(s.links));
#ifdef _OPENMP
#pragma omp for schedule(static) reduction(+ : blocks, sum_y, sum_xl, sum_xr)
#endif
        for (long long t = 0; t < sim.trials; ++t) {
            TrialRng rng(sim.seed, static_cast<std::uint64_t>(t));
            if (!run_slot_trial(rng, s, first_slot, last_slot))
                continue;
            ++blocks;
            for (int node = 0; node < s.nodes; ++node) {
                sum_y += wait_time(protocol, s, first_slot, last_slot, node);
                const std::size_t left = static_cast<std::size_t>(node);
                const std::size_t right = left + 1;
                if (protocol == Protocol::first_success) {
                    sum_xl += first_slot[left];
                    sum_xr += first_slot[right];
                } else {
                    sum_xl += s.m - last_slot[left];
                    sum_xr += s.m - last_slot[right];
                }
            }
        }
    }
    (void)workers;

    if (blocks == 0)
        throw empty_stats_error(
            "simulate_wait_times: no block delivered a full set of link "
            "successes");

    WaitTimeStats st;
    st.protocol = protocol;
    st.samples = blocks;
    const double node_samples =
        static_cast<double>(blocks) * std::max(s.nodes, 1);
    st.mean_y = static_cast<double>(sum_y) / node_samples;
    st.mean_x_left = static_cast<double>(sum_xl) / node_samples;
    st.mean_x_right = static_cast<double>(sum_xr) / node_samples;
    st.delta1_analytic = delta1_analytic(s.p_slot);
    st.mean_x_analytic = protocol2_mean_x(s.p_attempt, s.channels, s.m);
    st.s_mean = s.nodes * st.delta1_analytic;
    return st;
}

double sample_delta1(double p, long long samples, std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("sample_delta1 requires p in (0,1)");
    if (samples < 1)
        throw std::invalid_argument("samples must be >= 1");
    const double log_fail = std::log1p(-p);
    long long sum = 0;
    const int workers = resolve_workers(0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers) \
    reduction(+ : sum)
#endif
    for (long long t = 0; t < samples; ++t) {
        TrialRng rng(seed, static_cast<std::uint64_t>(t));
        // Inversion sampling of the untruncated geometric on {1, 2, ...}.
        const auto draw = [&]() {
            const double u = 1.0 - rng.next_double();  // (0, 1]
            return 1 + static_cast<long long>(std::floor(std::log(u) / log_fail));
        };
        sum += std::llabs(draw() - draw());
    }
    (void)workers;
    return static_cast<double>(sum) / static_cast<double>(samples);
}

ProtocolRateResult rate_with_protocol_decoherence(const ChannelParams& ch,
                                                  const HardwareParams& hw,
                                                  const RepeaterConfig& cfg,
                                                  Protocol protocol,
                                                  const SimConfig& sim) {
    if (sim.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    const TrialSetup s = make_setup(ch, hw, cfg, LossModel::switch_loss);
    const DerivedProbabilities d = link_success_prob(ch, hw, cfg);
    const int workers = resolve_workers(sim.workers);

    long long delivered = 0;
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
#endif
    {
        std::vector<int> first_slot(static_cast<std::size_t>(s.links));
        std::vector<int> last_slot(static_cast<std::size_t>(s.links));
#ifdef _OPENMP
#pragma omp for schedule(static) reduction(+ : delivered)
#endif
        for (long long t = 0; t < sim.trials; ++t) {
            TrialRng rng(sim.seed, static_cast<std::uint64_t>(t));
            if (!run_slot_trial(rng, s, first_slot, last_slot))
                continue;
            bool ok = true;
            for (int node = 0; node < s.nodes && ok; ++node) {
                const int y = wait_time(protocol, s, first_slot, last_slot, node);
                const double p_swap =
                    s.q_switch * std::pow(s.lambda_mem, static_cast<double>(y));
                ok = rng.bernoulli(p_swap);
            }
            if (ok)
                ++delivered;
        }
    }
    (void)workers;

    const double mean_y =
        protocol == Protocol::first_success
            ? delta1_analytic(s.p_slot)
            : 2.0 * protocol2_mean_x(s.p_attempt, s.channels, s.m);
    const double q_node = s.q_switch * std::pow(s.lambda_mem, mean_y);

    ProtocolRateResult res;
    res.analytic_rate = std::pow(d.p_link, s.links) *
                        std::pow(q_node, s.nodes) / s.block_s;
    res.mc = finalize_rate(delivered, sim, s.block_s);
    return res;
}

} // namespace repeaterlab
