#pragma once

#include <cstdint>

#include "repeaterlab/core_model.hpp"

namespace repeaterlab {

struct SimConfig {
    std::uint64_t seed = 0;
    long long trials = 1;
    int workers = 0;  // 0: REPEATERLAB_THREADS or the OpenMP default
};

enum class Protocol { first_success, least_wait_end_of_block };

struct RateEstimate {
    double rate = 0.0;        // ebits/s
    double std_error = 0.0;   // ebits/s, from binomial variance
    double delivered_fraction = 0.0;
    long long delivered = 0;
    long long trials = 0;
    bool unreliable_errors = false;  // trials < 100
};

struct WaitTimeStats {
    Protocol protocol = Protocol::first_success;
    long long samples = 0;       // successful blocks (all links heralded)
    double mean_y = 0.0;         // per-node wait-time statistic
    double mean_x_left = 0.0;
    double mean_x_right = 0.0;
    double delta1_analytic = 0.0;   // untruncated-geometric closed form
    double mean_x_analytic = 0.0;   // truncated closed form (protocol 2)
    double s_mean = 0.0;            // <S> = n * Delta_1
};

struct ProtocolRateResult {
    double analytic_rate = 0.0;  // Jensen lower bound
    RateEstimate mc;
};

// Closed form for the mean |X1 - X2| of two i.i.d. untruncated geometrics
// with per-slot success probability p.
double delta1_analytic(double p);

// Truncated closed form for the mean slots-since-last-success, counted from
// the end of an m-slot block over M parallel channels.
double protocol2_mean_x(double p_attempt, int channels, int m);

// Monte Carlo of the block protocol: per trial, M*m Bernoulli(p_attempt)
// draws per link and n Bernoulli(q_eff) swap draws.
RateEstimate simulate_rate(const ChannelParams& ch, const HardwareParams& hw,
                           const RepeaterConfig& cfg, LossModel model,
                           const SimConfig& sim);

RateEstimate simulate_rate_serial(const ChannelParams& ch,
                                  const HardwareParams& hw,
                                  const RepeaterConfig& cfg, LossModel model,
                                  const SimConfig& sim);

WaitTimeStats simulate_wait_times(const ChannelParams& ch,
                                  const HardwareParams& hw,
                                  const RepeaterConfig& cfg, Protocol protocol,
                                  const SimConfig& sim);

// Mean |X1 - X2| of untruncated geometric sampling; the MC oracle for
// delta1_analytic.
double sample_delta1(double p, long long samples, std::uint64_t seed);

// Analytic branch applies lambda_mem^<Y> per node (a valid lower bound by
// Jensen); the MC branch thins each swap by lambda_mem^{Y_i} with the
// actual per-trial wait times.
ProtocolRateResult rate_with_protocol_decoherence(const ChannelParams& ch,
                                                  const HardwareParams& hw,
                                                  const RepeaterConfig& cfg,
                                                  Protocol protocol,
                                                  const SimConfig& sim);

} // namespace repeaterlab
