#pragma once

#include "repeaterlab/params.hpp"

namespace repeaterlab {

struct DerivedProbabilities {
    double lambda_half = 0.0;  // half-link transmissivity e^{-aL/[2(n+1)]}
    double p_attempt = 0.0;    // single-attempt link success mu*lambda_half^2
    double p_link = 0.0;       // 1 - (1 - p_attempt)^{M m}
    double q_eff = 0.0;        // swap probability after loss modifications
};

struct ResourceRequirements {
    double t_latency_s = 0.0;        // T_l = T1 + T2
    double t1_s = 0.0;               // one-hop round trip L/[(n+1) c_fib]
    double t2_s = 0.0;               // block wait m*tau
    long long j_slots = 0;           // ceil(T1/tau)
    double t_coherence_min_s = 0.0;  // T1 + (m-1)*tau
    long long n_mem_min = 0;         // 2*(m + j)*M qubits
    long long occupancy_at_meas = 0; // 2*(j+1)*M
};

DerivedProbabilities link_success_prob(const ChannelParams& ch,
                                       const HardwareParams& hw,
                                       const RepeaterConfig& cfg);

double effective_swap_prob(const HardwareParams& hw, int m, LossModel model);

double end_to_end_rate(const ChannelParams& ch, const HardwareParams& hw,
                       const RepeaterConfig& cfg, LossModel model);

// Repeaterless benchmark (M/tau) * log2(1/(1-eta)), eta = e^{-aL}.
// Returns +infinity for a lossless (L = 0) channel.
double plob_rate(const ChannelParams& ch, const HardwareParams& hw);

ResourceRequirements resource_requirements(const ChannelParams& ch,
                                           const HardwareParams& hw,
                                           const RepeaterConfig& cfg);

} // namespace repeaterlab
