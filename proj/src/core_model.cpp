#include "repeaterlab/core_model.hpp"

#include <cmath>
#include <limits>

namespace repeaterlab {

double to_natural_loss(double alpha_db) {
    if (!(alpha_db > 0.0))
        throw std::domain_error("attenuation must be positive (dB/km)");
    return alpha_db * std::log(10.0) / 10.0;
}

double db_to_transmissivity(double loss_db) {
    if (loss_db < 0.0)
        throw std::domain_error("loss in dB must be nonnegative");
    return std::pow(10.0, -loss_db / 10.0);
}

void ChannelParams::validate() const {
    if (!(alpha_db > 0.0))
        throw config_error("alpha_db must be > 0");
    if (!(length_km >= 0.0))
        throw config_error("length_km must be >= 0");
    if (!(c_fib > 0.0))
        throw config_error("c_fib must be > 0");
}

namespace {

void check_prob(double v, const char* name, bool allow_zero = false) {
    const double lo_ok = allow_zero ? (v >= 0.0) : (v > 0.0);
    if (!(lo_ok && v <= 1.0))
        throw config_error(std::string(name) + " must lie in (0,1]");
}

} // namespace

void HardwareParams::validate() const {
    if (!(tau_s > 0.0))
        throw config_error("tau_s must be > 0");
    if (channels < 1)
        throw config_error("channels must be a positive integer");
    check_prob(mu, "mu", /*allow_zero=*/true);
    check_prob(q, "q");
    check_prob(lambda_t, "lambda_t");
    check_prob(lambda_mem, "lambda_mem");
    if (detector_eff) {
        check_prob(*detector_eff, "detector_eff");
        const double derived = *detector_eff * *detector_eff / 2.0;
        if (std::abs(mu - derived) > 1e-12 * derived)
            throw config_error(
                "mu is inconsistent with detector_eff (mu must equal "
                "detector_eff^2/2)");
    }
}

void RepeaterConfig::validate() const {
    if (n < 0)
        throw config_error("n must be >= 0");
    if (m < 1)
        throw config_error("m must be >= 1");
}

DerivedProbabilities link_success_prob(const ChannelParams& ch,
                                       const HardwareParams& hw,
                                       const RepeaterConfig& cfg) {
    ch.validate();
    hw.validate();
    cfg.validate();

    DerivedProbabilities d;
    const double a = ch.alpha_natural();
    d.lambda_half = std::exp(-a * ch.length_km / (2.0 * (cfg.n + 1)));
    d.p_attempt = hw.mu * d.lambda_half * d.lambda_half;
    const double attempts = static_cast<double>(hw.channels) * cfg.m;
    if (d.p_attempt >= 1.0)
        d.p_link = 1.0;
    else
        d.p_link = -std::expm1(attempts * std::log1p(-d.p_attempt));
    d.q_eff = hw.q;
    return d;
}

double effective_swap_prob(const HardwareParams& hw, int m, LossModel model) {
    if (m < 1)
        throw config_error("m must be >= 1");
    switch (model) {
    case LossModel::ideal:
        return hw.q;
    case LossModel::switch_loss:
        return hw.q * std::pow(hw.lambda_t, std::log2(static_cast<double>(m)));
    case LossModel::switch_plus_worst_decoherence:
        return hw.q * std::pow(hw.lambda_t, std::log2(static_cast<double>(m))) *
               std::pow(hw.lambda_mem, static_cast<double>(m));
    }
    throw config_error("unknown loss model");
}

double end_to_end_rate(const ChannelParams& ch, const HardwareParams& hw,
                       const RepeaterConfig& cfg, LossModel model) {
    const DerivedProbabilities d = link_success_prob(ch, hw, cfg);
    const double q_eff = effective_swap_prob(hw, cfg.m, model);
    return std::pow(d.p_link, cfg.n + 1) * std::pow(q_eff, cfg.n) /
           (cfg.m * hw.tau_s);
}

double plob_rate(const ChannelParams& ch, const HardwareParams& hw) {
    ch.validate();
    hw.validate();
    const double eta = std::exp(-ch.alpha_natural() * ch.length_km);
    if (eta >= 1.0)
        return std::numeric_limits<double>::infinity();
    return (hw.channels / hw.tau_s) * (-std::log1p(-eta) / std::log(2.0));
}

ResourceRequirements resource_requirements(const ChannelParams& ch,
                                           const HardwareParams& hw,
                                           const RepeaterConfig& cfg) {
    ch.validate();
    hw.validate();
    cfg.validate();

    ResourceRequirements r;
    r.t1_s = ch.length_km / ((cfg.n + 1) * ch.c_fib);
    r.t2_s = cfg.m * hw.tau_s;
    r.t_latency_s = r.t1_s + r.t2_s;
    // Snap near-integer ratios before ceil: T1/tau is exact in the model
    // but not in binary (e.g. 1e-4/5e-8 evaluates to 2000.0000000000002).
    const double ratio = r.t1_s / hw.tau_s;
    const double snapped = std::nearbyint(ratio);
    if (std::abs(ratio - snapped) <= 1e-9 * std::max(1.0, std::abs(ratio)))
        r.j_slots = static_cast<long long>(snapped);
    else
        r.j_slots = static_cast<long long>(std::ceil(ratio));
    r.t_coherence_min_s = r.t1_s + (cfg.m - 1) * hw.tau_s;
    r.n_mem_min = 2LL * (cfg.m + r.j_slots) * hw.channels;
    r.occupancy_at_meas = 2LL * (r.j_slots + 1) * hw.channels;
    return r;
}

} // namespace repeaterlab
