#pragma once

#include <optional>

#include "repeaterlab/errors.hpp"

namespace repeaterlab {

// Fiber attenuation conversion: figure captions quote dB/km, the rate
// formulas use the natural (1/km) coefficient.
double to_natural_loss(double alpha_db);

// Loss quoted in dB to a transmissivity in (0,1].
double db_to_transmissivity(double loss_db);

struct ChannelParams {
    double alpha_db = 0.15;  // attenuation, dB/km
    double length_km = 0.0;  // end-to-end distance L
    double c_fib = 2.0e5;    // signal speed in fiber, km/s

    double alpha_natural() const { return to_natural_loss(alpha_db); }
    void validate() const;
};

struct HardwareParams {
    double tau_s = 50e-9;     // source repetition period
    int channels = 1;         // M parallel channels
    double mu = 0.5;          // linear-optical BSM efficiency
    double q = 1.0;           // QM entanglement-swap success probability
    double lambda_t = 1.0;    // per-switch transmissivity
    double lambda_mem = 1.0;  // per-time-step memory survival probability
    std::optional<double> detector_eff;  // eta_d; when set, mu = eta_d^2/2

    void validate() const;
};

struct RepeaterConfig {
    int n = 0;  // repeater stations
    int m = 1;  // time-multiplexing block length

    void validate() const;
};

enum class LossModel {
    ideal,
    switch_loss,
    switch_plus_worst_decoherence,
};

} // namespace repeaterlab
