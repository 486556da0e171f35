#pragma once

#include <optional>
#include <vector>

#include "repeaterlab/core_model.hpp"

namespace repeaterlab {

struct SearchCaps {
    int n_max = -1;  // -1: max(50, ceil(4 n*)) from the continuous optimum
    int m_max = -1;  // -1: max(50, ceil(4 m*))
};

struct EnvelopePoint {
    double length_km = 0.0;
    double rate = 0.0;
    int n_opt = 0;
    int m_opt = 0;
    double plob = 0.0;
    bool beats_plob = false;
    bool cap_hit = false;  // argmax landed on a search-cap boundary
};

enum class ScalingModel { sqrt_exponent, linear_exponent };

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    ScalingModel model = ScalingModel::sqrt_exponent;
};

// Integer-optimized rate-vs-distance point R(L) = max_{m,n} R_{m,n}(L).
// Ties break to the smallest n, then the smallest m. The OpenMP variant
// partitions the n axis; per-n results are merged in index order, so the
// argmax is identical for any worker count.
EnvelopePoint exact_envelope(const ChannelParams& ch, const HardwareParams& hw,
                             double length_km, LossModel model,
                             SearchCaps caps = {});

// Plain single-threaded reference of the same search.
EnvelopePoint exact_envelope_serial(const ChannelParams& ch,
                                    const HardwareParams& hw, double length_km,
                                    LossModel model, SearchCaps caps = {});

// Optimizes n only, at a fixed block length m.
std::vector<EnvelopePoint> fixed_m_envelope(const ChannelParams& ch,
                                            const HardwareParams& hw, int m,
                                            const std::vector<double>& l_grid,
                                            LossModel model,
                                            SearchCaps caps = {});

// OLS of ln(rate) on sqrt(alpha L) or on alpha L. Needs >= 5 points with
// positive rates and non-degenerate abscissae.
ScalingFit fit_scaling(const ChannelParams& ch,
                       const std::vector<EnvelopePoint>& points,
                       ScalingModel model);

struct CrossoverWindow {
    double lo_km = 1.0;
    double hi_km = 1000.0;
    double coarse_km = 1.0;
};

// Smallest L where the exact envelope exceeds the PLOB benchmark, refined
// by bisection to 0.1 km; nullopt when no crossing exists in the window.
std::optional<double> crossover_distance(const ChannelParams& ch,
                                         const HardwareParams& hw,
                                         LossModel model,
                                         CrossoverWindow window = {});

} // namespace repeaterlab
