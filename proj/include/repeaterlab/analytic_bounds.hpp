#pragma once

#include <utility>

#include "repeaterlab/params.hpp"

namespace repeaterlab {

// Unadorned "log" in every bound formula below is the natural logarithm;
// log2 appears only where a base-2 exponent is genuinely meant.

struct BoundConstants {
    double c_exp = 0.0;     // -log2(lambda_t)
    double c_sub = 0.0;     // subexponential coefficient
    double c0 = 0.0;        // optimal-scaling constant
    double prefactor = 0.0; // (M mu)^{log2(lambda_t)+1} / (q tau), ebits/s
};

struct SpatialExponents {
    double s_exact = 0.0;  // exponent from the transcendental z
    double z_root = 0.0;
    double z_residual = 0.0;
    double u_ub = 0.0;     // log(1/q)/log(mu M)
    bool u_defined = false;
};

struct DecoherenceBoundSolution {
    double v0 = 0.0;
    double rate_lb = 0.0;
    double residual = 0.0;
    bool multiple_roots_suspected = false;
};

struct OptimalParams {
    double n_star = 0.0;
    double m_star = 0.0;
    int n_int = 0;
    int m_int = 0;
    bool feasible = false;  // false defines the "forbidden" region
};

struct LossyBound {
    double rate = 0.0;
    BoundConstants constants;
};

// How Theorem 4's switch term is read. `combined` takes log2(2*lambda_t)
// = 1 + log2(lambda_t), the reading under which lambda_mem -> 1 recovers
// v0 = n* + 1. `literal` keeps lambda_t * log2(2) = lambda_t for comparison.
enum class Theorem4SwitchTerm { combined, literal };

double subexp_upper_bound(const ChannelParams& ch, const HardwareParams& hw,
                          double length_km);
double subexp_lower_bound(const ChannelParams& ch, const HardwareParams& hw,
                          double length_km);

LossyBound lossy_lower_bound(const ChannelParams& ch, const HardwareParams& hw,
                             double length_km);

OptimalParams optimal_params(const ChannelParams& ch, const HardwareParams& hw,
                             double length_km);

DecoherenceBoundSolution decoherence_lower_bound(
    const ChannelParams& ch, const HardwareParams& hw, double length_km,
    Theorem4SwitchTerm switch_term = Theorem4SwitchTerm::combined);

SpatialExponents spatial_exponent_exact(const HardwareParams& hw);

// Appendix families: abscissa x = e^{-aL}, ordinate a rate in ebits/s.
std::pair<double, double> family_point_a(const HardwareParams& hw, int m, int n);
std::pair<double, double> family_point_bprime(const HardwareParams& hw, int m,
                                              int n);

enum class LossyRegime { subexponential_dominant, exponential_dominant };

// Diagnostic: which term of the lossy bound's exponent dominates at alpha*L.
LossyRegime lossy_regime(const BoundConstants& c, double alpha_l);

} // namespace repeaterlab
