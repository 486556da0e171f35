#include "repeaterlab/analytic_bounds.hpp"

#include <cmath>
#include <limits>

#include "repeaterlab/root_find.hpp"

namespace repeaterlab {

namespace {

constexpr double kOneMinusInvE = 1.0 - 1.0 / 2.718281828459045235360287471352662498;

double q_damped(const HardwareParams& hw) { return hw.q * kOneMinusInvE; }

// D = log2(lambda_t) * ln(M mu) - ln(q (1 - 1/e)); the denominator shared
// by c0, Theorem 3 and Theorem 4.
double envelope_denominator(const HardwareParams& hw) {
    const double l = std::log2(hw.lambda_t);
    return l * std::log(hw.channels * hw.mu) - std::log(q_damped(hw));
}

double subexp_bound(const ChannelParams& ch, const HardwareParams& hw,
                    double length_km, double q_inside_sqrt) {
    ch.validate();
    hw.validate();
    if (length_km < 0.0)
        throw std::domain_error("length_km must be >= 0");
    const double al = ch.alpha_natural() * length_km;
    const double coeff = 2.0 * std::sqrt(std::log(1.0 / q_inside_sqrt));
    return (hw.channels * hw.mu / (hw.q * hw.tau_s)) *
           std::exp(-coeff * std::sqrt(al));
}

} // namespace

double subexp_upper_bound(const ChannelParams& ch, const HardwareParams& hw,
                          double length_km) {
    return subexp_bound(ch, hw, length_km, hw.q);
}

double subexp_lower_bound(const ChannelParams& ch, const HardwareParams& hw,
                          double length_km) {
    return subexp_bound(ch, hw, length_km, q_damped(hw));
}

LossyBound lossy_lower_bound(const ChannelParams& ch, const HardwareParams& hw,
                             double length_km) {
    ch.validate();
    hw.validate();
    const double l = std::log2(hw.lambda_t);
    const double mmu = hw.channels * hw.mu;
    const double ln_mmu = std::log(mmu);
    const double ln_qd = std::log(q_damped(hw));

    BoundConstants c;
    c.c_exp = -l;
    const double c_sub_sq = l * (ln_mmu * l + ln_mmu - ln_qd) - ln_qd;
    if (c_sub_sq < 0.0)
        throw bound_inapplicable_error(
            "lossy lower bound: c_sub^2 < 0 for these parameters");
    c.c_sub = std::sqrt(c_sub_sq);
    c.prefactor = std::pow(mmu, l + 1.0) / (hw.q * hw.tau_s);
    const double denom = envelope_denominator(hw);
    c.c0 = (denom > 0.0 && l + 1.0 >= 0.0)
               ? std::sqrt((l + 1.0) / denom)
               : std::numeric_limits<double>::quiet_NaN();

    const double al = ch.alpha_natural() * length_km;
    LossyBound out;
    out.constants = c;
    out.rate = c.prefactor *
               std::exp(-c.c_exp * al - 2.0 * c.c_sub * std::sqrt(al));
    return out;
}

OptimalParams optimal_params(const ChannelParams& ch, const HardwareParams& hw,
                             double length_km) {
    ch.validate();
    hw.validate();
    const double l = std::log2(hw.lambda_t);
    const double denom = envelope_denominator(hw);
    if (!(denom > 0.0))
        throw bound_inapplicable_error(
            "optimal_params: log(M mu) log2(lambda_t) - log(q(1-1/e)) must "
            "be positive");
    if (l + 1.0 < 0.0)
        throw bound_inapplicable_error(
            "optimal_params: log2(lambda_t) + 1 is negative");

    const double c0 = std::sqrt((l + 1.0) / denom);
    const double al = ch.alpha_natural() * length_km;

    OptimalParams p;
    p.n_star = c0 * std::sqrt(al) - 1.0;
    if (p.n_star + 1.0 > 0.0)
        p.m_star = std::exp(al / (p.n_star + 1.0)) / (hw.channels * hw.mu);
    else
        p.m_star = std::numeric_limits<double>::infinity();
    p.n_int = static_cast<int>(std::floor(std::max(p.n_star, 0.0)));
    p.m_int = static_cast<int>(std::floor(
        std::min(p.m_star, static_cast<double>(std::numeric_limits<int>::max()))));
    p.feasible = p.n_int >= 1 && p.m_int >= 1;
    return p;
}

DecoherenceBoundSolution decoherence_lower_bound(const ChannelParams& ch,
                                                 const HardwareParams& hw,
                                                 double length_km,
                                                 Theorem4SwitchTerm switch_term) {
    ch.validate();
    hw.validate();
    if (!(length_km > 0.0))
        throw bound_inapplicable_error(
            "decoherence lower bound requires length_km > 0");
    const double l = std::log2(hw.lambda_t);
    const double denom = envelope_denominator(hw);
    if (!(denom > 0.0))
        throw bound_inapplicable_error(
            "decoherence lower bound: envelope denominator must be positive");

    const double al = ch.alpha_natural() * length_km;
    const double mmu = hw.channels * hw.mu;
    const double ln_mem = std::log(hw.lambda_mem);
    const double st =
        switch_term == Theorem4SwitchTerm::combined ? 1.0 + l : hw.lambda_t;

    const auto memory_term = [&](double v) {
        if (ln_mem == 0.0)
            return 0.0;  // avoid 0 * inf when exp(al/v) overflows
        return std::exp(al / v) * ln_mem / mmu;
    };
    const auto f = [&](double v) {
        return -al * (memory_term(v) - st) - v * v * denom;
    };

    const double v_guess = std::sqrt(al * std::max(st, 1.0) / denom);
    BisectionResult root = solve_smallest_root(
        f, 1e-6, std::max(4.0, 4.0 * v_guess), 1e-15);

    DecoherenceBoundSolution sol;
    sol.v0 = root.root;
    sol.multiple_roots_suspected = root.multiple_sign_changes;
    const double rhs = sol.v0 * sol.v0 * denom;
    sol.residual = std::abs(root.f_at_root) /
                   std::max(std::abs(rhs), std::numeric_limits<double>::min());

    const double exponent = -al * l * (1.0 / sol.v0 - 1.0) - al / sol.v0 +
                            sol.v0 * std::log(q_damped(hw) / std::pow(mmu, l)) +
                            memory_term(sol.v0);
    sol.rate_lb = std::pow(mmu, l + 1.0) / (hw.q * hw.tau_s) * std::exp(exponent);
    return sol;
}

SpatialExponents spatial_exponent_exact(const HardwareParams& hw) {
    hw.validate();
    const double mu = hw.mu;
    const double big_m = static_cast<double>(hw.channels);
    const double q = hw.q;

    const auto lhs = [&](double z) {
        const double p = -std::expm1(big_m * std::log1p(-mu * z));
        return p * std::log(q * p);
    };
    const auto rhs = [&](double z) {
        return mu * big_m * z * std::log(z) *
               std::pow(1.0 - mu * z, big_m - 1.0);
    };
    const auto f = [&](double z) { return lhs(z) - rhs(z); };

    // Endpoints excluded to avoid the log singularities; no bracket
    // expansion since z must stay inside (0, 1).
    BisectionResult root =
        solve_smallest_root(f, 1e-15, 1.0 - 1e-15, 1e-15, /*max_expansions=*/0,
                            /*scan_points=*/512);

    SpatialExponents s;
    s.z_root = root.root;
    s.z_residual = std::abs(root.f_at_root) /
                   std::max({std::abs(lhs(root.root)), std::abs(rhs(root.root)),
                             std::numeric_limits<double>::min()});
    const double p = -std::expm1(big_m * std::log1p(-mu * root.root));
    s.s_exact = std::log(q * p) / std::log(root.root);
    if (mu * big_m > 1.0) {
        s.u_ub = std::log(1.0 / q) / std::log(mu * big_m);
        s.u_defined = true;
    } else {
        s.u_ub = std::numeric_limits<double>::quiet_NaN();
        s.u_defined = false;
    }
    return s;
}

std::pair<double, double> family_point_a(const HardwareParams& hw, int m,
                                         int n) {
    hw.validate();
    if (m < 1 || n < 0)
        throw std::domain_error("family point requires m >= 1 and n >= 0");
    const double mmmu = static_cast<double>(hw.channels) * m * hw.mu;
    const double x = std::pow(mmmu, -(n + 1.0));
    const double y = std::pow(hw.q, n) / (m * hw.tau_s);
    return {x, y};
}

std::pair<double, double> family_point_bprime(const HardwareParams& hw, int m,
                                              int n) {
    auto [x, y] = family_point_a(hw, m, n);
    return {x, y * std::pow(kOneMinusInvE, n + 1.0)};
}

LossyRegime lossy_regime(const BoundConstants& c, double alpha_l) {
    const double exp_term = c.c_exp * alpha_l;
    const double sub_term = 2.0 * c.c_sub * std::sqrt(alpha_l);
    return exp_term > sub_term ? LossyRegime::exponential_dominant
                               : LossyRegime::subexponential_dominant;
}

} // namespace repeaterlab
