#include <cmath>

#include <doctest.h>

#include "repeaterlab/analytic_bounds.hpp"
#include "repeaterlab/core_model.hpp"

using namespace repeaterlab;

namespace {

ChannelParams fiber(double length_km = 0.0) {
    ChannelParams ch;
    ch.alpha_db = 0.15;
    ch.length_km = length_km;
    return ch;
}

HardwareParams baseline_hw(int channels = 1) {
    HardwareParams hw;
    hw.tau_s = 50e-9;
    hw.channels = channels;
    hw.mu = 0.405;
    hw.q = 0.255;
    return hw;
}

constexpr double kQDampFactor = 1.0 - 1.0 / 2.718281828459045235360287471352662498;

} // namespace

TEST_CASE("subexponential bounds") {
    const ChannelParams ch = fiber();
    const HardwareParams hw = baseline_hw();

    SUBCASE("decay coefficients for q=0.255") {
        // ub(L) = pre * exp(-c sqrt(aL)); recover c from two evaluations
        const double al = 1.0 / ch.alpha_natural();  // L with aL = 1
        const double c_ub =
            -std::log(subexp_upper_bound(ch, hw, al) /
                      subexp_upper_bound(ch, hw, 0.0));
        const double c_lb =
            -std::log(subexp_lower_bound(ch, hw, al) /
                      subexp_lower_bound(ch, hw, 0.0));
        CHECK(c_ub == doctest::Approx(2.33794).epsilon(1e-5));
        CHECK(c_lb == doctest::Approx(2.70198).epsilon(1e-5));
    }
    SUBCASE("zero-distance prefactor") {
        CHECK(subexp_upper_bound(ch, hw, 0.0) ==
              doctest::Approx(hw.channels * hw.mu / (hw.q * hw.tau_s)));
    }
    SUBCASE("q=1 upper bound is constant in L") {
        HardwareParams perfect = hw;
        perfect.q = 1.0;
        CHECK(subexp_upper_bound(ch, perfect, 100.0) ==
              doctest::Approx(subexp_upper_bound(ch, perfect, 900.0)));
    }
    SUBCASE("ordering LB < UB for L > 0") {
        for (double length = 10.0; length <= 1000.0; length += 90.0)
            CHECK(subexp_lower_bound(ch, hw, length) <
                  subexp_upper_bound(ch, hw, length));
    }
}

TEST_CASE("lossy lower bound") {
    const ChannelParams ch = fiber();

    SUBCASE("lossless switches collapse to the plain lower bound") {
        const HardwareParams hw = baseline_hw();
        for (int i = 0; i < 20; ++i) {
            const double length = 50.0 + 25.0 * i;
            const double lossy = lossy_lower_bound(ch, hw, length).rate;
            const double plain = subexp_lower_bound(ch, hw, length);
            CHECK(std::abs(lossy - plain) <= 1e-12 * plain);
        }
    }
    SUBCASE("2 dB switch loss exponential coefficient") {
        HardwareParams hw = baseline_hw();
        hw.lambda_t = db_to_transmissivity(2.0);
        const BoundConstants c = lossy_lower_bound(ch, hw, 100.0).constants;
        CHECK(c.c_exp == doctest::Approx(0.66439).epsilon(1e-5));
    }
    SUBCASE("expanded and factored c_sub forms agree") {
        HardwareParams hw = baseline_hw(100);
        hw.lambda_t = 0.8;
        const BoundConstants c = lossy_lower_bound(ch, hw, 100.0).constants;
        const double l = std::log2(hw.lambda_t);
        const double d = l * std::log(hw.channels * hw.mu) -
                         std::log(hw.q * kQDampFactor);
        CHECK(c.c_sub == doctest::Approx(std::sqrt((l + 1.0) * d)).epsilon(1e-12));
        // c0 * c_sub = l + 1 links the optimal-scaling and bound constants
        CHECK(c.c0 * c.c_sub == doctest::Approx(l + 1.0).epsilon(1e-12));
    }
    SUBCASE("negative c_sub^2 is reported, not NaN") {
        HardwareParams hw = baseline_hw();
        hw.lambda_t = 0.1;  // log2 < -1 with M*mu < 1
        CHECK_THROWS_AS(lossy_lower_bound(ch, hw, 100.0),
                        bound_inapplicable_error);
    }
    SUBCASE("regime diagnostic crosses at sqrt(aL) = 2 c_sub / c_exp") {
        HardwareParams hw = baseline_hw();
        hw.lambda_t = db_to_transmissivity(2.0);
        const BoundConstants c = lossy_lower_bound(ch, hw, 100.0).constants;
        const double alpha = ch.alpha_natural();
        CHECK(lossy_regime(c, alpha * 50.0) ==
              LossyRegime::subexponential_dominant);
        CHECK(lossy_regime(c, alpha * 500.0) ==
              LossyRegime::exponential_dominant);
    }
}

TEST_CASE("continuous optimal design parameters") {
    const ChannelParams ch = fiber();

    SUBCASE("M=50 reference point at 400 km") {
        const OptimalParams p = optimal_params(ch, baseline_hw(50), 400.0);
        CHECK(p.n_star == doctest::Approx(1.751).epsilon(1e-3));
        CHECK(p.m_star == doctest::Approx(7.49).epsilon(2e-3));
        CHECK(p.n_int == 1);
        CHECK(p.m_int == 7);
        CHECK(p.feasible);
    }
    SUBCASE("lossless switches reduce c0 to 1/sqrt(-ln(q(1-1/e)))") {
        const HardwareParams hw = baseline_hw(50);
        const double c0 =
            1.0 / std::sqrt(-std::log(hw.q * kQDampFactor));
        const OptimalParams p = optimal_params(ch, hw, 300.0);
        const double al = ch.alpha_natural() * 300.0;
        CHECK(p.n_star == doctest::Approx(c0 * std::sqrt(al) - 1.0).epsilon(1e-12));
        CHECK(p.m_star ==
              doctest::Approx(std::exp(al / (p.n_star + 1.0)) /
                              (hw.channels * hw.mu))
                  .epsilon(1e-12));
    }
    SUBCASE("short distances are infeasible") {
        const OptimalParams p = optimal_params(ch, baseline_hw(50), 50.0);
        CHECK(p.n_star < 1.0);
        CHECK_FALSE(p.feasible);
    }
    SUBCASE("nonpositive denominator is inapplicable") {
        HardwareParams hw = baseline_hw(1000);
        hw.lambda_t = 0.5;  // log2 = -1 with large M*mu
        CHECK_THROWS_AS(optimal_params(ch, hw, 100.0),
                        bound_inapplicable_error);
    }
}

TEST_CASE("decoherence lower bound") {
    const ChannelParams ch = fiber();

    SUBCASE("perfect memories recover the lossy bound") {
        for (double lambda_t : {1.0, 0.9}) {
            HardwareParams hw = baseline_hw(50);
            hw.lambda_t = lambda_t;
            for (double length : {100.0, 200.0, 350.0, 500.0}) {
                const DecoherenceBoundSolution sol =
                    decoherence_lower_bound(ch, hw, length);
                const OptimalParams p = optimal_params(ch, hw, length);
                const double lossy = lossy_lower_bound(ch, hw, length).rate;
                CHECK(sol.v0 ==
                      doctest::Approx(p.n_star + 1.0).epsilon(1e-9));
                CHECK(sol.rate_lb == doctest::Approx(lossy).epsilon(1e-9));
                CHECK(sol.residual < 1e-10);
            }
        }
    }
    SUBCASE("imperfect memories strictly lower the bound") {
        HardwareParams hw = baseline_hw(50);
        const double perfect =
            decoherence_lower_bound(ch, hw, 300.0).rate_lb;
        hw.lambda_mem = 0.999;
        const double damped =
            decoherence_lower_bound(ch, hw, 300.0).rate_lb;
        CHECK(damped < perfect);
    }
    SUBCASE("literal switch-term reading differs when lambda_t < 1") {
        HardwareParams hw = baseline_hw(50);
        hw.lambda_t = 0.9;
        hw.lambda_mem = 0.999;
        const double combined =
            decoherence_lower_bound(ch, hw, 300.0, Theorem4SwitchTerm::combined)
                .rate_lb;
        const double literal =
            decoherence_lower_bound(ch, hw, 300.0, Theorem4SwitchTerm::literal)
                .rate_lb;
        CHECK(combined != literal);
    }
    SUBCASE("zero length is rejected") {
        CHECK_THROWS_AS(decoherence_lower_bound(ch, baseline_hw(50), 0.0),
                        bound_inapplicable_error);
    }
}

TEST_CASE("spatial-only exponents") {
    SUBCASE("u for M=1000") {
        const SpatialExponents s = spatial_exponent_exact(baseline_hw(1000));
        CHECK(s.u_defined);
        CHECK(s.u_ub ==
              doctest::Approx(std::log(1.0 / 0.255) / std::log(405.0))
                  .epsilon(1e-12));
        CHECK(s.u_ub < 1.0);
        CHECK(s.z_residual < 1e-10);
        CHECK(s.z_root > 0.0);
        CHECK(s.z_root < 1.0);
    }
    SUBCASE("u < 1 exactly when M > 1/(q mu)") {
        // 1/(q mu) = 9.685 for the baseline efficiencies
        CHECK(spatial_exponent_exact(baseline_hw(10)).u_ub < 1.0);
        // below the threshold the u formula gives >= 1
        CHECK(std::log(1.0 / 0.255) / std::log(0.405 * 9.0) >= 1.0);
    }
    SUBCASE("s <= 1 in the multiplexing-advantage regime") {
        const SpatialExponents s = spatial_exponent_exact(baseline_hw(50));
        CHECK(s.s_exact <= 1.0);
        CHECK(s.z_residual < 1e-10);
    }
    SUBCASE("no advantage regime has no transcendental root") {
        // q mu M <= 1: the defining equation has one sign everywhere
        CHECK_THROWS_AS(spatial_exponent_exact(baseline_hw(1)),
                        root_not_found_error);
        CHECK_THROWS_AS(spatial_exponent_exact(baseline_hw(9)),
                        root_not_found_error);
    }
}

TEST_CASE("envelope family points") {
    const HardwareParams hw = baseline_hw();

    SUBCASE("reference point for m=1, n=0") {
        const auto [x, y] = family_point_a(hw, 1, 0);
        CHECK(x == doctest::Approx(1.0 / 0.405).epsilon(1e-12));
        CHECK(y == doctest::Approx(2.0e7).epsilon(1e-12));
    }
    SUBCASE("B' sits strictly below A") {
        for (int n = 0; n <= 4; ++n) {
            for (int m : {1, 2, 8, 32}) {
                CHECK(family_point_bprime(hw, m, n).second <
                      family_point_a(hw, m, n).second);
            }
        }
    }
    SUBCASE("exact rate at the A abscissa dominates the B' ordinate") {
        for (int n = 0; n <= 3; ++n) {
            for (int m : {1, 4, 16}) {
                const auto [x, y_b] = family_point_bprime(hw, m, n);
                ChannelParams ch = fiber();
                const double length = -std::log(x) / ch.alpha_natural();
                if (length < 0.0)
                    continue;  // abscissa > 1 has no physical distance
                ch.length_km = length;
                const double rate =
                    end_to_end_rate(ch, hw, {n, m}, LossModel::ideal);
                CHECK(rate >= y_b * (1.0 - 1e-12));
            }
        }
    }
}
