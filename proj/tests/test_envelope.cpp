#include <cmath>
#include <cstdlib>
#include <vector>

#include <doctest.h>

#include "repeaterlab/envelope.hpp"

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

struct BruteResult {
    double rate = -1.0;
    int n = 0;
    int m = 1;
};

BruteResult brute_force(const ChannelParams& ch, const HardwareParams& hw,
                        double length_km, LossModel model, int n_max,
                        int m_max) {
    BruteResult best;
    ChannelParams at = ch;
    at.length_km = length_km;
    for (int n = 0; n <= n_max; ++n) {
        for (int m = 1; m <= m_max; ++m) {
            const double r = end_to_end_rate(at, hw, {n, m}, model);
            if (r > best.rate) {
                best = {r, n, m};
            }
        }
    }
    return best;
}

} // namespace

TEST_CASE("exact envelope matches a brute-force grid search") {
    const ChannelParams ch = fiber();
    const HardwareParams hw = baseline_hw();
    for (double length : {50.0, 100.0, 250.0}) {
        const EnvelopePoint pt =
            exact_envelope(ch, hw, length, LossModel::ideal);
        const BruteResult oracle =
            brute_force(ch, hw, length, LossModel::ideal, 40, 400);
        CHECK(pt.rate == doctest::Approx(oracle.rate).epsilon(1e-14));
        CHECK(pt.n_opt == oracle.n);
        CHECK(pt.m_opt == oracle.m);
    }
}

TEST_CASE("serial and parallel searches agree bit for bit") {
    const ChannelParams ch = fiber();
    const HardwareParams hw = baseline_hw();
    for (double length : {75.0, 180.0, 420.0}) {
        const EnvelopePoint a =
            exact_envelope(ch, hw, length, LossModel::ideal);
        const EnvelopePoint b =
            exact_envelope_serial(ch, hw, length, LossModel::ideal);
        CHECK(a.rate == b.rate);
        CHECK(a.n_opt == b.n_opt);
        CHECK(a.m_opt == b.m_opt);
    }
}

TEST_CASE("argmax is stable across worker counts") {
    const ChannelParams ch = fiber();
    const HardwareParams hw = baseline_hw();
    setenv("REPEATERLAB_THREADS", "1", 1);
    const EnvelopePoint one = exact_envelope(ch, hw, 300.0, LossModel::ideal);
    setenv("REPEATERLAB_THREADS", "7", 1);
    const EnvelopePoint seven = exact_envelope(ch, hw, 300.0, LossModel::ideal);
    unsetenv("REPEATERLAB_THREADS");
    CHECK(one.rate == seven.rate);
    CHECK(one.n_opt == seven.n_opt);
    CHECK(one.m_opt == seven.m_opt);
}

TEST_CASE("envelope dominates every fixed-m curve") {
    const ChannelParams ch = fiber();
    const HardwareParams hw = baseline_hw();
    const std::vector<double> grid{100.0, 200.0, 300.0, 400.0};
    std::vector<EnvelopePoint> joint;
    for (const double length : grid)
        joint.push_back(exact_envelope(ch, hw, length, LossModel::ideal));
    for (int m : {1, 2, 5, 10, 40}) {
        const std::vector<EnvelopePoint> fixed =
            fixed_m_envelope(ch, hw, m, grid, LossModel::ideal);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(joint[i].rate >= fixed[i].rate * (1.0 - 1e-14));
    }
}

TEST_CASE("envelope rate is nonincreasing in distance") {
    const ChannelParams ch = fiber();
    const HardwareParams hw = baseline_hw();
    double prev = std::numeric_limits<double>::infinity();
    for (double length = 50.0; length <= 500.0; length += 50.0) {
        const double r =
            exact_envelope(ch, hw, length, LossModel::ideal).rate;
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("tiny caps are reported as boundary hits") {
    const EnvelopePoint pt = exact_envelope(fiber(), baseline_hw(), 400.0,
                                            LossModel::ideal, {1, 50});
    CHECK(pt.n_opt == 1);
    CHECK(pt.cap_hit);
}

TEST_CASE("fixed m=1 decays exponentially in alpha L") {
    const ChannelParams ch = fiber();
    const HardwareParams hw = baseline_hw();
    std::vector<double> grid;
    for (double length = 100.0; length <= 500.0; length += 25.0)
        grid.push_back(length);
    const std::vector<EnvelopePoint> pts =
        fixed_m_envelope(ch, hw, 1, grid, LossModel::ideal);
    const ScalingFit fit = fit_scaling(ch, pts, ScalingModel::linear_exponent);
    CHECK(fit.r_squared >= 0.99);
    CHECK(fit.slope < 0.0);
}

TEST_CASE("scaling fit recovers a generating model exactly") {
    const ChannelParams ch = fiber();
    const double coeff = 2.0 * std::sqrt(std::log(1.0 / 0.255));
    std::vector<EnvelopePoint> pts;
    for (double length = 100.0; length <= 600.0; length += 50.0) {
        EnvelopePoint p;
        p.length_km = length;
        p.rate = 3.2e7 * std::exp(-coeff *
                                  std::sqrt(ch.alpha_natural() * length));
        pts.push_back(p);
    }
    const ScalingFit fit = fit_scaling(ch, pts, ScalingModel::sqrt_exponent);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.slope == doctest::Approx(-coeff).epsilon(1e-9));
}

TEST_CASE("scaling fit input validation") {
    const ChannelParams ch = fiber();
    std::vector<EnvelopePoint> pts(3);
    CHECK_THROWS_AS(fit_scaling(ch, pts, ScalingModel::sqrt_exponent),
                    std::invalid_argument);
    pts.assign(6, EnvelopePoint{});
    for (EnvelopePoint& p : pts) {
        p.length_km = 100.0;  // all identical: degenerate abscissae
        p.rate = 1.0;
    }
    CHECK_THROWS_AS(fit_scaling(ch, pts, ScalingModel::sqrt_exponent),
                    std::invalid_argument);
    pts[0].rate = 0.0;
    CHECK_THROWS_AS(fit_scaling(ch, pts, ScalingModel::sqrt_exponent),
                    std::invalid_argument);
}

TEST_CASE("crossover against the repeaterless benchmark") {
    const ChannelParams ch = fiber();
    SUBCASE("perfect hardware crosses at finite distance") {
        HardwareParams hw = baseline_hw();
        hw.mu = 1.0;
        hw.q = 1.0;
        const auto cross =
            crossover_distance(ch, hw, LossModel::ideal, {1.0, 400.0, 2.0});
        REQUIRE(cross.has_value());
        CHECK(*cross > 1.0);
        CHECK(*cross < 400.0);
        // just past the crossing the envelope really beats the benchmark
        const EnvelopePoint pt =
            exact_envelope(ch, hw, *cross + 0.5, LossModel::ideal);
        CHECK(pt.beats_plob);
    }
    SUBCASE("zero rate never crosses") {
        HardwareParams hw = baseline_hw();
        hw.mu = 0.0;
        CHECK_FALSE(crossover_distance(ch, hw, LossModel::ideal,
                                       {1.0, 100.0, 5.0})
                        .has_value());
    }
}
