#include "repeaterlab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "repeaterlab/analytic_bounds.hpp"
#include "repeaterlab/rng.hpp"

namespace repeaterlab {

int resolve_workers(int hint) {
    if (hint > 0)
        return hint;
    if (const char* env = std::getenv("REPEATERLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

// Everything below at most this many block lengths is scanned exhaustively;
// larger windows go through geometric coarse-to-fine refinement first.
constexpr long long kExhaustiveLimit = 65536;
constexpr int kCoarsePoints = 1024;

struct BestM {
    double rate = -1.0;
    long long m = 1;
    bool cap_hit = false;
};

struct RateKernel {
    double alpha_l = 0.0;
    double mu = 0.0;
    double q = 0.0;
    double tau = 0.0;
    double lambda_t = 1.0;
    double lambda_mem = 1.0;
    int channels = 1;
    LossModel model = LossModel::ideal;

    double operator()(int n, long long m) const {
        const double p = mu * std::exp(-alpha_l / (n + 1));
        const double attempts = static_cast<double>(channels) * m;
        const double big_p =
            p >= 1.0 ? 1.0 : -std::expm1(attempts * std::log1p(-p));
        double q_eff = q;
        if (model != LossModel::ideal)
            q_eff *= std::pow(lambda_t, std::log2(static_cast<double>(m)));
        if (model == LossModel::switch_plus_worst_decoherence)
            q_eff *= std::pow(lambda_mem, static_cast<double>(m));
        return std::pow(big_p, n + 1) * std::pow(q_eff, n) / (m * tau);
    }
};

void scan_exhaustive(const RateKernel& k, int n, long long lo, long long hi,
                     BestM& best) {
    for (long long m = lo; m <= hi; ++m) {
        const double r = k(n, m);
        if (r > best.rate) {
            best.rate = r;
            best.m = m;
        }
    }
}

// Best block length for a fixed n. The rate is smooth in m with a single
// interior maximum in practice; a geometric coarse scan locates the basin
// and shrinking windows finish with an exhaustive pass. Small windows are
// scanned exhaustively outright.
BestM best_m_for_n(const RateKernel& k, int n, long long m_max) {
    BestM best;
    if (m_max <= kExhaustiveLimit) {
        scan_exhaustive(k, n, 1, m_max, best);
        best.cap_hit = best.m == m_max;
        return best;
    }

    long long lo = 1, hi = m_max;
    while (hi - lo + 1 > kExhaustiveLimit) {
        const double ratio =
            std::pow(static_cast<double>(hi) / static_cast<double>(lo),
                     1.0 / kCoarsePoints);
        long long best_idx = 0;
        double best_rate = -1.0;
        long long prev = -1;
        std::vector<long long> samples;
        samples.reserve(kCoarsePoints + 1);
        double x = static_cast<double>(lo);
        for (int i = 0; i <= kCoarsePoints; ++i, x *= ratio) {
            long long m = i == kCoarsePoints
                              ? hi
                              : std::llround(std::min(x, static_cast<double>(hi)));
            m = std::clamp(m, lo, hi);
            if (m == prev)
                continue;
            prev = m;
            samples.push_back(m);
            const double r = k(n, m);
            if (r > best_rate) {
                best_rate = r;
                best_idx = static_cast<long long>(samples.size()) - 1;
            }
        }
        const long long new_lo =
            best_idx > 0 ? samples[best_idx - 1] : samples.front();
        const long long new_hi = best_idx + 1 < static_cast<long long>(samples.size())
                                     ? samples[best_idx + 1]
                                     : samples.back();
        if (new_lo == lo && new_hi == hi)
            break;  // no progress; fall through to exhaustive on the window
        lo = new_lo;
        hi = new_hi;
    }
    scan_exhaustive(k, n, lo, hi, best);
    best.cap_hit = best.m == m_max;
    return best;
}

RateKernel make_kernel(const ChannelParams& ch, const HardwareParams& hw,
                       double length_km, LossModel model) {
    ch.validate();
    hw.validate();
    if (length_km < 0.0)
        throw std::domain_error("length_km must be >= 0");
    RateKernel k;
    k.alpha_l = ch.alpha_natural() * length_km;
    k.mu = hw.mu;
    k.q = hw.q;
    k.tau = hw.tau_s;
    k.lambda_t = hw.lambda_t;
    k.lambda_mem = hw.lambda_mem;
    k.channels = hw.channels;
    k.model = model;
    return k;
}

std::pair<int, long long> resolve_caps(const ChannelParams& ch,
                                       const HardwareParams& hw,
                                       double length_km, LossModel model,
                                       SearchCaps caps) {
    int n_max = caps.n_max;
    long long m_max = caps.m_max;
    if (n_max < 0 || m_max < 0) {
        // The continuous optima locate the search basin; 4x margin with a
        // floor of 50, and a hard ceiling so degenerate m* cannot explode
        // the search (a boundary hit is reported via cap_hit).
        double n_star = 0.0, m_star = 0.0;
        try {
            HardwareParams hw_cap = hw;
            if (model == LossModel::ideal)
                hw_cap.lambda_t = 1.0;
            const OptimalParams p = optimal_params(ch, hw_cap, length_km);
            n_star = std::max(p.n_star, 0.0);
            m_star = std::isfinite(p.m_star) ? p.m_star : 0.0;
        } catch (const bound_inapplicable_error&) {
            // fall back to the floors
        }
        if (n_max < 0)
            n_max = std::max(50, static_cast<int>(std::ceil(4.0 * n_star)));
        if (m_max < 0)
            m_max = std::max<long long>(
                50, static_cast<long long>(
                        std::ceil(std::min(4.0 * m_star, 1e8))));
    }
    if (n_max < 0)
        n_max = 50;
    if (m_max < 1)
        m_max = 50;
    return {n_max, m_max};
}

EnvelopePoint assemble_point(const ChannelParams& ch, const HardwareParams& hw,
                             double length_km, int n_opt, const BestM& best,
                             int n_max) {
    EnvelopePoint pt;
    pt.length_km = length_km;
    pt.rate = best.rate;
    pt.n_opt = n_opt;
    pt.m_opt = static_cast<int>(best.m);
    ChannelParams ch_at = ch;
    ch_at.length_km = length_km;
    pt.plob = plob_rate(ch_at, hw);
    pt.beats_plob = pt.rate > pt.plob;
    pt.cap_hit = best.cap_hit || n_opt == n_max;
    return pt;
}

} // namespace

EnvelopePoint exact_envelope_serial(const ChannelParams& ch,
                                    const HardwareParams& hw, double length_km,
                                    LossModel model, SearchCaps caps) {
    const auto [n_max, m_max] = resolve_caps(ch, hw, length_km, model, caps);
    const RateKernel k = make_kernel(ch, hw, length_km, model);

    BestM best;
    int n_opt = 0;
    for (int n = 0; n <= n_max; ++n) {
        const BestM b = best_m_for_n(k, n, m_max);
        if (b.rate > best.rate) {
            best = b;
            n_opt = n;
        }
    }
    return assemble_point(ch, hw, length_km, n_opt, best, n_max);
}

EnvelopePoint exact_envelope(const ChannelParams& ch, const HardwareParams& hw,
                             double length_km, LossModel model,
                             SearchCaps caps) {
    const auto [n_max, m_max] = resolve_caps(ch, hw, length_km, model, caps);
    const RateKernel k = make_kernel(ch, hw, length_km, model);

    std::vector<BestM> per_n(static_cast<std::size_t>(n_max) + 1);
    const int workers = resolve_workers(0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers)
#endif
    for (int n = 0; n <= n_max; ++n)
        per_n[static_cast<std::size_t>(n)] = best_m_for_n(k, n, m_max);
    (void)workers;

    // Merge in ascending n; strict comparison keeps the smallest n on ties.
    BestM best;
    int n_opt = 0;
    for (int n = 0; n <= n_max; ++n) {
        if (per_n[static_cast<std::size_t>(n)].rate > best.rate) {
            best = per_n[static_cast<std::size_t>(n)];
            n_opt = n;
        }
    }
    return assemble_point(ch, hw, length_km, n_opt, best, n_max);
}

std::vector<EnvelopePoint> fixed_m_envelope(const ChannelParams& ch,
                                            const HardwareParams& hw, int m,
                                            const std::vector<double>& l_grid,
                                            LossModel model, SearchCaps caps) {
    if (m < 1)
        throw std::domain_error("fixed_m_envelope requires m >= 1");
    std::vector<EnvelopePoint> out;
    out.reserve(l_grid.size());
    for (const double length_km : l_grid) {
        const auto [n_max, m_unused] =
            resolve_caps(ch, hw, length_km, model, caps);
        (void)m_unused;
        const RateKernel k = make_kernel(ch, hw, length_km, model);
        BestM best;
        int n_opt = 0;
        for (int n = 0; n <= n_max; ++n) {
            const double r = k(n, m);
            if (r > best.rate) {
                best.rate = r;
                best.m = m;
                n_opt = n;
            }
        }
        best.cap_hit = false;
        out.push_back(assemble_point(ch, hw, length_km, n_opt, best, n_max));
    }
    return out;
}

ScalingFit fit_scaling(const ChannelParams& ch,
                       const std::vector<EnvelopePoint>& points,
                       ScalingModel model) {
    if (points.size() < 5)
        throw std::invalid_argument("fit_scaling needs at least 5 points");
    const double alpha = ch.alpha_natural();
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const EnvelopePoint& p : points) {
        if (!(p.rate > 0.0))
            throw std::invalid_argument("fit_scaling needs positive rates");
        const double al = alpha * p.length_km;
        xs.push_back(model == ScalingModel::sqrt_exponent ? std::sqrt(al) : al);
        ys.push_back(std::log(p.rate));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("fit_scaling: degenerate abscissae");

    ScalingFit fit;
    fit.model = model;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::optional<double> crossover_distance(const ChannelParams& ch,
                                         const HardwareParams& hw,
                                         LossModel model,
                                         CrossoverWindow window) {
    if (!(window.lo_km > 0.0 && window.hi_km > window.lo_km &&
          window.coarse_km > 0.0))
        throw std::invalid_argument("crossover_distance: bad search window");

    const long long steps = static_cast<long long>(
        std::floor((window.hi_km - window.lo_km) / window.coarse_km));
    std::vector<unsigned char> beats(static_cast<std::size_t>(steps) + 1, 0);
    const int workers = resolve_workers(0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers)
#endif
    for (long long i = 0; i <= steps; ++i) {
        const double length = window.lo_km + i * window.coarse_km;
        const EnvelopePoint pt =
            exact_envelope_serial(ch, hw, length, model);
        beats[static_cast<std::size_t>(i)] = pt.beats_plob ? 1 : 0;
    }
    (void)workers;

    long long first = -1;
    for (long long i = 0; i <= steps; ++i) {
        if (beats[static_cast<std::size_t>(i)]) {
            first = i;
            break;
        }
    }
    if (first < 0)
        return std::nullopt;
    if (first == 0)
        return window.lo_km;

    double lo = window.lo_km + (first - 1) * window.coarse_km;
    double hi = window.lo_km + first * window.coarse_km;
    while (hi - lo > 0.1) {
        const double mid = 0.5 * (lo + hi);
        const EnvelopePoint pt = exact_envelope_serial(ch, hw, mid, model);
        if (pt.beats_plob)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace repeaterlab
