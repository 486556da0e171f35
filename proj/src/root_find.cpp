#include "repeaterlab/root_find.hpp"

#include <cmath>
#include <sstream>

#include "repeaterlab/errors.hpp"

namespace repeaterlab {

BisectionResult bisect(const std::function<double(double)>& f, double lo,
                       double hi, double rel_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return {lo, 0.0, 0, false};
    if (fhi == 0.0)
        return {hi, 0.0, 0, false};
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream msg;
        msg << "bisect: no sign change on [" << lo << ", " << hi << "], f(lo)="
            << flo << ", f(hi)=" << fhi;
        throw root_not_found_error(msg.str());
    }

    BisectionResult res;
    double mid = lo;
    for (int i = 0; i < max_iter; ++i) {
        mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        res.iterations = i + 1;
        if (fmid == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi)))
            break;
    }
    res.root = 0.5 * (lo + hi);
    res.f_at_root = f(res.root);
    return res;
}

BisectionResult solve_smallest_root(const std::function<double(double)>& f,
                                    double lo, double hi, double rel_tol,
                                    int max_expansions, int scan_points) {
    double window_lo = lo;
    double window_hi = hi;
    for (int expansion = 0; expansion <= max_expansions; ++expansion) {
        // Geometric scan preserves resolution near the lower endpoint.
        const double ratio = std::pow(window_hi / window_lo,
                                      1.0 / static_cast<double>(scan_points));
        double x_prev = window_lo;
        double f_prev = f(x_prev);
        double bracket_lo = 0.0, bracket_hi = 0.0;
        int sign_changes = 0;
        for (int i = 1; i <= scan_points; ++i) {
            const double x = (i == scan_points) ? window_hi : x_prev * ratio;
            const double fx = f(x);
            if (f_prev == 0.0)
                return {x_prev, 0.0, 0, false};
            if ((fx > 0.0) != (f_prev > 0.0) || fx == 0.0) {
                ++sign_changes;
                if (sign_changes == 1) {
                    bracket_lo = x_prev;
                    bracket_hi = x;
                }
            }
            x_prev = x;
            f_prev = fx;
        }
        if (sign_changes > 0) {
            BisectionResult res = bisect(f, bracket_lo, bracket_hi, rel_tol);
            res.multiple_sign_changes = sign_changes > 1;
            return res;
        }
        window_hi *= 2.0;
    }
    std::ostringstream msg;
    msg << "no sign change found in [" << lo << ", " << window_hi
        << "] after " << max_expansions << " bracket expansions; f(lo)="
        << f(lo) << ", f(hi)=" << f(window_hi);
    throw root_not_found_error(msg.str());
}

} // namespace repeaterlab
