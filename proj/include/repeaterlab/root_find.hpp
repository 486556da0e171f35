#pragma once

#include <functional>

namespace repeaterlab {

struct BisectionResult {
    double root = 0.0;
    double f_at_root = 0.0;
    int iterations = 0;
    bool multiple_sign_changes = false;
};

// Bracketed bisection. The bracket [lo, hi] must have f(lo)*f(hi) <= 0.
// Relative tolerance on the interval width; iteration cap 200.
BisectionResult bisect(const std::function<double(double)>& f, double lo,
                       double hi, double rel_tol = 1e-12, int max_iter = 200);

// Scan (lo, hi] on a geometric grid for the first sign change of f, then
// bisect inside it. Expands hi by factors of 2 (up to max_expansions) if no
// change is found in the initial window. Returns the smallest root located;
// multiple_sign_changes is set when the scan sees more than one crossing.
// Throws root_not_found_error if no sign change is ever found.
BisectionResult solve_smallest_root(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    double rel_tol = 1e-12,
                                    int max_expansions = 60,
                                    int scan_points = 256);

} // namespace repeaterlab
