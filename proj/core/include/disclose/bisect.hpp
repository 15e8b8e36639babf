#pragma once

#include <cmath>
#include <string>

#include "disclose/errors.hpp"

namespace disclose {

struct BisectOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    int max_iter = 200;
};

// Root of f on [lo, hi] by bisection. f(lo) and f(hi) must differ in sign
// (zero counts as either sign). Infinite values are fine.
template <class F>
double bisect(F&& f, double lo, double hi, BisectOptions opt = {}) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw BracketFailure("bisect: no sign change on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    const bool lo_negative = std::signbit(flo);
    for (int i = 0; i < opt.max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= opt.abs_tol + opt.rel_tol * std::fabs(mid)) return mid;
        if (mid <= lo || mid >= hi) return mid;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace disclose
