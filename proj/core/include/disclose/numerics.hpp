#pragma once

#include <algorithm>
#include <cmath>

namespace disclose {

// (x0 + d)^e - x0^e, accurate when d is small relative to x0.
inline double pow_diff(double x0, double d, double e) {
    if (x0 > 0.0 && d < x0) return std::pow(x0, e) * std::expm1(e * std::log1p(d / x0));
    return std::pow(std::max(x0 + d, 0.0), e) - std::pow(std::max(x0, 0.0), e);
}

// x^k for integer-valued k >= 0 stored as int.
inline double ipow(double x, int k) { return std::pow(x, k); }

} // namespace disclose
