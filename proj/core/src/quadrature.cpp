#include "disclose/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace disclose {

namespace {

GaussRule build_rule(int order) {
    GaussRule g;
    g.nodes.resize(order);
    g.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        g.nodes[i] = x;
        g.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

constexpr int kMaxOrder = 64;

} // namespace

const GaussRule& gauss_legendre(int order) {
    static const std::vector<GaussRule> table = [] {
        std::vector<GaussRule> t(kMaxOrder + 1);
        for (int n = 1; n <= kMaxOrder; ++n) t[n] = build_rule(n);
        return t;
    }();
    if (order < 1 || order > kMaxOrder) throw std::invalid_argument("gauss_legendre: order out of range");
    return table[order];
}

} // namespace disclose
