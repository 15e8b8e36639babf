#pragma once

#include <utility>
#include <vector>

namespace disclose {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre of f on [a, b] with `panels` equal panels.
template <class F>
double integrate_gl(F&& f, double a, double b, int panels = 8, int order = 16) {
    if (b <= a) return 0.0;
    const GaussRule& g = gauss_legendre(order);
    double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        double part = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) part += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
        total += 0.5 * h * part;
    }
    return total;
}

} // namespace disclose
