#include "disclose/exogenous.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "disclose/bisect.hpp"
#include "disclose/errors.hpp"

namespace disclose {

namespace {

constexpr double kEps = 1e-10;

void check_alpha(double alpha) {
    if (alpha == 1.0)
        throw UnsupportedBoundary("alpha = 1: any distribution with no mass below r* is an equilibrium");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in [0,1)");
}

// z_function with infeasible candidates mapped to -inf (the slope diverges there).
double z_or_minus_inf(const Prior& prior, int n, double alpha, double v_L, double r) {
    if (!candidate_exists(prior, n, v_L, r)) return -std::numeric_limits<double>::infinity();
    return z_function(prior, n, alpha, v_L, r);
}

} // namespace

const char* to_string(Regime r) {
    switch (r) {
    case Regime::NoDisclosureAtBottom: return "NoDisclosureAtBottom";
    case Regime::DisclosureAtBottom: return "DisclosureAtBottom";
    case Regime::FullDisclosure: return "FullDisclosure";
    }
    return "?";
}

double visit_probability(const Prior& prior, int n, double v_L) {
    double F = prior.cdf(v_L);
    if (1.0 - F < 1e-6) {
        double sum = 0.0, term = 1.0;
        for (int k = 0; k < n; ++k) {
            sum += term;
            term *= F;
        }
        return sum / n;
    }
    return (1.0 - std::pow(F, n)) / (n * (1.0 - F));
}

double posterior_belief(double alpha, double eta) { return alpha * eta / (alpha * eta + 1.0 - alpha); }

double z_function(const Prior& prior, int n, double alpha, double v_L, double r) {
    // The slope term is below 1e-300 and vanishes next to the visit term.
    if (slope_underflows(prior, n, v_L, r))
        return alpha * (visit_probability(prior, n, v_L) - std::pow(prior.cdf(v_L), n - 1));
    BetaSolution b = solve_beta(prior, n, v_L, r);
    double eta = visit_probability(prior, n, v_L);
    return alpha * (eta - std::pow(prior.cdf(v_L), n - 1)) - (1.0 - alpha) * b.beta * (r - v_L);
}

double r_lower_bar(const Prior& prior, int n, double alpha) {
    check_alpha(alpha);
    if (alpha == 0.0) return 0.0;
    const double mu = prior.mean();
    return bisect([&](double r) { return z_function(prior, n, alpha, 0.0, r); }, kEps, mu - kEps,
                  BisectOptions{1e-13, 1e-15, 200});
}

double v_L_equilibrium(const Prior& prior, int n, double alpha, double r, double rl) {
    auto Z = [&](double x) { return z_or_minus_inf(prior, n, alpha, x, r); };
    // Within the threshold's own tolerance of r_lower_bar the sign of Z(0) decides.
    if (r <= rl || Z(0.0) >= 0.0) return 0.0;
    return bisect(Z, 0.0, r - kEps * r, BisectOptions{1e-13, 1e-15, 200});
}

ExogEquilibrium solve_exog(const Prior& prior, int n, double alpha, double r,
                           std::optional<double> r_lower_bar_hint) {
    check_alpha(alpha);
    if (n < 2) throw DomainError("n must be at least 2");
    if (!(r > 0.0 && r < 1.0)) throw DomainError("reservation value must lie in (0,1)");

    if (alpha == 0.0) {
        Candidate c = full_disclosure_candidate(prior, n, r);
        double eta = visit_probability(prior, n, r);
        return {alpha, r, r, c, eta, 0.0, Regime::FullDisclosure, 0.0, build_G(c)};
    }

    const double rl = r_lower_bar_hint ? *r_lower_bar_hint : r_lower_bar(prior, n, alpha);
    const double v_L = v_L_equilibrium(prior, n, alpha, r, rl);
    const Regime regime = v_L > 0.0 ? Regime::DisclosureAtBottom : Regime::NoDisclosureAtBottom;

    if (v_L > 0.0) {
        // The root is unique because Z crosses zero once, from below; check the
        // sign pattern on a coarse grid.
        bool seen_positive = false;
        for (int i = 0; i < 16; ++i) {
            double x = r * (i + 0.5) / 16.0;
            double z = z_or_minus_inf(prior, n, alpha, x, r);
            if (seen_positive && z < -1e-9)
                throw ValidationFailure("z-single-crossing",
                                        "Z turns negative again near v_L=" + std::to_string(x));
            if (z > 0.0) seen_positive = true;
        }
    }

    Candidate c = make_candidate(prior, n, v_L, r);
    double eta = visit_probability(prior, n, v_L);
    double at = posterior_belief(alpha, eta);
    ExogEquilibrium eq{alpha, r, v_L, c, eta, at, regime, rl, build_G(c)};

    double F = prior.cdf(v_L);
    double eta_check = F < 1.0 ? (1.0 - std::pow(F, n)) / (n * (1.0 - F)) : 1.0;
    if (F < 1.0 - 1e-6 && std::fabs(eta - eta_check) > 1e-10)
        throw ValidationFailure("visit-probability", "eta inconsistent with F(v_L)");
    if ((v_L == 0.0 && r > rl + 1e-9) || (v_L > 0.0 && r <= rl))
        throw ValidationFailure("regime", "bottom regime disagrees with r_lower_bar");
    if (v_L > 0.0) {
        double slope = prior.cdf_power_derivative(v_L, n - 1.0);
        if ((1.0 - alpha) * c.beta < slope - 1e-9)
            throw ValidationFailure("kink-at-v_L", "multiplier not convex at v_L");
    } else if (z_function(prior, n, alpha, 0.0, r) < -1e-9) {
        throw ValidationFailure("phi-at-zero", "multiplier negative at zero");
    }
    validate_candidate(c);
    return eq;
}

} // namespace disclose
