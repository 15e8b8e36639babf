#include "disclose/endogenous.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "disclose/bisect.hpp"
#include "disclose/errors.hpp"

namespace disclose {

namespace {

const BisectOptions kTight{1e-13, 1e-15, 200};
// r_lower_bar is itself a bisection root; compare it with mu - s at this slack.
constexpr double kRegimeTol = 1e-12;

void check_cost(const Prior& prior, double s) {
    if (!(s > 0.0 && s < prior.mean()))
        throw DomainError("search cost must lie in (0, mean): s=" + std::to_string(s));
}

void fail(const char* invariant, const std::string& detail) { throw ValidationFailure(invariant, detail); }

} // namespace

double r_full_info(const Prior& prior, double s) {
    check_cost(prior, s);
    auto g = [&](double r) { return (1.0 - r) - prior.integral_cdf(r, 1.0) - s; };
    return bisect(g, 0.0, 1.0, kTight);
}

double r_search(const Prior& prior, double v_L, double s) {
    if (!(v_L >= 0.0 && v_L < 1.0)) throw DomainError("r_search: v_L must lie in [0,1)");
    return (prior.partial_mean(v_L, 1.0) - s) / (1.0 - prior.cdf(v_L));
}

Equilibrium solve_endog(const Prior& prior, int n, double alpha, double s) {
    check_cost(prior, s);
    if (n < 2) throw DomainError("n must be at least 2");
    if (alpha == 1.0)
        throw UnsupportedBoundary("alpha = 1: any distribution with no mass below r* is an equilibrium");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in [0,1)");
    if (!check_convexity(prior, n)) throw DomainError("F^{n-1} is not convex for this prior and n");

    const double mu = prior.mean();
    const double rfi = r_full_info(prior, s);
    Equilibrium eq{MarketParams{prior, n, alpha, s}, 0, 0, 0, 0, 0, 0, 0, 0, rfi, false, false, false,
                   Candidate{}, PosteriorDistribution::full_disclosure(prior, n)};

    double r;
    double rl = 0.0;
    if (alpha == 0.0) {
        r = rfi;
    } else {
        rl = r_lower_bar(prior, n, alpha);
        if (rl >= mu - s - kRegimeTol) {
            r = mu - s;
            rl = std::max(rl, r);
        } else {
            auto g = [&](double x) { return r_search(prior, v_L_equilibrium(prior, n, alpha, x, rl), s) - x; };
            r = bisect(g, mu - s + 1e-12, rfi - 1e-12, kTight);
        }
    }

    ExogEquilibrium ex = solve_exog(prior, n, alpha, r, rl);
    eq.r_star = r;
    eq.v_L_star = ex.v_L_eq;
    eq.v_H_star = ex.candidate.v_H;
    eq.v_T_star = ex.candidate.v_T;
    eq.beta_star = ex.candidate.beta;
    eq.eta = ex.eta;
    eq.alpha_tilde = ex.alpha_tilde;
    eq.r_lower_bar = rl;
    eq.full_disclosure = alpha == 0.0;
    eq.bottom_disclosure = ex.v_L_eq > 0.0;
    eq.top_disclosure = ex.candidate.v_H < 1.0;
    eq.candidate = ex.candidate;
    eq.G = ex.G;
    validate_equilibrium(eq);
    return eq;
}

void validate_equilibrium(const Equilibrium& eq) {
    const Prior& F = eq.params.prior;
    const double s = eq.params.s, r = eq.r_star, vL = eq.v_L_star;
    double reduced = F.partial_mean(vL, 1.0) - r * (1.0 - F.cdf(vL)) - s;
    if (std::fabs(reduced) > 1e-9) fail("search-equation", "residual " + std::to_string(reduced));
    double original = (1.0 - r) - eq.G.integral_cdf(r, 1.0) - s;
    if (std::fabs(original) > 1e-8) fail("reservation-value", "residual " + std::to_string(original));
    if (eq.full_disclosure) return;
    if (!(r < eq.r_full_info)) fail("below-full-information", "r* is not below the full-information value");
    const double mu = F.mean();
    if (eq.bottom_disclosure == (eq.r_lower_bar >= mu - s - kRegimeTol))
        fail("bottom-regime", "bottom disclosure flag disagrees with r_lower_bar vs mu - s");
    if (!eq.bottom_disclosure && r != mu - s) fail("bottom-regime", "r* must equal mu - s without bottom disclosure");
}

int n_lower_bar(const Prior& prior, double alpha, double s) {
    check_cost(prior, s);
    const double target = prior.mean() - s;
    auto ok = [&](int n) { return r_lower_bar(prior, n, alpha) >= target; };
    if (ok(2)) return 2;
    int lo = 2, hi = 4;
    while (!ok(hi)) {
        lo = hi;
        if (hi >= (1 << 20)) throw CapExceeded("n_lower_bar: no threshold below 2^20");
        hi *= 2;
    }
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

double v_H_large_n(const Prior& prior, int n, double s) {
    check_cost(prior, s);
    const double c = prior.mean() - s;
    auto psi = [&](double x) { return prior.partial_mean(0.0, x) - c * prior.cdf(x) - prior.cdf(x) * (x - c) / n; };
    if (psi(1.0) <= 0.0) throw NoInteriorRoot("v_H_large_n: contact point is 1 at this n");
    return bisect(psi, c, 1.0, kTight);
}

LimitEquilibrium limit_equilibrium(const Prior& prior, double alpha, double s) {
    (void)alpha;
    check_cost(prior, s);
    const double c = prior.mean() - s;
    auto psi = [&](double x) { return prior.partial_mean(0.0, x) - c * prior.cdf(x); };
    double x = bisect(psi, c, 1.0, kTight);
    double mass = prior.cdf(x);
    PosteriorDistribution G(prior, 1, {Flat{0.0, c, 0.0}, Flat{c, x, mass}, FullDisclosure{x, 1.0}}, Atom{c, mass});
    return {x, c, mass, G};
}

} // namespace disclose
