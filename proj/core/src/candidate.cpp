#include "disclose/candidate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "disclose/bisect.hpp"
#include "disclose/errors.hpp"
#include "disclose/numerics.hpp"

namespace disclose {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const BisectOptions kFine{0.0, 1e-15, 200};

double branch_power(const Prior& prior, int n, double v) { return prior.cdf_power(v, n - 1.0); }

// Inside the slope search the contact point only needs moderate accuracy: H* is
// stationary in v_H there because G meets F at v_H.
const BisectOptions kSearch{0.0, 1e-10, 200};

std::optional<std::pair<double, RootBundle>> contact(const Prior& prior, int n, double v_L, double r,
                                                     double beta, bool precise) {
    const double m = n - 1.0;
    const double a = branch_power(prior, n, v_L);
    auto D = [&](double v) { return a + beta * (v - r) - branch_power(prior, n, v); };
    RootBundle rb;
    rb.v_bar = r + (1.0 - a) / beta;

    if (prior.power_is_affine(n)) {
        // F^{n-1}(v) = v, so D is linear with slope beta - 1.
        if (beta <= 1.0) return std::nullopt;
        double v1 = (beta * r - a) / (beta - 1.0);
        if (v1 > 1.0) return std::nullopt;
        rb.v_m = 1.0;
        rb.v_1D = std::max(v1, r);
        if (v1 == 1.0) rb.v_2D = 1.0;
        return std::make_pair(1.0, rb);
    }

    const BisectOptions& opt = precise ? kFine : kSearch;
    auto slope = [&](double v) { return beta - prior.cdf_power_derivative(v, m); };
    if (slope(r) <= 0.0) return std::nullopt;
    if (slope(1.0) >= 0.0) {
        rb.v_m = 1.0;
    } else {
        double vm = prior.cdf_power_derivative_inverse(beta, m);
        rb.v_m = vm > r && vm < 1.0 ? vm : bisect(slope, r, 1.0, opt);
    }
    if (D(rb.v_m) <= 0.0) return std::nullopt;
    if (precise) rb.v_1D = bisect(D, r, rb.v_m, kFine);
    double d1 = D(1.0);
    double v_H;
    if (d1 >= 0.0) {
        v_H = 1.0;
        if (d1 == 0.0) rb.v_2D = 1.0;
    } else {
        v_H = bisect(D, rb.v_m, 1.0, opt);
        rb.v_2D = v_H;
    }
    return std::make_pair(v_H, rb);
}

// H* at a known contact point.
double h_value(const Prior& prior, int n, double v_L, double r, double beta, double v_H,
               double v_bar) {
    const double m = n - 1.0;
    const double FL = prior.cdf(v_L);
    const double a = std::pow(FL, m);
    double inner = prior.integral_cdf(v_L, v_H) - FL * (r - v_L);
    double hi = std::min(v_H, v_bar);
    double branch = 0.0;
    if (hi > r) branch = pow_diff(a, beta * (hi - r), (m + 1.0) / m) * m / ((m + 1.0) * beta);
    if (v_H > v_bar) branch += v_H - v_bar;
    return inner - branch;
}

void fail(const char* invariant, const std::string& detail) { throw ValidationFailure(invariant, detail); }

} // namespace

bool candidate_exists(const Prior& prior, int n, double v_L, double r) {
    (void)n;
    if (!(v_L >= 0.0 && v_L < r && r < 1.0)) return false;
    double tail = 1.0 - prior.cdf(v_L);
    if (tail <= 0.0) return false;
    return prior.partial_mean(v_L, 1.0) / tail > r + 1e-12;
}

double d_function(const Prior& prior, int n, double v_L, double r, double beta, double v) {
    return branch_power(prior, n, v_L) + beta * (v - r) - branch_power(prior, n, v);
}

std::optional<std::pair<double, RootBundle>> contact_point(const Prior& prior, int n, double v_L,
                                                           double r, double beta) {
    return contact(prior, n, v_L, r, beta, true);
}

double h_star(const Prior& prior, int n, double v_L, double r, double beta) {
    auto cp = contact_point(prior, n, v_L, r, beta);
    if (!cp) throw NoInteriorRoot("h_star: D has no positive region at this slope");
    return h_value(prior, n, v_L, r, beta, cp->first, cp->second.v_bar);
}

double beta_from_moments(const Prior& prior, int n, double v_L, double v_H, double r) {
    TruncatedMoments tm = truncated_moments(prior, v_L, v_H, n);
    return (tm.eta_tilde - branch_power(prior, n, v_L)) / (tm.mu_tilde - r);
}

namespace {

double search_gap(const Prior& prior, int n, double v_L, double r, double beta) {
    auto cp = contact(prior, n, v_L, r, beta, false);
    if (!cp) return kInf;
    return h_value(prior, n, v_L, r, beta, cp->first, cp->second.v_bar);
}

} // namespace

bool slope_underflows(const Prior& prior, int n, double v_L, double r) {
    if (!candidate_exists(prior, n, v_L, r)) return false;
    return search_gap(prior, n, v_L, r, kMinSlope) < 0.0;
}

BetaSolution solve_beta(const Prior& prior, int n, double v_L, double r) {
    if (n < 2) throw DomainError("solve_beta: n must be at least 2");
    if (!candidate_exists(prior, n, v_L, r))
        throw InfeasibleCandidate("no candidate: E[v | v > v_L] <= r at v_L=" + std::to_string(v_L) +
                                  ", r=" + std::to_string(r));
    auto h = [&](double beta) { return search_gap(prior, n, v_L, r, beta); };
    double hi = 1.0;
    while (h(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 1e300) throw BracketFailure("solve_beta: upper slope bracket not found");
    }
    double lo = hi;
    while (h(lo) < 0.0) {
        if (lo == kMinSlope) throw BracketFailure("solve_beta: lower slope bracket not found");
        // Stop exactly at kMinSlope so this agrees with slope_underflows.
        lo = std::max(0.5 * lo, kMinSlope);
    }
    // Bisection in log(beta) gives relative accuracy over any scale of beta.
    double t = bisect([&](double x) { return h(std::exp(x)); }, std::log(lo), std::log(hi),
                      BisectOptions{0.0, 1e-13, 400});
    double beta = std::exp(t);
    auto cp = contact_point(prior, n, v_L, r, beta);
    if (!cp) {
        beta = std::exp(t + 1e-13);
        cp = contact_point(prior, n, v_L, r, beta);
        if (!cp) throw BracketFailure("solve_beta: contact point lost at the root");
    }
    return {beta, cp->first, std::min(cp->second.v_bar, 1.0), cp->second};
}

Candidate make_candidate(const Prior& prior, int n, double v_L, double r) {
    BetaSolution b = solve_beta(prior, n, v_L, r);
    Candidate c;
    c.v_L = v_L;
    c.r = r;
    c.beta = b.beta;
    c.v_H = b.v_H;
    c.v_T = b.v_T;
    c.n = n;
    c.prior = prior;
    c.roots = b.roots;
    return c;
}

Candidate full_disclosure_candidate(const Prior& prior, int n, double r) {
    Candidate c;
    c.v_L = r;
    c.r = r;
    c.beta = 1.0;
    c.v_H = r;
    c.v_T = 1.0;
    c.n = n;
    c.prior = prior;
    c.roots.v_m = r;
    c.roots.v_bar = 1.0;
    return c;
}

PosteriorDistribution build_G(const Candidate& c) {
    std::vector<Segment> segs;
    const double FL = c.prior.cdf(c.v_L);
    if (c.v_L > 0.0) segs.push_back(FullDisclosure{0.0, c.v_L});
    if (c.r > c.v_L) segs.push_back(Flat{c.v_L, c.r, FL});
    double aff_end = std::min(c.v_H, c.v_T);
    if (aff_end > c.r) segs.push_back(AffinePower{c.r, aff_end, std::pow(FL, c.n - 1), c.beta, c.r});
    if (c.v_T < 1.0 && c.v_H >= 1.0) segs.push_back(Flat{c.v_T, 1.0, 1.0});
    if (c.v_H < 1.0) segs.push_back(FullDisclosure{std::max(c.v_H, c.r), 1.0});
    if (segs.empty()) segs.push_back(FullDisclosure{0.0, 1.0});
    return PosteriorDistribution(c.prior, c.n, std::move(segs));
}

double h_gap(const PosteriorDistribution& G, const Prior& prior, double z) {
    z = std::clamp(z, 0.0, 1.0);
    return prior.integral_cdf(0.0, z) - G.integral_cdf(0.0, z);
}

MpcReport verify_mpc(const PosteriorDistribution& G, const Prior& prior, int grid_size) {
    if (grid_size < 101) throw DomainError("verify_mpc: grid_size must be at least 101");
    std::vector<double> grid = G.breakpoints();
    for (int i = 0; i < grid_size; ++i) grid.push_back(static_cast<double>(i) / (grid_size - 1));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    MpcReport rep;
    double H = 0.0;
    rep.min_gap = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        H += prior.integral_cdf(grid[i - 1], grid[i]) - G.integral_cdf(grid[i - 1], grid[i]);
        rep.min_gap = std::min(rep.min_gap, H);
    }
    rep.mean_error = H;
    rep.pass = rep.min_gap >= -1e-9 && std::fabs(rep.mean_error) <= 1e-9;
    return rep;
}

void validate_candidate(const Candidate& c) {
    const Prior& F = c.prior;
    PosteriorDistribution G = build_G(c);
    if (c.v_H < 1.0 && std::fabs(G.cdf_left(c.v_H) - F.cdf(c.v_H)) > 1e-9)
        fail("contact", "G(v_H) != F(v_H) at v_H=" + std::to_string(c.v_H));
    if (std::fabs(G.mean() - F.mean()) > 1e-9)
        fail("mean", "mean of G differs from the prior mean by " + std::to_string(G.mean() - F.mean()));
    MpcReport m = verify_mpc(G, F, 2001);
    if (!m.pass) fail("mpc", "integrated gap min " + std::to_string(m.min_gap));
    if (c.v_H > c.r) {
        double b8 = beta_from_moments(F, c.n, c.v_L, c.v_H, c.r);
        if (std::fabs(b8 - c.beta) > 1e-8 * std::max(1.0, c.beta))
            fail("slope", "beta " + std::to_string(c.beta) + " vs moment formula " + std::to_string(b8));
    }
    if (c.v_H < 1.0 && c.v_T < 1.0) fail("top", "v_H < 1 and v_T < 1 together");
}

} // namespace disclose
