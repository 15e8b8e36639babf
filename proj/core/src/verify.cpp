#include "disclose/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "disclose/bisect.hpp"
#include "disclose/errors.hpp"
#include "disclose/simplex.hpp"

namespace disclose {

namespace {

double below_r_scale(const Market& m) { return m.alpha_tilde / m.eta + 1.0 - m.alpha_tilde; }

std::vector<double> snap_grid(std::vector<double> pts, const std::vector<double>& keep) {
    std::vector<double> out;
    for (double x : pts) {
        bool near = false;
        for (double k : keep)
            if (std::fabs(x - k) < 1e-9) near = true;
        if (!near) out.push_back(x);
    }
    for (double k : keep)
        if (k >= 0.0 && k <= 1.0) out.push_back(k);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// c0 + c1 G(v)^{n-1} on [lo, hi), following the pieces of G.
void append_power_of_G(Integrand& out, const PosteriorDistribution& G, double lo, double hi, double c0, double c1) {
    if (!(hi > lo)) return;
    const int n = G.n();
    const double k = n - 1;
    for (const Segment& s : G.segments()) {
        double a = std::max(lo, segment_start(s));
        double b = std::min(hi, segment_end(s));
        if (!(b > a)) continue;
        if (std::holds_alternative<FullDisclosure>(s)) {
            out.push_back({a, b, IntegrandPiece::Kind::PowerOfF, c0, c1, k});
        } else if (const auto* f = std::get_if<Flat>(&s)) {
            out.push_back({a, b, IntegrandPiece::Kind::Affine, c0 + c1 * std::pow(f->level, k), 0.0});
        } else {
            const auto& ap = std::get<AffinePower>(s);
            // G^{n-1} = min(base + beta (v - anchor), 1).
            double cap = ap.beta > 0.0 ? ap.r_anchor + (1.0 - ap.base) / ap.beta : b;
            double mid = std::clamp(cap, a, b);
            if (mid > a)
                out.push_back({a, mid, IntegrandPiece::Kind::Affine, c0 + c1 * (ap.base - ap.beta * ap.r_anchor),
                               c1 * ap.beta});
            if (b > mid) out.push_back({mid, b, IntegrandPiece::Kind::Affine, c0 + c1, 0.0});
        }
    }
}

double affine_phi(const Market& m, double v) {
    double FL = m.prior.cdf_power(m.v_L, m.n - 1);
    return m.alpha_tilde + (1.0 - m.alpha_tilde) * (FL + m.beta * (v - m.r));
}

} // namespace

Market market_from(const Equilibrium& eq) {
    const Candidate& c = eq.candidate;
    return Market{c.prior, c.n, eq.params.alpha, c.r, c.v_L, c.v_H, c.v_T, c.beta, eq.eta, eq.alpha_tilde, eq.G};
}

Market market_from(const ExogEquilibrium& eq) {
    const Candidate& c = eq.candidate;
    return Market{c.prior, c.n, eq.alpha, c.r, c.v_L, c.v_H, c.v_T, c.beta, eq.eta, eq.alpha_tilde, eq.G};
}

Market market_from(const Candidate& c, double alpha) {
    double eta = visit_probability(c.prior, c.n, c.v_L);
    return Market{c.prior, c.n, alpha, c.r, c.v_L, c.v_H, c.v_T, c.beta, eta, posterior_belief(alpha, eta),
                  build_G(c)};
}

double payoff_u(const Market& m, double v) {
    double g = std::pow(m.G.cdf(v), m.n - 1);
    if (v < m.r) return below_r_scale(m) * g;
    return m.alpha_tilde + (1.0 - m.alpha_tilde) * g;
}

double payoff_u_left(const Market& m, double v) {
    double g = std::pow(m.G.cdf_left(v), m.n - 1);
    if (v <= m.r) return below_r_scale(m) * g;
    return m.alpha_tilde + (1.0 - m.alpha_tilde) * g;
}

double jump_size(const Market& m) {
    return m.alpha_tilde * (1.0 - std::pow(m.G.cdf(m.r), m.n - 1) / m.eta);
}

double multiplier_phi(const Market& m, double v) {
    if (v < m.v_L) return below_r_scale(m) * m.prior.cdf_power(v, m.n - 1);
    if (v <= m.v_H) return affine_phi(m, v);
    return m.alpha_tilde + (1.0 - m.alpha_tilde) * m.prior.cdf_power(v, m.n - 1);
}

Integrand payoff_integrand(const Market& m) {
    Integrand out;
    append_power_of_G(out, m.G, 0.0, m.r, 0.0, below_r_scale(m));
    append_power_of_G(out, m.G, m.r, 1.0, m.alpha_tilde, 1.0 - m.alpha_tilde);
    return out;
}

Integrand multiplier_integrand(const Market& m) {
    Integrand out;
    const double k = m.n - 1;
    if (m.v_L > 0.0) out.push_back({0.0, m.v_L, IntegrandPiece::Kind::PowerOfF, 0.0, below_r_scale(m), k});
    const double FL = m.prior.cdf_power(m.v_L, k);
    const double slope = (1.0 - m.alpha_tilde) * m.beta;
    const double top = m.v_H < 1.0 ? m.v_H : 1.0;
    if (top > m.v_L)
        out.push_back({m.v_L, top, IntegrandPiece::Kind::Affine,
                       m.alpha_tilde + (1.0 - m.alpha_tilde) * FL - slope * m.r, slope});
    if (m.v_H < 1.0)
        out.push_back({m.v_H, 1.0, IntegrandPiece::Kind::PowerOfF, m.alpha_tilde, 1.0 - m.alpha_tilde, k});
    return out;
}

double payoff_identity_target(const Market& m) {
    return (1.0 / m.n) / (m.alpha * m.eta + 1.0 - m.alpha);
}

CertificateReport check_dm_conditions(const Market& m, int grid_size, const DmTolerances& tol) {
    if (grid_size < 501) throw DomainError("check_dm_conditions: grid_size must be at least 501");
    std::vector<double> uniform(grid_size);
    for (int i = 0; i < grid_size; ++i) uniform[i] = static_cast<double>(i) / (grid_size - 1);
    std::vector<double> keep{m.v_L, m.r, m.v_H, m.v_T};
    for (double k : m.prior.breakpoints()) keep.push_back(k);
    const std::vector<double> grid = snap_grid(uniform, keep);

    std::vector<double> phi(grid.size()), u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        phi[i] = multiplier_phi(m, grid[i]);
        u[i] = payoff_u(m, grid[i]);
    }

    CertificateReport rep;
    rep.jump = jump_size(m);

    // DM1: continuity at the two joins and convexity by three-point chords.
    const double k = m.n - 1;
    if (m.v_L > 0.0)
        rep.dm1_continuity_gap = std::fabs(below_r_scale(m) * m.prior.cdf_power(m.v_L, k) - affine_phi(m, m.v_L));
    if (m.v_H < 1.0)
        rep.dm1_continuity_gap =
            std::max(rep.dm1_continuity_gap,
                     std::fabs(affine_phi(m, m.v_H) -
                               (m.alpha_tilde + (1.0 - m.alpha_tilde) * m.prior.cdf_power(m.v_H, k))));
    rep.dm1_min_second_diff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double x0 = grid[i - 1], x1 = grid[i], x2 = grid[i + 1];
        const double chord = (phi[i - 1] * (x2 - x1) + phi[i + 1] * (x1 - x0)) / (x2 - x0);
        rep.dm1_min_second_diff = std::min(rep.dm1_min_second_diff, chord - phi[i]);
    }
    rep.dm1_convex = rep.dm1_min_second_diff >= -tol.convexity && rep.dm1_continuity_gap <= tol.continuity;

    // DM2: phi dominates u.
    rep.dm2_min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) rep.dm2_min_gap = std::min(rep.dm2_min_gap, phi[i] - u[i]);

    // DM3: phi = u on the support of G.
    auto in_support = [&](double v) {
        if (m.v_L > 0.0 && v <= m.v_L) return true;
        if (v >= m.r && v <= m.v_T) return true;
        return m.v_H < 1.0 && v >= m.v_H;
    };
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (in_support(grid[i]))
            rep.dm3_max_contact_violation = std::max(rep.dm3_max_contact_violation, std::fabs(phi[i] - u[i]));

    // DM4: phi integrates to the same value under G and F.
    const Integrand phi_f = multiplier_integrand(m);
    const double phi_G = m.G.expect(phi_f);
    const double phi_F = PosteriorDistribution::full_disclosure(m.prior, m.n).expect(phi_f);
    rep.dm4_integral_gap = std::fabs(phi_G - phi_F);
    rep.payoff_identity_gap = std::fabs(m.G.expect(payoff_integrand(m)) - payoff_identity_target(m));

    if (!rep.dm1_convex) rep.failures.push_back("DM1");
    if (rep.dm2_min_gap < -tol.dominance) rep.failures.push_back("DM2");
    if (rep.dm3_max_contact_violation > tol.contact) rep.failures.push_back("DM3");
    if (rep.dm4_integral_gap > tol.integral) rep.failures.push_back("DM4");
    rep.pass = rep.failures.empty();
    return rep;
}

OracleResult best_response_oracle(const std::vector<double>& u_values, const Prior& prior,
                                  const std::vector<double>& grid) {
    const std::size_t m = grid.size();
    if (m < 3 || u_values.size() != m) throw DomainError("best_response_oracle: grid and values mismatch");
    if (grid.front() != 0.0 || grid.back() != 1.0) throw DomainError("best_response_oracle: grid must span [0,1]");
    for (std::size_t i = 1; i < m; ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("best_response_oracle: grid not increasing");

    std::vector<double> f(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double a = grid[i], b = grid[i + 1];
        const double mass = prior.cdf(b) - prior.cdf(a);
        const double pm = prior.partial_mean(a, b);
        f[i] += (b * mass - pm) / (b - a);
        f[i + 1] += (pm - a * mass) / (b - a);
    }

    std::vector<std::vector<double>> A_eq(2, std::vector<double>(m));
    std::vector<double> b_eq(2, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        A_eq[0][i] = 1.0;
        A_eq[1][i] = grid[i];
        b_eq[0] += f[i];
        b_eq[1] += f[i] * grid[i];
    }
    std::vector<std::vector<double>> A_le;
    std::vector<double> b_le;
    A_le.reserve(m - 2);
    for (std::size_t k = 1; k + 1 < m; ++k) {
        std::vector<double> row(m, 0.0);
        double rhs = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            row[i] = grid[k] - grid[i];
            rhs += f[i] * row[i];
        }
        A_le.push_back(std::move(row));
        b_le.push_back(rhs);
    }
    LpResult lp = lp_maximize(u_values, A_eq, b_eq, A_le, b_le);
    return OracleResult{lp.value, grid, std::move(lp.x), std::move(f), lp.iterations};
}

std::vector<double> oracle_grid(const Market& m, int size) {
    if (size < 101) throw DomainError("oracle_grid: at least 101 points required");
    std::vector<double> grid(size);
    for (int i = 0; i < size; ++i) grid[i] = static_cast<double>(i) / (size - 1);
    std::vector<char> snapped(size, 0);
    snapped[0] = snapped[size - 1] = 1;
    std::vector<double> bps{m.r, m.v_L, m.v_H, m.v_T};
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    for (double b : bps) {
        if (!(b > 0.0 && b < 1.0)) continue;
        int best = -1;
        for (int i = 1; i + 1 < size; ++i)
            if (!snapped[i] && (best < 0 || std::fabs(grid[i] - b) < std::fabs(grid[best] - b))) best = i;
        grid[best] = b;
        snapped[best] = 1;
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

OracleGap oracle_gap(const Market& m, int grid_size) {
    std::vector<double> grid = oracle_grid(m, grid_size);
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = payoff_u(m, grid[i]);
    OracleResult res = best_response_oracle(u, m.prior, grid);
    const double eq_payoff = m.G.expect(payoff_integrand(m));
    return OracleGap{grid_size, res.optimal_value, eq_payoff, res.optimal_value - eq_payoff};
}

double deviation_gain(const Market& m, const PosteriorDistribution& G_dev) {
    MpcReport mpc = verify_mpc(G_dev, m.prior);
    if (!mpc.pass) throw InfeasibleCandidate("deviation_gain: deviation is not a contraction of the prior");
    const Integrand u = payoff_integrand(m);
    return G_dev.expect(u) - m.G.expect(u);
}

PosteriorDistribution pool_around(const Prior& prior, int n, double r, double width) {
    const double a = r - width;
    if (!(width > 0.0) || a < 0.0 || r >= 1.0) throw DomainError("pool_around: interval outside [0,1]");
    const double Fa = prior.cdf(a);
    auto excess = [&](double b) { return prior.partial_mean(a, b) - r * (prior.cdf(b) - Fa); };
    if (excess(1.0) < 0.0) throw DomainError("pool_around: no pool above r has mean r");
    const double b = excess(1.0) == 0.0 ? 1.0 : bisect(excess, r, 1.0, BisectOptions{1e-15, 1e-16, 200});
    const double Fb = prior.cdf(b);
    return PosteriorDistribution(prior, n,
                                 {FullDisclosure{0.0, a}, Flat{a, r, Fa}, Flat{r, b, Fb}, FullDisclosure{b, 1.0}},
                                 Atom{r, Fb - Fa});
}

DeviationSearch search_deviations(const Market& m, int grid) {
    DeviationSearch best{-std::numeric_limits<double>::infinity(), ""};
    auto consider = [&](double gain, std::string what) {
        if (gain > best.best_gain) best = {gain, std::move(what)};
    };
    consider(deviation_gain(m, PosteriorDistribution::full_disclosure(m.prior, m.n)), "full disclosure");
    for (int i = 0; i < grid; ++i) {
        const double v = m.r * i / grid;
        if (!candidate_exists(m.prior, m.n, v, m.r)) continue;
        try {
            Candidate c = make_candidate(m.prior, m.n, v, m.r);
            consider(deviation_gain(m, build_G(c)), "candidate v_L=" + std::to_string(v));
        } catch (const std::exception&) {
        }
    }
    for (int i = 1; i <= grid; ++i) {
        const double w = m.r * i / grid;
        try {
            consider(deviation_gain(m, pool_around(m.prior, m.n, m.r, w)), "pool width=" + std::to_string(w));
        } catch (const std::exception&) {
        }
    }
    return best;
}

CostDistribution CostDistribution::discrete(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw DomainError("cost distribution: no points");
    std::sort(points.begin(), points.end());
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].second > 0.0)) throw DomainError("cost distribution: probabilities must be positive");
        if (i > 0 && !(points[i].first > points[i - 1].first))
            throw DomainError("cost distribution: duplicate cost");
        total += points[i].second;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError("cost distribution: probabilities must sum to 1");
    return CostDistribution(DiscreteCost{std::move(points)});
}

CostDistribution CostDistribution::continuous(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw DomainError("cost distribution: at least two knots");
    if (knots.front().second != 0.0 || knots.back().second != 1.0)
        throw DomainError("cost distribution: cdf must run from 0 to 1");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].first > knots[i - 1].first)) throw DomainError("cost distribution: knots not increasing");
        if (knots[i].second < knots[i - 1].second) throw DomainError("cost distribution: cdf decreasing");
    }
    if (!(knots[1].second > 0.0)) throw DomainError("cost distribution: density at the lowest cost must be positive");
    return CostDistribution(ContinuousCost{std::move(knots)});
}

double CostDistribution::cdf(double s) const {
    if (const auto* d = std::get_if<DiscreteCost>(&repr_)) {
        double acc = 0.0;
        for (const auto& [c, p] : d->points)
            if (c <= s) acc += p;
        return std::min(acc, 1.0);
    }
    const auto& k = std::get<ContinuousCost>(repr_).knots;
    if (s <= k.front().first) return 0.0;
    if (s >= k.back().first) return 1.0;
    auto it = std::upper_bound(k.begin(), k.end(), s, [](double x, const auto& kn) { return x < kn.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo.second + (hi.second - lo.second) * (s - lo.first) / (hi.first - lo.first);
}

double CostDistribution::lowest() const {
    if (const auto* d = std::get_if<DiscreteCost>(&repr_)) return d->points.front().first;
    return std::get<ContinuousCost>(repr_).knots.front().first;
}

double CostDistribution::highest() const {
    if (const auto* d = std::get_if<DiscreteCost>(&repr_)) return d->points.back().first;
    return std::get<ContinuousCost>(repr_).knots.back().first;
}

void CostDistribution::validate(double mu) const {
    if (!(lowest() > 0.0)) throw UnsupportedBoundary("cost distribution: lowest cost must be positive");
    if (!(highest() < mu)) throw DomainError("cost distribution: costs must lie below the prior mean");
}

double b_star(const CostDistribution& K, double mu) {
    const double s1 = K.lowest();
    const double r1 = mu - s1;
    double best = 1.0 / r1; // v = 0: every cost is below mu
    if (const auto* d = std::get_if<DiscreteCost>(&K.repr())) {
        // Just above v = mu - s_{j+1} the cdf sits at K(s_j).
        double cum = 0.0;
        for (std::size_t j = 0; j + 1 < d->points.size(); ++j) {
            cum += d->points[j].second;
            best = std::min(best, cum / (d->points[j + 1].first - s1));
        }
        return best;
    }
    const auto& k = std::get<ContinuousCost>(K.repr()).knots;
    // The ratio is monotone on each linear piece of K, so knots and the limit at s_1 suffice.
    best = std::min(best, k[1].second / (k[1].first - s1));
    for (std::size_t j = 1; j < k.size(); ++j) best = std::min(best, k[j].second / (k[j].first - s1));
    const int grid = 1000;
    for (int i = 0; i < grid; ++i) {
        const double v = r1 * i / grid;
        best = std::min(best, K.cdf(mu - v) / (r1 - v));
    }
    return best;
}

double payoff_u_hetero(const Market& m, const CostDistribution& K, double v) {
    const double mu = m.prior.mean();
    const double r1 = mu - K.lowest();
    if (v < r1) return m.alpha_tilde * (1.0 - K.cdf(mu - v));
    return payoff_u(m, v);
}

HeteroReport hetero_check(const Prior& prior, int n, double alpha, const CostDistribution& K, int grid_size) {
    const double mu = prior.mean();
    K.validate(mu);
    const double s1 = K.lowest();
    HeteroReport rep{};
    rep.n = n;
    rep.r_1 = mu - s1;
    Equilibrium eq = solve_endog(prior, n, alpha, s1);
    if (eq.v_L_star > 0.0) {
        rep.holds = false;
        rep.b_star = b_star(K, mu);
        rep.lhs = rep.rhs = std::numeric_limits<double>::quiet_NaN();
        rep.phi_vs_uK_min_gap = std::numeric_limits<double>::quiet_NaN();
        rep.note = "equilibrium at the lowest cost discloses at the bottom";
        return rep;
    }
    Market m = market_from(eq);
    rep.b_star = b_star(K, mu);
    rep.lhs = (1.0 - m.alpha_tilde) * m.beta;
    rep.rhs = m.alpha_tilde * rep.b_star;
    rep.holds = rep.lhs < rep.rhs;
    rep.phi_vs_uK_min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_size; ++i) {
        const double v = static_cast<double>(i) / (grid_size - 1);
        rep.phi_vs_uK_min_gap = std::min(rep.phi_vs_uK_min_gap, multiplier_phi(m, v) - payoff_u_hetero(m, K, v));
    }
    rep.note = rep.holds ? "sufficient condition holds" : "sufficient condition fails at this n";
    return rep;
}

HeteroScan hetero_scan(const Prior& prior, double alpha, const CostDistribution& K, int n_cap) {
    K.validate(prior.mean());
    HeteroScan scan{};
    for (int n = n_lower_bar(prior, alpha, K.lowest()); n <= n_cap; n *= 2) {
        HeteroReport rep = hetero_check(prior, n, alpha, K);
        scan.trail.push_back(rep);
        if (rep.holds) {
            scan.first_n = n;
            scan.report = rep;
            return scan;
        }
    }
    throw CapExceeded("hetero_scan: condition does not hold below the n cap");
}

} // namespace disclose
