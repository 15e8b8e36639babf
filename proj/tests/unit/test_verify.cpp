#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "disclose/errors.hpp"
#include "disclose/verify.hpp"
#include "generators.hpp"

using namespace disclose;
using namespace disclose::testing;

TEST_CASE("property: solved equilibria pass the certificate and the payoff identity") {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        Prior p = g.convex_prior();
        Equilibrium eq = solve_endog(p, g.integer(2, 10), g.real(0.05, 0.95), g.real(0.005, p.mean() - 0.005));
        Market m = market_from(eq);
        CertificateReport c = check_dm_conditions(m);
        CHECK(c.pass);
        CHECK(c.dm4_integral_gap <= 1e-8);
        CHECK(c.payoff_identity_gap <= 1e-9);
        // Independent payoff identity: integrate u against G by quadrature on the continuous part.
        CHECK(eq.G.expect(payoff_integrand(m)) == doctest::Approx(payoff_identity_target(m)).epsilon(1e-9));
    }
}

TEST_CASE("payoff jumps at the reservation value by the stated amount") {
    Equilibrium eq = solve_endog(Prior::uniform(), 4, 0.5, 0.1);
    Market m = market_from(eq);
    const double expected = m.alpha_tilde * (1.0 - std::pow(eq.G.cdf_left(m.r), m.n - 1) / m.eta);
    CHECK(jump_size(m) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(payoff_u(m, m.r) - payoff_u_left(m, m.r) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(jump_size(m) > 0.0);
}

TEST_CASE("multiplier dominates the payoff and touches it on the support") {
    Equilibrium eq = solve_endog(Prior::uniform(), 5, 0.5, 0.1);
    Market m = market_from(eq);
    for (int i = 0; i <= 400; ++i) {
        const double v = i / 400.0;
        CHECK(multiplier_phi(m, v) >= payoff_u(m, v) - 1e-9);
    }
    CHECK(multiplier_phi(m, m.r) == doctest::Approx(payoff_u(m, m.r)).epsilon(1e-9));
    if (m.v_L > 0.0) CHECK(multiplier_phi(m, 0.5 * m.v_L) == doctest::Approx(payoff_u(m, 0.5 * m.v_L)).epsilon(1e-9));
}

TEST_CASE("perturbed candidates fail the certificate and admit profitable deviations") {
    Prior u = Prior::uniform();
    Equilibrium eq = solve_endog(u, 3, 0.5, 0.1);
    Candidate off = make_candidate(u, 3, eq.v_L_star + 0.1, eq.r_star);
    Market m = market_from(off, 0.5);
    CHECK_FALSE(check_dm_conditions(m).pass);
    CHECK(search_deviations(m).best_gain > 1e-6);
    CHECK(oracle_gap(m, 201).gap > 1e-6);
}

TEST_CASE("equilibrium has no profitable candidate-shaped deviation") {
    Equilibrium eq = solve_endog(Prior::power(2.0), 4, 0.4, 0.1);
    CHECK(search_deviations(market_from(eq)).best_gain <= 1e-9);
}

TEST_CASE("full disclosure is not an equilibrium for alpha in (0,1)") {
    Prior u = Prior::uniform();
    Equilibrium eq = solve_endog(u, 3, 0.5, 0.1);
    Market m = market_from(eq);
    m = market_from(full_disclosure_candidate(u, 3, eq.r_star), 0.5);
    CHECK_FALSE(check_dm_conditions(m).pass);
    CHECK(deviation_gain(m, pool_around(u, 3, m.r, 0.1)) > 0.0);
}

TEST_CASE("pooling deviation preserves the prior mean") {
    Prior u = Prior::uniform();
    PosteriorDistribution P = pool_around(u, 3, 0.4, 0.1);
    CHECK(P.mean() == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(P.atom().has_value());
    CHECK(P.atom()->location == doctest::Approx(0.4));
    CHECK(P.atom()->mass == doctest::Approx(0.2));
}

TEST_CASE("deviation to a non-contraction is rejected") {
    Equilibrium eq = solve_endog(Prior::uniform(), 3, 0.5, 0.1);
    CHECK_THROWS_AS(deviation_gain(market_from(eq), PosteriorDistribution::point_mass(Prior::uniform(), 3, 0.7)),
                    InfeasibleCandidate);
}

TEST_CASE("LP oracle gap is small and within the calibrated bound") {
    Equilibrium eq = solve_endog(Prior::uniform(), 4, 0.5, 0.1);
    Market m = market_from(eq);
    double prev = 1.0;
    for (int size : {101, 201, 401}) {
        OracleGap g = oracle_gap(m, size);
        CHECK(g.gap >= -1e-12);
        CHECK(g.gap <= kOracleGapConstant / size);
        CHECK(g.gap < prev);
        prev = g.gap;
    }
}

TEST_CASE("oracle grid contains the market's breakpoints") {
    Equilibrium eq = solve_endog(Prior::uniform(), 4, 0.5, 0.1);
    Market m = market_from(eq);
    std::vector<double> grid = oracle_grid(m, 101);
    CHECK(grid.size() == 101);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    for (double x : {m.r, m.v_L, m.v_H})
        CHECK(std::any_of(grid.begin(), grid.end(), [&](double y) { return y == x; }));
}

TEST_CASE("interpolation slope for the two-point and truncated-linear cost fixtures") {
    CostDistribution two = CostDistribution::discrete({{0.1, 0.5}, {0.2, 0.5}});
    CHECK(b_star(two, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
    CostDistribution lin = CostDistribution::continuous({{0.05, 0.0}, {0.15, 0.6}, {0.3, 1.0}});
    CHECK(b_star(lin, 0.5) == doctest::Approx(20.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("heterogeneous cost scan") {
    Prior u = Prior::uniform();
    CostDistribution two = CostDistribution::discrete({{0.1, 0.5}, {0.2, 0.5}});
    HeteroScan sc = hetero_scan(u, 0.5, two);
    CHECK(sc.first_n == 19);
    CHECK(sc.report.holds);
    CHECK(sc.report.phi_vs_uK_min_gap >= -1e-9);
    HeteroScan lin = hetero_scan(u, 0.5, CostDistribution::continuous({{0.05, 0.0}, {0.15, 0.6}, {0.3, 1.0}}));
    CHECK(lin.first_n == 47);
    CHECK(lin.report.holds);
    CHECK_FALSE(hetero_check(u, 5, 0.5, two).holds);
}

TEST_CASE("single-point cost reduces to the single-cost payoff") {
    Prior u = Prior::uniform();
    CostDistribution one = CostDistribution::discrete({{0.1, 1.0}});
    HeteroReport h = hetero_check(u, 19, 0.5, one);
    CHECK(h.holds);
    Market m = market_from(solve_endog(u, 19, 0.5, 0.1));
    for (double v : {0.05, 0.2, 0.39, 0.41, 0.7, 0.95})
        CHECK(payoff_u_hetero(m, one, v) == doctest::Approx(payoff_u(m, v)).epsilon(1e-12));
}

TEST_CASE("cost distributions must lie in (0, mu)") {
    CHECK_THROWS_AS(CostDistribution::discrete({{0.0, 1.0}}).validate(0.5), UnsupportedBoundary);
    CHECK_THROWS_AS(CostDistribution::discrete({{0.6, 1.0}}).validate(0.5), DomainError);
    CHECK_THROWS_AS(hetero_check(Prior::uniform(), 5, 0.5, CostDistribution::discrete({{0.0, 1.0}})), UnsupportedBoundary);
}
