#include <doctest.h>

#include <cmath>

#include "disclose/candidate.hpp"
#include "disclose/endogenous.hpp"
#include "disclose/errors.hpp"
#include "disclose/exogenous.hpp"
#include "disclose/welfare.hpp"
#include "generators.hpp"

using namespace disclose;
using namespace disclose::testing;

TEST_CASE("two-firm uniform threshold and slope match closed forms") {
    Prior u = Prior::uniform();
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        CAPTURE(alpha);
        CHECK(r_lower_bar(u, 2, alpha) == doctest::Approx(alpha / 2.0).epsilon(1e-10));
        for (double r : {0.05, 0.2, 0.35, 0.45, 0.6, 0.8, 0.95}) {
            CAPTURE(r);
            ExogEquilibrium e = solve_exog(u, 2, alpha, r);
            CHECK(std::fabs(e.v_L_eq - uniform_v_L_exog(alpha, r)) < 1e-8);
            CHECK(std::fabs(e.candidate.beta - uniform_beta_exog(alpha, r)) < 1e-8 * uniform_beta_exog(alpha, r));
        }
    }
}

TEST_CASE("regime follows the threshold") {
    Prior u = Prior::uniform();
    CHECK(solve_exog(u, 2, 0.5, 0.2).regime == Regime::NoDisclosureAtBottom);
    CHECK(solve_exog(u, 2, 0.5, 0.4).regime == Regime::DisclosureAtBottom);
}

TEST_CASE("visit probability at v_L = 0 is 1/n") {
    for (int n : {2, 5, 9}) CHECK(visit_probability(Prior::uniform(), n, 0.0) == doctest::Approx(1.0 / n));
}

TEST_CASE("two-firm uniform endogenous equilibrium matches the closed form") {
    Prior u = Prior::uniform();
    for (double alpha : {0.3, 0.5, 0.65, 0.8})
        for (double s : {0.02, 0.05, 0.1, 0.15}) {
            CAPTURE(alpha);
            CAPTURE(s);
            Equilibrium eq = solve_endog(u, 2, alpha, s);
            UniformEndog o = uniform_endog(alpha, s);
            if (s >= (1.0 - alpha) / 2.0) {
                CHECK(eq.r_star == 0.5 - s);
                CHECK(eq.v_L_star == 0.0);
            } else {
                CHECK(std::fabs(eq.r_star - o.r) < 1e-8);
                CHECK(std::fabs(eq.v_L_star - o.v_L) < 1e-8);
            }
            CHECK_NOTHROW(validate_equilibrium(eq));
        }
}

TEST_CASE("full-information reservation value for a uniform prior") {
    for (double s : {0.01, 0.1, 0.3}) CHECK(r_full_info(Prior::uniform(), s) == doctest::Approx(1.0 - std::sqrt(2.0 * s)));
}

TEST_CASE("alpha = 0 gives full disclosure and alpha = 1 is unsupported") {
    Equilibrium eq = solve_endog(Prior::uniform(), 3, 0.0, 0.1);
    CHECK(eq.full_disclosure);
    CHECK(eq.r_star == doctest::Approx(1.0 - std::sqrt(0.2)));
    CHECK_THROWS_AS(solve_endog(Prior::uniform(), 3, 1.0, 0.1), UnsupportedBoundary);
}

TEST_CASE("property: equilibria satisfy their structural invariants") {
    int solved = 0;
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        Prior p = g.convex_prior();
        const int n = g.integer(2, 12);
        const double alpha = g.real(0.05, 0.95);
        const double s = g.real(0.005, p.mean() - 0.005);
        Equilibrium eq = solve_endog(p, n, alpha, s);
        CHECK_NOTHROW(validate_equilibrium(eq));
        CHECK(eq.v_L_star <= eq.r_star);
        CHECK(eq.r_star <= eq.v_H_star + 1e-12);
        CHECK(eq.r_star <= eq.v_T_star + 1e-12);
        CHECK(eq.r_star <= eq.r_full_info + 1e-12);
        CHECK(eq.G.mean() == doctest::Approx(p.mean()).epsilon(1e-9));
        CHECK(r_search(p, eq.v_L_star, s) == doctest::Approx(eq.r_star).epsilon(1e-8));
        ++solved;
    }
    CHECK(solved == 60);
}

TEST_CASE("property: v_L^eq is nondecreasing in r") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        Prior p = g.convex_prior();
        const int n = g.integer(2, 6);
        const double alpha = g.real(0.1, 0.9);
        const double rl = r_lower_bar(p, n, alpha);
        double prev = 0.0;
        for (int i = 1; i < 20; ++i) {
            const double r = i / 20.0;
            if (!candidate_exists(p, n, 0.0, r)) break;
            const double v = v_L_equilibrium(p, n, alpha, r, rl);
            CHECK(v >= prev - 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("market-size threshold and large-market contact point for the uniform prior") {
    Prior u = Prior::uniform();
    const int nl = n_lower_bar(u, 0.5, 0.1);
    CHECK(nl == 19);
    CHECK(solve_endog(u, nl, 0.5, 0.1).v_L_star == 0.0);
    CHECK(solve_endog(u, nl - 1, 0.5, 0.1).v_L_star > 0.0);
    for (int n : {nl, 2 * nl, 5 * nl}) {
        Equilibrium eq = solve_endog(u, n, 0.5, 0.1);
        // Conditional mean of a uniform below v_H is v_H / 2.
        const double oracle = 0.8 * (n - 1.0) / (n - 2.0);
        CHECK(eq.v_H_star == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(v_H_large_n(u, n, 0.1) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("slopes just above the smallest searched slope are bracketed") {
    // r_lower_bar for n = 33 probes slopes between 1e-300 and the next power of two.
    Prior u = Prior::uniform();
    for (int n = 30; n <= 36; ++n) {
        CAPTURE(n);
        CHECK_NOTHROW(r_lower_bar(u, n, 0.5));
        CHECK_NOTHROW(solve_endog(u, n, 0.5, 0.1));
    }
}

TEST_CASE("large-market limit for the uniform prior") {
    LimitEquilibrium lim = limit_equilibrium(Prior::uniform(), 0.5, 0.1);
    CHECK(std::fabs(lim.v_H_inf - 0.8) < 1e-10);
    CHECK(lim.atom_location == doctest::Approx(0.4));
    CHECK(lim.atom_mass == doctest::Approx(0.8));
    double prev = 1.0;
    for (int n : {19, 38, 76, 152}) {
        const double d = sup_distance_midpoints(solve_endog(Prior::uniform(), n, 0.5, 0.1).G, lim.G_inf);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("candidate system") {
    Prior u = Prior::uniform();
    CHECK(candidate_exists(u, 3, 0.2, 0.5));
    CHECK_FALSE(candidate_exists(u, 3, 0.6, 0.8));
    Candidate c = make_candidate(u, 3, 0.2, 0.5);
    CHECK_NOTHROW(validate_candidate(c));
    for (double v_L : {0.0, 0.2})
        for (double r : {0.3, 0.45}) {
            Candidate k = make_candidate(u, 3, v_L, r);
            if (k.v_H < 1.0) CHECK(std::fabs(d_function(u, 3, k.v_L, k.r, k.beta, k.v_H)) < 1e-9);
            CHECK(build_G(k).cdf(k.v_T) == doctest::Approx(1.0));
        }
    CHECK(h_star(u, 3, c.v_L, c.r, c.beta) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(beta_from_moments(u, 3, c.v_L, c.v_H, c.r) == doctest::Approx(c.beta).epsilon(1e-8));
    CHECK_THROWS_AS(make_candidate(u, 3, 0.6, 0.8), InfeasibleCandidate);
}
