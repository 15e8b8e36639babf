#include <doctest.h>

#include <cmath>

#include "disclose/candidate.hpp"
#include "disclose/errors.hpp"
#include "disclose/posterior.hpp"
#include "disclose/prior.hpp"
#include "generators.hpp"

using namespace disclose;
using disclose::testing::Gen;
using disclose::testing::simpson;

TEST_CASE("uniform and power moments match closed forms") {
    Prior u = Prior::uniform();
    CHECK(u.mean() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.integral_cdf_power(0.0, 1.0, 3.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(u.partial_mean(0.2, 0.6) == doctest::Approx((0.36 - 0.04) / 2.0).epsilon(1e-14));
    for (double a : {0.5, 1.5, 2.0, 3.0}) {
        Prior p = Prior::power(a);
        CHECK(p.mean() == doctest::Approx(a / (a + 1.0)).epsilon(1e-14));
        CHECK(p.cdf(0.3) == doctest::Approx(std::pow(0.3, a)).epsilon(1e-14));
        CHECK(p.integral_cdf_power(0.0, 1.0, 2.0) == doctest::Approx(1.0 / (2.0 * a + 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("property: piecewise prior quantile inverts cdf and moments match quadrature") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        Prior p = g.piecewise(g.integer(1, 6));
        for (int i = 0; i < 20; ++i) {
            const double v = g.real(0.0, 1.0);
            CHECK(p.quantile(p.cdf(v)) == doctest::Approx(v).epsilon(1e-10));
        }
        const double k = g.real(0.5, 6.0);
        const double a = g.real(0.0, 0.5), b = g.real(0.5, 1.0);
        CHECK(p.integral_cdf_power(a, b, k) ==
              doctest::Approx(simpson([&](double v) { return std::pow(p.cdf(v), k); }, a, b, 20000)).epsilon(1e-6));
        CHECK(p.mean() == doctest::Approx(1.0 - simpson([&](double v) { return p.cdf(v); }, 0.0, 1.0, 20000)).epsilon(1e-6));
    }
}

TEST_CASE("property: cdf is nondecreasing on [0,1] with F(0)=0 and F(1)=1") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Gen g(seed);
        Prior p = seed % 2 ? g.piecewise(5) : g.convex_prior();
        CHECK(p.cdf(0.0) == doctest::Approx(0.0));
        CHECK(p.cdf(1.0) == doctest::Approx(1.0));
        double prev = 0.0;
        for (int i = 0; i <= 200; ++i) {
            double c = p.cdf(i / 200.0);
            CHECK(c >= prev - 1e-15);
            prev = c;
        }
    }
}

TEST_CASE("malformed priors are rejected") {
    CHECK_THROWS_AS(Prior::power(-1.0), DomainError);
    CHECK_THROWS_AS(Prior::piecewise({{0.0, 0.0}, {0.5, 0.7}, {0.4, 0.8}, {1.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(Prior::piecewise({{0.0, 0.0}, {1.0, 0.9}}), DomainError);
}

TEST_CASE("convexity check accepts uniform and convex power priors") {
    for (int n : {2, 3, 10}) {
        CHECK(check_convexity(Prior::uniform(), n));
        CHECK(check_convexity(Prior::power(2.0), n));
    }
}

TEST_CASE("truncated moments on a uniform prior") {
    TruncatedMoments t = truncated_moments(Prior::uniform(), 0.2, 0.6, 3);
    CHECK(t.mass == doctest::Approx(0.4));
    CHECK(t.mu_tilde == doctest::Approx(0.4));
}

TEST_CASE("property: candidate posteriors are contractions of the prior with the prior mean") {
    int built = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        Prior p = g.convex_prior();
        const int n = g.integer(2, 8);
        const double r = g.real(0.1, 0.9);
        const double v_L = g.real(0.0, r);
        if (!candidate_exists(p, n, v_L, r)) continue;
        Candidate c = make_candidate(p, n, v_L, r);
        PosteriorDistribution G = build_G(c);
        MpcReport rep = verify_mpc(G, p);
        CHECK(rep.pass);
        CHECK(G.mean() == doctest::Approx(p.mean()).epsilon(1e-9));
        CHECK(G.cdf(c.v_L) == doctest::Approx(p.cdf(c.v_L)).epsilon(1e-12));
        for (double q : {0.1, 0.37, 0.8}) CHECK(G.cdf(G.quantile(q)) >= q - 1e-9);
        ++built;
    }
    CHECK(built > 20);
}

TEST_CASE("full disclosure and point mass are the extremes of the convex order") {
    Prior p = Prior::uniform();
    PosteriorDistribution F = PosteriorDistribution::full_disclosure(p, 3);
    PosteriorDistribution M = PosteriorDistribution::point_mass(p, 3, 0.5);
    CHECK(verify_mpc(F, p).pass);
    CHECK(verify_mpc(M, p).pass);
    CHECK(h_gap(M, p, 0.5) == doctest::Approx(0.125));
    CHECK(M.cdf(0.5) == 1.0);
    CHECK(M.cdf_left(0.5) == 0.0);
}
