#pragma once

#include "disclose/exogenous.hpp"

namespace disclose {

struct MarketParams {
    Prior prior;
    int n = 2;
    double alpha = 0.5;
    double s = 0.1;
};

struct Equilibrium {
    MarketParams params;
    double r_star;
    double v_L_star;
    double v_H_star;
    double v_T_star;
    double beta_star;
    double eta;
    double alpha_tilde;
    double r_lower_bar;
    double r_full_info;
    bool bottom_disclosure;
    bool top_disclosure;
    bool full_disclosure;  // alpha = 0
    Candidate candidate;
    PosteriorDistribution G;
};

struct LimitEquilibrium {
    double v_H_inf;
    double atom_location;
    double atom_mass;
    PosteriorDistribution G_inf;
};

// Root of the integral of (v - r) dF over [r, 1] = s.
double r_full_info(const Prior& prior, double s);
// Reservation value implied by search when every firm conceals below v_L.
double r_search(const Prior& prior, double v_L, double s);

Equilibrium solve_endog(const Prior& prior, int n, double alpha, double s);
inline Equilibrium solve_endog(const MarketParams& p) { return solve_endog(p.prior, p.n, p.alpha, p.s); }

// Throws ValidationFailure naming the first broken invariant.
void validate_equilibrium(const Equilibrium& eq);

// Smallest market size at which the equilibrium conceals everything below r*.
int n_lower_bar(const Prior& prior, double alpha, double s);

// Contact point for n above the market-size threshold, from the conditional-mean
// equation E[v | v < v_H] = v_H / n + (n - 1)(mu - s) / n. Throws NoInteriorRoot
// when the root is not below 1.
double v_H_large_n(const Prior& prior, int n, double s);

LimitEquilibrium limit_equilibrium(const Prior& prior, double alpha, double s);

} // namespace disclose
