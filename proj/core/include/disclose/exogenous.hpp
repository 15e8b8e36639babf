#pragma once

#include <optional>

#include "disclose/candidate.hpp"

namespace disclose {

enum class Regime { NoDisclosureAtBottom, DisclosureAtBottom, FullDisclosure };

const char* to_string(Regime r);

struct ExogEquilibrium {
    double alpha;
    double r;
    double v_L_eq;
    Candidate candidate;
    double eta;
    double alpha_tilde;
    Regime regime;
    double r_lower_bar;
    PosteriorDistribution G;
};

// Probability that a given firm is visited by an inexperienced consumer when
// every firm conceals below v_L: (1 - F^n) / (n (1 - F)) at F = F(v_L).
double visit_probability(const Prior& prior, int n, double v_L);
double posterior_belief(double alpha, double eta);

// alpha (eta - F(v_L)^{n-1}) - (1 - alpha) beta*(v_L, r) (r - v_L).
// Throws InfeasibleCandidate when no candidate exists at (v_L, r).
double z_function(const Prior& prior, int n, double alpha, double v_L, double r);

// Reservation value below which the equilibrium conceals everything under r.
double r_lower_bar(const Prior& prior, int n, double alpha);

// Solves v_L^eq(r) only, without packaging or post-checks; used inside outer loops.
double v_L_equilibrium(const Prior& prior, int n, double alpha, double r, double r_lower_bar);

// Equilibrium for a fixed reservation value. `r_lower_bar_hint` skips the
// threshold solve when the caller already has it.
ExogEquilibrium solve_exog(const Prior& prior, int n, double alpha, double r,
                           std::optional<double> r_lower_bar_hint = std::nullopt);

} // namespace disclose
