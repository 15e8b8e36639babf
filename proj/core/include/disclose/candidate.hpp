#pragma once

#include <optional>

#include "disclose/posterior.hpp"
#include "disclose/prior.hpp"

namespace disclose {

struct RootBundle {
    double v_m = 1.0;                // maximizer of D on [r, 1]
    std::optional<double> v_1D;      // lower root of D
    std::optional<double> v_2D;      // upper root of D inside [r, 1]
    double v_bar = 1.0;              // where the affine-power branch reaches 1
};

struct Candidate {
    double v_L = 0.0;
    double r = 0.5;
    double beta = 1.0;
    double v_H = 1.0;
    double v_T = 1.0;
    int n = 2;
    Prior prior;
    RootBundle roots;
};

struct BetaSolution {
    double beta;
    double v_H;
    double v_T;
    RootBundle roots;
};

struct MpcReport {
    double min_gap = 0.0;
    double mean_error = 0.0;
    bool pass = false;
};

bool candidate_exists(const Prior& prior, int n, double v_L, double r);

// F(v_L)^{n-1} + beta (v - r) - F(v)^{n-1}.
double d_function(const Prior& prior, int n, double v_L, double r, double beta, double v);

// Contact point v_H(beta) and the roots of D; nullopt when D has no positive
// region on (r, 1] (beta too small for the branch to meet F).
std::optional<std::pair<double, RootBundle>> contact_point(const Prior& prior, int n, double v_L,
                                                           double r, double beta);

// Integrated gap at v_H(beta). Throws NoInteriorRoot when contact_point is empty.
double h_star(const Prior& prior, int n, double v_L, double r, double beta);

// Slope from conditional moments on [v_L, v_H].
double beta_from_moments(const Prior& prior, int n, double v_L, double v_H, double r);

// Smallest slope solve_beta searches; below it the slope is not a normal double.
inline constexpr double kMinSlope = 1e-300;
// True when the slope solving the candidate system lies below kMinSlope.
bool slope_underflows(const Prior& prior, int n, double v_L, double r);

BetaSolution solve_beta(const Prior& prior, int n, double v_L, double r);
Candidate make_candidate(const Prior& prior, int n, double v_L, double r);

// Full disclosure written as a degenerate candidate (v_L = v_H = r).
Candidate full_disclosure_candidate(const Prior& prior, int n, double r);

PosteriorDistribution build_G(const Candidate& c);

// Integral of (F - G) over [0, z].
double h_gap(const PosteriorDistribution& G, const Prior& prior, double z);
MpcReport verify_mpc(const PosteriorDistribution& G, const Prior& prior, int grid_size = 2001);

// Throws ValidationFailure naming the first broken structural invariant.
void validate_candidate(const Candidate& c);

} // namespace disclose
