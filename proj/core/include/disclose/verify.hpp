#pragma once

#include <string>
#include <variant>
#include <vector>

#include "disclose/endogenous.hpp"

namespace disclose {

// Everything a single firm takes as given: opponents' G, the reservation value,
// the visit probability and the belief that a visitor is inexperienced.
struct Market {
    Prior prior;
    int n;
    double alpha;
    double r;
    double v_L, v_H, v_T, beta;
    double eta;
    double alpha_tilde;
    PosteriorDistribution G;
};

Market market_from(const Equilibrium& eq);
Market market_from(const ExogEquilibrium& eq);
// Beliefs are those implied by every firm playing the candidate.
Market market_from(const Candidate& c, double alpha);

// Sale probability given a visit and posterior mean v; right branch at v = r.
double payoff_u(const Market& m, double v);
double payoff_u_left(const Market& m, double v);
double jump_size(const Market& m);
double multiplier_phi(const Market& m, double v);

Integrand payoff_integrand(const Market& m);
Integrand multiplier_integrand(const Market& m);

// (1/n) / (alpha eta + 1 - alpha).
double payoff_identity_target(const Market& m);

struct CertificateReport {
    bool dm1_convex = false;
    double dm1_min_second_diff = 0.0;
    double dm1_continuity_gap = 0.0;
    double dm2_min_gap = 0.0;
    double dm3_max_contact_violation = 0.0;
    double dm4_integral_gap = 0.0;
    double payoff_identity_gap = 0.0;
    double jump = 0.0;
    bool pass = false;
    std::vector<std::string> failures;
};

struct DmTolerances {
    double convexity = 1e-9;
    double continuity = 1e-9;
    double dominance = 1e-9;
    double contact = 1e-8;
    double integral = 1e-8;
};

CertificateReport check_dm_conditions(const Market& m, int grid_size = 1001, const DmTolerances& tol = {});

struct OracleResult {
    double optimal_value;
    std::vector<double> grid;
    std::vector<double> masses;
    std::vector<double> prior_masses;
    int iterations;
};

// Discretizes the prior by splitting each cell's mass between its endpoints
// (mean-preserving) and solves the grid LP over distributions dominated in
// convex order.
OracleResult best_response_oracle(const std::vector<double>& u_values, const Prior& prior,
                                  const std::vector<double>& grid);

// m-point grid containing 0, 1 and the market's breakpoints.
std::vector<double> oracle_grid(const Market& m, int size);

struct OracleGap {
    int grid_size;
    double oracle_value;
    double equilibrium_payoff;
    double gap;
};
OracleGap oracle_gap(const Market& m, int grid_size);

// Constant C in gap <= C / m. Measured on uniform priors (n = 2..8) at
// m = 101, 201, 401: the worst gap * m is 5.0e-3, at m = 101.
inline constexpr double kOracleGapConstant = 0.02;

// Integral of u against G_dev minus against G, beliefs held fixed.
// Throws InfeasibleCandidate when G_dev is not a contraction of the prior.
double deviation_gain(const Market& m, const PosteriorDistribution& G_dev);

// Pools values on [r - width, b] into an atom at r, b chosen so the pool's mean is r;
// the prior is kept elsewhere.
PosteriorDistribution pool_around(const Prior& prior, int n, double r, double width);

struct DeviationSearch {
    double best_gain;
    std::string description;
};
// Best gain over candidate-shaped deviations at the market's r, full disclosure
// and pooling around r.
DeviationSearch search_deviations(const Market& m, int grid = 41);

struct DiscreteCost {
    std::vector<std::pair<double, double>> points; // (cost, probability), sorted by cost
};
struct ContinuousCost {
    std::vector<std::pair<double, double>> knots; // (cost, K(cost)), K from 0 to 1
};

class CostDistribution {
public:
    static CostDistribution discrete(std::vector<std::pair<double, double>> points);
    static CostDistribution continuous(std::vector<std::pair<double, double>> knots);

    double cdf(double s) const;
    double lowest() const;
    double highest() const;
    bool is_discrete() const { return std::holds_alternative<DiscreteCost>(repr_); }
    const std::variant<DiscreteCost, ContinuousCost>& repr() const { return repr_; }
    // Throws DomainError unless the support lies in (0, mu).
    void validate(double mu) const;

private:
    explicit CostDistribution(std::variant<DiscreteCost, ContinuousCost> r) : repr_(std::move(r)) {}
    std::variant<DiscreteCost, ContinuousCost> repr_;
};

struct HeteroReport {
    int n;
    bool holds;
    double b_star;
    double lhs;  // (1 - alpha_tilde) beta
    double rhs;  // alpha_tilde b_star
    double phi_vs_uK_min_gap;
    double r_1;
    std::string note;
};

// b* = inf over [0, r_1) of K(mu - v) / (r_1 - v).
double b_star(const CostDistribution& K, double mu);
// Payoff with heterogeneous costs when the equilibrium at the lowest cost conceals below r_1.
double payoff_u_hetero(const Market& m, const CostDistribution& K, double v);

// Checks the sufficient condition at a given n. Throws UnsupportedBoundary if
// the lowest cost is not positive.
HeteroReport hetero_check(const Prior& prior, int n, double alpha, const CostDistribution& K, int grid_size = 1001);

struct HeteroScan {
    int first_n;
    HeteroReport report;
    std::vector<HeteroReport> trail;
};
// Doubles n from the concealment threshold at the lowest cost until the condition holds.
HeteroScan hetero_scan(const Prior& prior, double alpha, const CostDistribution& K, int n_cap = 1 << 16);

} // namespace disclose
