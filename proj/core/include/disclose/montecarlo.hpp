#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "disclose/verify.hpp"

namespace disclose {

// SplitMix64. Streams for parallel blocks come from stream(seed, index).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next();
    // Uniform on the open interval (0, 1): 53 random bits, offset by half a step.
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

struct SingleCost {
    double s;
};
struct HeterogeneousCost {
    CostDistribution K;
};
using CostModel = std::variant<SingleCost, HeterogeneousCost>;

struct SimConfig {
    std::uint64_t consumers = 1000000;
    std::uint64_t seed = 1;
    CostModel cost_model = SingleCost{0.1};
    int bins = 20;
    // 0 uses worker_count().
    int threads = 0;
};

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct CurveBin {
    double left, right, v_mid;
    std::uint64_t count;
    double u_hat, se;
    // G-weighted average of u over the bin; NaN when the bin has no mass or costs vary.
    double u_analytic;
};

struct SimReport {
    std::uint64_t consumers = 0;
    std::uint64_t inexperienced = 0;
    bool single_cost = true;
    Estimate eta;
    Estimate cs_savvy;
    Estimate cs_inexperienced;
    std::vector<double> firm_sale_shares;
    std::vector<std::uint64_t> sale_counts;
    // Index k counts inexperienced consumers who visited k firms.
    std::vector<std::uint64_t> visit_histogram;
    double multi_search_freq = 0.0;
    std::vector<CurveBin> conditional_sale_curve;
};

// Inverse cdf of G.
double sample_posterior(const PosteriorDistribution& G, double u01);

// Root of the integral of (v - r) dG over [r, 1] = s. Throws DomainError unless 0 < s < mean(G).
double reservation_for_cost(const PosteriorDistribution& G, double s);

SimReport simulate_market(const Equilibrium& eq, const SimConfig& config);

struct DeviationSim {
    Estimate sale_share;
    double analytic_share;
};
// Firm `firm_index` draws from G_dev; consumers keep equilibrium reservation
// values. Throws InfeasibleCandidate when G_dev is not a contraction of the prior.
DeviationSim simulate_deviation(const Equilibrium& eq, int firm_index, const PosteriorDistribution& G_dev,
                                const SimConfig& config);

struct ZScore {
    std::string name;
    double simulated, analytic, se, z;
};
// z-scores of every estimate against its analytic value. Bins with fewer than
// `min_bin_count` observations are skipped. Curve and share z-scores use the
// binomial standard error at the analytic probability.
std::vector<ZScore> sim_zscores(const Equilibrium& eq, const SimReport& rep, std::uint64_t min_bin_count = 100);

void write_curve_csv(std::ostream& os, const SimReport& rep);

} // namespace disclose
