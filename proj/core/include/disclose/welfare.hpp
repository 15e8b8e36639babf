#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "disclose/endogenous.hpp"

namespace disclose {

struct SurplusReport {
    double cs_savvy;
    double cs_inexperienced;
    std::string note;
};

enum class Verdict { LessInformative, MoreInformative, EquallyInformative, Incomparable };
const char* to_string(Verdict v);

// Verdict describes G0 relative to G1.
struct InformativenessVerdict {
    Verdict verdict;
    double min_gap_forward;   // min over z of the integral of (G1 - G0) on [0, z]
    double min_gap_backward;  // same with G0 and G1 swapped
    double mean_gap;          // mean(G0) - mean(G1)
};

struct SearchStats {
    double p_stop_first;
    double p_multi_visit;
    double expected_visits;
    double eta;
    double alpha_tilde;
};

enum class SweepAxis { N, S, Alpha };
const char* to_string(SweepAxis a);

struct ScanRow {
    double x = 0.0;
    bool ok = false;
    double r_star = 0.0, v_L_star = 0.0, v_H_star = 0.0, v_T_star = 0.0, beta_star = 0.0;
    double cs_savvy = 0.0, cs_inexperienced = 0.0, p_multi_visit = 0.0;
    std::optional<Verdict> verdict_vs_prev;
    std::string error;
    std::optional<Equilibrium> eq;
};

struct ThresholdReport {
    double s_bar;
    std::optional<double> s_lower_est;
    std::optional<double> s_tilde_est;
    double grid_resolution;
    bool informativeness_increasing_above_s_bar;
    bool cs_savvy_increasing_above_s_bar;
    bool cs_inexperienced_decreasing_above_s_bar;
    bool never_less_informative_below_s_lower;
    std::vector<ScanRow> rows;
};

// Expected maximum of n independent draws from G.
double cs_savvy(const PosteriorDistribution& G, int n);
// Expected maximum of n draws of min{v, r*}.
double cs_inexperienced(const Equilibrium& eq);
SurplusReport surplus(const Equilibrium& eq);

InformativenessVerdict informativeness_compare(const PosteriorDistribution& G0,
                                               const PosteriorDistribution& G1, int grid_size = 2001);

SearchStats search_stats(const Equilibrium& eq);

// Largest |G0 - G1| over a uniform grid plus both sets of breakpoints.
double sup_distance(const PosteriorDistribution& G0, const PosteriorDistribution& G1, int grid_size = 1001);

// Largest |G0 - G1| at the midpoints of `cells` equal cells of [0,1]. Use this
// against a limit with atoms at grid points, where only continuity points converge.
double sup_distance_midpoints(const PosteriorDistribution& G0, const PosteriorDistribution& G1, int cells = 1000);

// Solves along one axis (grid values are cast to int for N). Per-point failures
// land in the row's error field. Rows are in grid order.
std::vector<ScanRow> sweep(const MarketParams& base, SweepAxis axis, const std::vector<double>& grid,
                           int compare_grid = 2001);
void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<ScanRow>& rows);

ThresholdReport threshold_scan(const Prior& prior, int n, double alpha, const std::vector<double>& s_grid);

} // namespace disclose
