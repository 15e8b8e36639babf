#include "disclose/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "disclose/errors.hpp"
#include "disclose/parallel.hpp"

namespace disclose {

namespace {

constexpr double kTol = 1e-9;
constexpr double kSurplusFloor = 1e-12;

std::vector<double> comparison_grid(const PosteriorDistribution& A, const PosteriorDistribution& B,
                                    int grid_size) {
    std::vector<double> g = A.breakpoints();
    for (double x : B.breakpoints()) g.push_back(x);
    for (int i = 0; i < grid_size; ++i) g.push_back(static_cast<double>(i) / (grid_size - 1));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::LessInformative: return "LessInformative";
    case Verdict::MoreInformative: return "MoreInformative";
    case Verdict::EquallyInformative: return "EquallyInformative";
    case Verdict::Incomparable: return "Incomparable";
    }
    return "?";
}

const char* to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::N: return "n";
    case SweepAxis::S: return "s";
    case SweepAxis::Alpha: return "alpha";
    }
    return "?";
}

double cs_savvy(const PosteriorDistribution& G, int n) {
    if (n < 1) throw DomainError("cs_savvy: n must be positive");
    return 1.0 - G.integral_cdf_power(0.0, 1.0, n);
}

double cs_inexperienced(const Equilibrium& eq) {
    const double r = eq.r_star;
    return r - eq.G.integral_cdf_power(0.0, r, eq.params.n);
}

SurplusReport surplus(const Equilibrium& eq) {
    SurplusReport rep{cs_savvy(eq.G, eq.params.n), cs_inexperienced(eq), ""};
    if (eq.full_disclosure)
        rep.note = "full disclosure";
    else if (!eq.bottom_disclosure)
        rep.note = "no disclosure at the bottom: inexperienced consumers stop at the first firm";
    else
        rep.note = "disclosure at the bottom: inexperienced consumers may search past the first firm";
    return rep;
}

InformativenessVerdict informativeness_compare(const PosteriorDistribution& G0,
                                               const PosteriorDistribution& G1, int grid_size) {
    if (grid_size < 2) throw DomainError("informativeness_compare: grid too small");
    std::vector<double> g = comparison_grid(G0, G1, grid_size);
    double delta = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        delta += G1.integral_cdf(g[i - 1], g[i]) - G0.integral_cdf(g[i - 1], g[i]);
        lo = std::min(lo, delta);
        hi = std::max(hi, delta);
    }
    InformativenessVerdict v;
    v.min_gap_forward = lo;
    v.min_gap_backward = -hi;
    v.mean_gap = delta;
    bool means_equal = std::fabs(delta) <= kTol;
    bool forward = means_equal && lo >= -kTol;   // G0 is a contraction of G1
    bool backward = means_equal && -hi >= -kTol; // G1 is a contraction of G0
    if (forward && backward)
        v.verdict = Verdict::EquallyInformative;
    else if (forward)
        v.verdict = Verdict::LessInformative;
    else if (backward)
        v.verdict = Verdict::MoreInformative;
    else
        v.verdict = Verdict::Incomparable;
    return v;
}

SearchStats search_stats(const Equilibrium& eq) {
    const int n = eq.params.n;
    const double F = eq.params.prior.cdf(eq.v_L_star);
    SearchStats st;
    st.p_multi_visit = F;
    st.p_stop_first = 1.0 - F;
    if (1.0 - F < 1e-6) {
        double sum = 0.0, term = 1.0;
        for (int k = 0; k < n; ++k) {
            sum += term;
            term *= F;
        }
        st.expected_visits = sum;
    } else {
        st.expected_visits = (1.0 - std::pow(F, n)) / (1.0 - F);
    }
    st.eta = eq.eta;
    st.alpha_tilde = eq.alpha_tilde;
    return st;
}

double sup_distance(const PosteriorDistribution& G0, const PosteriorDistribution& G1, int grid_size) {
    double best = 0.0;
    for (double x : comparison_grid(G0, G1, grid_size)) {
        best = std::max(best, std::fabs(G0.cdf(x) - G1.cdf(x)));
        best = std::max(best, std::fabs(G0.cdf_left(x) - G1.cdf_left(x)));
    }
    return best;
}

double sup_distance_midpoints(const PosteriorDistribution& G0, const PosteriorDistribution& G1, int cells) {
    if (cells < 1) throw DomainError("sup_distance_midpoints: cells must be positive");
    double best = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double x = (i + 0.5) / cells;
        best = std::max(best, std::fabs(G0.cdf(x) - G1.cdf(x)));
    }
    return best;
}

std::vector<ScanRow> sweep(const MarketParams& base, SweepAxis axis, const std::vector<double>& grid,
                           int compare_grid) {
    std::vector<ScanRow> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        ScanRow& row = rows[i];
        row.x = grid[i];
        MarketParams p = base;
        if (axis == SweepAxis::N)
            p.n = static_cast<int>(std::llround(grid[i]));
        else if (axis == SweepAxis::S)
            p.s = grid[i];
        else
            p.alpha = grid[i];
        try {
            Equilibrium eq = solve_endog(p);
            row.r_star = eq.r_star;
            row.v_L_star = eq.v_L_star;
            row.v_H_star = eq.v_H_star;
            row.v_T_star = eq.v_T_star;
            row.beta_star = eq.beta_star;
            row.cs_savvy = cs_savvy(eq.G, p.n);
            row.cs_inexperienced = cs_inexperienced(eq);
            row.p_multi_visit = search_stats(eq).p_multi_visit;
            row.eq = std::move(eq);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].ok && rows[i - 1].ok)
            rows[i].verdict_vs_prev = informativeness_compare(rows[i].eq->G, rows[i - 1].eq->G, compare_grid).verdict;
    return rows;
}

void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<ScanRow>& rows) {
    os << to_string(axis)
       << ",r_star,v_L_star,v_H_star,beta_star,cs_savvy,cs_inexperienced,p_multi_visit,verdict_vs_prev,error\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        os << (axis == SweepAxis::N ? std::to_string(std::llround(r.x)) : num(r.x));
        if (r.ok) {
            os << ',' << num(r.r_star) << ',' << num(r.v_L_star) << ',' << num(r.v_H_star) << ','
               << num(r.beta_star) << ',' << num(r.cs_savvy) << ',' << num(r.cs_inexperienced) << ','
               << num(r.p_multi_visit) << ',' << (r.verdict_vs_prev ? to_string(*r.verdict_vs_prev) : "")
               << ",\n";
        } else {
            std::string err = r.error;
            std::replace(err.begin(), err.end(), '"', '\'');
            os << ",,,,,,,,,\"" << err << "\"\n";
        }
    }
}

ThresholdReport threshold_scan(const Prior& prior, int n, double alpha, const std::vector<double>& s_grid) {
    const double mu = prior.mean();
    if (s_grid.size() < 2) throw DomainError("threshold_scan: grid needs at least two points");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > 0.0 && s_grid[i] < mu)) throw DomainError("threshold_scan: s outside (0, mean)");
        if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw DomainError("threshold_scan: grid not increasing");
    }
    ThresholdReport rep;
    rep.s_bar = mu - r_lower_bar(prior, n, alpha);
    rep.rows = sweep(MarketParams{prior, n, alpha, s_grid.front()}, SweepAxis::S, s_grid);
    const auto& rows = rep.rows;
    rep.grid_resolution = 0.0;
    for (std::size_t i = 1; i < s_grid.size(); ++i)
        rep.grid_resolution = std::max(rep.grid_resolution, s_grid[i] - s_grid[i - 1]);

    // Initial run of grid points with no disclosure at the top.
    std::size_t run = 0;
    while (run < rows.size() && rows[run].ok && rows[run].v_H_star >= 1.0 && rows[run].x <= rep.s_bar) ++run;
    if (run > 0) rep.s_lower_est = rows[run - 1].x;

    // Initial run over which lowering s raises informativeness and both surpluses.
    std::size_t tilde = 0;
    while (tilde + 1 < run) {
        const auto& a = rows[tilde];
        const auto& b = rows[tilde + 1];
        bool more = informativeness_compare(a.eq->G, b.eq->G).verdict == Verdict::MoreInformative;
        if (!(more && a.cs_savvy >= b.cs_savvy && a.cs_inexperienced >= b.cs_inexperienced)) break;
        ++tilde;
    }
    if (run > 0 && tilde > 0) rep.s_tilde_est = rows[tilde].x;

    rep.informativeness_increasing_above_s_bar = true;
    rep.cs_savvy_increasing_above_s_bar = true;
    rep.cs_inexperienced_decreasing_above_s_bar = true;
    rep.never_less_informative_below_s_lower = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1];
        const auto& b = rows[i];
        if (!a.ok || !b.ok) continue;
        if (a.x > rep.s_bar) {
            if (b.verdict_vs_prev != Verdict::MoreInformative) rep.informativeness_increasing_above_s_bar = false;
            // Surplus converges to its limit faster than double resolves near s = mu.
            if (b.cs_savvy < a.cs_savvy - kSurplusFloor) rep.cs_savvy_increasing_above_s_bar = false;
            if (b.cs_inexperienced > a.cs_inexperienced + kSurplusFloor) rep.cs_inexperienced_decreasing_above_s_bar = false;
        }
        if (rep.s_lower_est && b.x <= *rep.s_lower_est) {
            // Lower cost may not give a less informative equilibrium.
            if (informativeness_compare(a.eq->G, b.eq->G).verdict == Verdict::LessInformative)
                rep.never_less_informative_below_s_lower = false;
        }
    }
    return rep;
}

} // namespace disclose
