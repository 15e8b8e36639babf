// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "disclose/endogenous.hpp"
#include "disclose/exogenous.hpp"
#include "disclose/montecarlo.hpp"
#include "disclose/verify.hpp"
#include "disclose/welfare.hpp"
#include "generators.hpp"

using namespace disclose;
using namespace disclose::testing;

namespace {

// Tolerances and budgets.
constexpr double kClosedFormTol = 1e-8;
constexpr double kThresholdTol = 1e-10;
constexpr double kDm4Tol = 1e-8;
constexpr double kPayoffIdentityTol = 1e-9;
constexpr double kGapNoiseFloor = 1e-12;
constexpr double kContactTol = 1e-6;
constexpr double kLimitTol = 1e-10;
constexpr double kBoundaryDistance = 1e-3;
constexpr double kMaxZ = 3.0;
constexpr double kPhiSlack = 1e-9;
constexpr std::uint64_t kSimConsumers = 1000000;
constexpr std::uint64_t kSimSeed = 20261018;
constexpr int kSimBins = 10;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome uniform_closed_form() {
    Prior u = Prior::uniform();
    double worst_v = 0.0, worst_b = 0.0, worst_rl = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double alpha = i / 10.0;
        worst_rl = std::max(worst_rl, std::fabs(r_lower_bar(u, 2, alpha) - alpha / 2.0));
        for (int j = 1; j <= 19; ++j) {
            const double r = j / 20.0;
            ExogEquilibrium e = solve_exog(u, 2, alpha, r);
            worst_v = std::max(worst_v, std::fabs(e.v_L_eq - uniform_v_L_exog(alpha, r)));
            worst_b = std::max(worst_b, std::fabs(e.candidate.beta - uniform_beta_exog(alpha, r)));
        }
    }
    return {worst_v <= kClosedFormTol && worst_b <= kClosedFormTol && worst_rl <= kThresholdTol,
            fmt("9x19 grid max|dv_L| %.2e", worst_v) + fmt(" max|dbeta| %.2e", worst_b) + fmt(" max|dr_lower| %.2e", worst_rl)};
}

Outcome endogenous_oracle() {
    Prior u = Prior::uniform();
    double worst = 0.0;
    bool corner_exact = true;
    int interior = 0, corner = 0;
    for (double alpha : {0.3, 0.5, 0.65, 0.8})
        for (double s : {0.02, 0.05, 0.1, 0.15}) {
            Equilibrium eq = solve_endog(u, 2, alpha, s);
            if (s >= (1.0 - alpha) / 2.0) {
                corner_exact = corner_exact && eq.r_star == 0.5 - s && eq.v_L_star == 0.0;
                ++corner;
            } else {
                UniformEndog o = uniform_endog(alpha, s);
                worst = std::max({worst, std::fabs(eq.r_star - o.r), std::fabs(eq.v_L_star - o.v_L)});
                ++interior;
            }
        }
    return {worst <= kClosedFormTol && corner_exact,
            std::to_string(interior) + " interior max err " + fmt("%.2e", worst) + ", " + std::to_string(corner) +
                " corner cases " + (corner_exact ? "exact" : "NOT exact")};
}

Outcome certificate_suite() {
    const std::vector<Prior> priors{Prior::uniform(), Prior::power(1.5), Prior::power(2.0), Prior::power(3.0)};
    Gen g(7);
    int passed = 0, total = 0;
    double dm4 = 0.0, ident = 0.0;
    std::string first_failure;
    while (total < 100) {
        const Prior& p = priors[g.integer(0, 3)];
        const int n = g.integer(2, 16);
        if (!check_convexity(p, n)) continue;
        const double alpha = g.real(0.05, 0.95);
        const double s = g.real(0.005, p.mean() - 0.005);
        ++total;
        try {
            Equilibrium eq = solve_endog(p, n, alpha, s);
            CertificateReport c = check_dm_conditions(market_from(eq));
            dm4 = std::max(dm4, c.dm4_integral_gap);
            ident = std::max(ident, c.payoff_identity_gap);
            if (c.pass && c.dm4_integral_gap <= kDm4Tol && c.payoff_identity_gap <= kPayoffIdentityTol)
                ++passed;
            else if (first_failure.empty())
                first_failure = " first failure n=" + std::to_string(n) + fmt(" alpha=%.4f", alpha) + fmt(" s=%.4f", s);
        } catch (const std::exception& e) {
            if (first_failure.empty()) first_failure = std::string(" solver error: ") + e.what();
        }
    }
    return {passed == total, std::to_string(passed) + "/" + std::to_string(total) + " certified, max DM4 gap " +
                                 fmt("%.2e", dm4) + ", max payoff identity gap " + fmt("%.2e", ident) + first_failure};
}

Outcome lp_oracle() {
    struct Case {
        Prior p;
        int n;
        double alpha, s;
    };
    const std::vector<Case> cases{{Prior::uniform(), 2, 0.5, 0.1},  {Prior::uniform(), 3, 0.5, 0.1},
                                  {Prior::uniform(), 5, 0.3, 0.05}, {Prior::uniform(), 8, 0.8, 0.2},
                                  {Prior::power(2.0), 4, 0.5, 0.1}, {Prior::power(1.5), 3, 0.65, 0.15}};
    bool bound_ok = true, monotone = true, perturbed_ok = true;
    double worst_ratio = 0.0, min_gain = 1e300;
    for (const auto& c : cases) {
        Equilibrium eq = solve_endog(c.p, c.n, c.alpha, c.s);
        Market m = market_from(eq);
        double prev = 1e300;
        for (int size : {101, 201, 401}) {
            const double gap = oracle_gap(m, size).gap;
            if (size == 201) {
                bound_ok = bound_ok && gap < kOracleGapConstant / size && gap >= -kGapNoiseFloor;
                worst_ratio = std::max(worst_ratio, gap * size / kOracleGapConstant);
            }
            if (prev > kGapNoiseFloor && !(gap < prev)) monotone = false;
            prev = gap;
        }
        // Shift v_L by 0.1, upward when that candidate exists.
        const double up = eq.v_L_star + 0.1;
        const double v_L = candidate_exists(c.p, c.n, up, eq.r_star) ? up : eq.v_L_star - 0.1;
        Candidate off = make_candidate(c.p, c.n, v_L, eq.r_star);
        Market pm = market_from(off, c.alpha);
        const double gain = std::max(search_deviations(pm).best_gain, oracle_gap(pm, 201).gap);
        min_gain = std::min(min_gain, gain);
        perturbed_ok = perturbed_ok && !check_dm_conditions(pm).pass && gain > 0.0;
    }
    return {bound_ok && monotone && perturbed_ok,
            std::to_string(cases.size()) + " markets; m=201 worst gap/(C/m) " + fmt("%.3f", worst_ratio) +
                ", gaps shrink over m=101,201,401: " + (monotone ? "yes" : "NO") +
                fmt(", smallest perturbed gain %.2e", min_gain)};
}

Outcome market_structure() {
    Prior u = Prior::uniform();
    const double alpha = 0.5, s = 0.1;
    const int nl = n_lower_bar(u, alpha, s);
    bool below_ok = true, above_ok = true, vh_dec = true, vh_root = true, verdict_ok = true, cs_ok = true;
    double worst_root = 0.0, min_cs_below = 1e300;
    std::optional<Equilibrium> prev;
    for (int n = 2; n <= nl + 20; ++n) {
        Equilibrium eq = solve_endog(u, n, alpha, s);
        SearchStats st = search_stats(eq);
        const double ci = cs_inexperienced(eq);
        if (n < nl) {
            below_ok = below_ok && st.p_multi_visit > 0.0;
            min_cs_below = std::min(min_cs_below, ci);
        } else {
            above_ok = above_ok && st.p_multi_visit == 0.0;
            cs_ok = cs_ok && std::fabs(ci - (0.5 - s)) <= 1e-12;
            // Conditional mean of a uniform below v_H is v_H / 2.
            const double closed = 0.8 * (n - 1.0) / (n - 2.0);
            const double root = closed < 1.0 ? v_H_large_n(u, n, s) : 1.0;
            worst_root = std::max({worst_root, std::fabs(eq.v_H_star - root), std::fabs(eq.v_H_star - std::min(closed, 1.0))});
            if (prev && prev->params.n >= nl) {
                vh_dec = vh_dec && eq.v_H_star < prev->v_H_star;
                verdict_ok = verdict_ok && informativeness_compare(eq.G, prev->G).verdict == Verdict::MoreInformative;
            }
        }
        prev = eq;
    }
    vh_root = worst_root <= kContactTol;
    cs_ok = cs_ok && min_cs_below > 0.5 - s;
    return {nl > 2 && below_ok && above_ok && vh_dec && vh_root && verdict_ok && cs_ok,
            "n_lower=" + std::to_string(nl) + fmt(", max|v_H - root| %.2e", worst_root) +
                fmt(", min CS_i below %.6f", min_cs_below) + (below_ok ? "" : ", no multi-visit below") +
                (above_ok ? "" : ", multi-visit above") + (vh_dec ? "" : ", v_H not decreasing") +
                (verdict_ok ? "" : ", verdict not MoreInformative")};
}

Outcome infinite_market() {
    Prior u = Prior::uniform();
    const double alpha = 0.5, s = 0.1;
    LimitEquilibrium lim = limit_equilibrium(u, alpha, s);
    const int nl = n_lower_bar(u, alpha, s);
    bool decreasing = true;
    double prev = 1e300;
    std::string trail;
    for (int k = 0; k <= 6; ++k) {
        Equilibrium eq = solve_endog(u, nl << k, alpha, s);
        // The limit has an atom at mu - s; compare at continuity points only.
        const double d = sup_distance_midpoints(eq.G, lim.G_inf, 1000);
        decreasing = decreasing && d < prev;
        prev = d;
        trail += fmt(k ? " %.3g" : "%.3g", d);
    }
    const bool limit_ok = std::fabs(lim.v_H_inf - 0.8) <= kLimitTol && std::fabs(lim.atom_mass - 0.8) <= kLimitTol &&
                          std::fabs(lim.atom_location - 0.4) <= kLimitTol;
    return {limit_ok && decreasing, fmt("v_H_inf %.12f", lim.v_H_inf) + fmt(", atom %.12f", lim.atom_mass) +
                                        fmt(" at %.12f", lim.atom_location) + "; sup distances " + trail};
}

Outcome search_cost_statics() {
    Prior u = Prior::uniform();
    const int n = 5;
    const double alpha = 0.5, mu = u.mean();
    const double lo = 2e-6, hi = mu - 4e-4;
    const double a = std::log(lo / (mu - lo)), b = std::log(hi / (mu - hi));
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(mu / (1.0 + std::exp(-(a + (b - a) * i / 49.0))));
    ThresholdReport rep = threshold_scan(u, n, alpha, grid);
    PosteriorDistribution F = PosteriorDistribution::full_disclosure(u, n);
    bool all_ok = true;
    for (const auto& r : rep.rows) all_ok = all_ok && r.ok;
    const double d_lo = sup_distance(rep.rows.front().eq->G, F);
    const double d_hi = sup_distance(rep.rows.back().eq->G, F);
    bool exact_ci = true;
    for (const auto& r : rep.rows)
        if (r.x > rep.s_bar) exact_ci = exact_ci && std::fabs(r.cs_inexperienced - (mu - r.x)) <= 1e-12;
    const bool pass = all_ok && d_lo < kBoundaryDistance && d_hi < kBoundaryDistance &&
                      rep.informativeness_increasing_above_s_bar && rep.cs_savvy_increasing_above_s_bar &&
                      rep.cs_inexperienced_decreasing_above_s_bar && exact_ci && rep.s_lower_est &&
                      rep.never_less_informative_below_s_lower;
    return {pass, fmt("s_bar %.6f", rep.s_bar) + fmt(", s_lower %.6f", rep.s_lower_est.value_or(NAN)) +
                      fmt(", boundary sup distances %.2e", d_lo) + fmt(" / %.2e", d_hi) +
                      (rep.informativeness_increasing_above_s_bar ? "" : ", verdicts not MoreInformative above s_bar") +
                      (rep.cs_savvy_increasing_above_s_bar ? "" : ", CS_s not increasing") +
                      (rep.cs_inexperienced_decreasing_above_s_bar && exact_ci ? "" : ", CS_i not mu - s") +
                      (rep.never_less_informative_below_s_lower ? "" : ", LessInformative pair below s_lower")};
}

Outcome monte_carlo() {
    struct Case {
        int n;
        double alpha, s;
    };
    const std::vector<Case> cases{{2, 0.65, 0.1}, {5, 0.5, 0.1}, {19, 0.5, 0.1}};
    double worst = 0.0;
    std::string worst_name;
    bool repro = true, thread_free = true;
    int scores = 0;
    for (const auto& c : cases) {
        Equilibrium eq = solve_endog(Prior::uniform(), c.n, c.alpha, c.s);
        SimConfig cfg;
        cfg.consumers = kSimConsumers;
        cfg.seed = kSimSeed;
        cfg.cost_model = SingleCost{c.s};
        cfg.bins = kSimBins;
        SimReport rep = simulate_market(eq, cfg);
        for (const auto& z : sim_zscores(eq, rep)) {
            ++scores;
            if (std::fabs(z.z) > worst) {
                worst = std::fabs(z.z);
                worst_name = "n=" + std::to_string(c.n) + " " + z.name;
            }
        }
        SimReport again = simulate_market(eq, cfg);
        repro = repro && again.eta.value == rep.eta.value && again.cs_savvy.value == rep.cs_savvy.value &&
                again.cs_inexperienced.value == rep.cs_inexperienced.value && again.sale_counts == rep.sale_counts;
        cfg.threads = 1;
        SimReport serial = simulate_market(eq, cfg);
        cfg.threads = 8;
        SimReport wide = simulate_market(eq, cfg);
        for (const SimReport* o : {&serial, &wide})
            thread_free = thread_free && o->eta.value == rep.eta.value && o->cs_savvy.value == rep.cs_savvy.value &&
                          o->cs_inexperienced.value == rep.cs_inexperienced.value && o->sale_counts == rep.sale_counts &&
                          o->visit_histogram == rep.visit_histogram;
    }
    return {worst <= kMaxZ && repro && thread_free,
            std::to_string(scores) + " estimates, max |z| " + fmt("%.2f", worst) + " (" + worst_name + ")" +
                (repro ? ", rerun identical" : ", rerun DIFFERS") +
                (thread_free ? ", 1/8/default threads identical" : ", thread count changes totals")};
}

Outcome heterogeneity() {
    Prior u = Prior::uniform();
    const double alpha = 0.5;
    bool ok = true;
    std::string detail;
    const std::vector<std::pair<const char*, CostDistribution>> fixtures{
        {"two-point", CostDistribution::discrete({{0.1, 0.5}, {0.2, 0.5}})},
        {"truncated-linear", CostDistribution::continuous({{0.05, 0.0}, {0.15, 0.6}, {0.3, 1.0}})}};
    for (const auto& [name, K] : fixtures) {
        HeteroScan sc = hetero_scan(u, alpha, K);
        ok = ok && sc.report.holds && sc.report.phi_vs_uK_min_gap >= -kPhiSlack;
        detail += std::string(name) + ": first n " + std::to_string(sc.first_n) + fmt(", b* %.4f", sc.report.b_star) +
                  fmt(", min(phi - u_K) %.2e; ", sc.report.phi_vs_uK_min_gap);
    }
    // A single cost reduces to the standard concealment threshold and payoff.
    CostDistribution one = CostDistribution::discrete({{0.1, 1.0}});
    const int nl = n_lower_bar(u, alpha, 0.1);
    HeteroScan single = hetero_scan(u, alpha, one);
    Market m = market_from(solve_endog(u, nl, alpha, 0.1));
    double payoff_diff = 0.0;
    for (int i = 0; i <= 200; ++i)
        payoff_diff = std::max(payoff_diff, std::fabs(payoff_u_hetero(m, one, i / 200.0) - payoff_u(m, i / 200.0)));
    const bool degenerate = single.first_n == nl && single.report.holds && payoff_diff <= 1e-12 &&
                            !hetero_check(u, nl - 1, alpha, one).holds;
    ok = ok && degenerate;
    detail += "single point: first n " + std::to_string(single.first_n) + " vs threshold " + std::to_string(nl) +
              fmt(", max|u_K - u| %.1e", payoff_diff);
    return {ok, detail};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"uniform closed form", 5.0, uniform_closed_form},
        {"endogenous uniform oracle", 5.0, endogenous_oracle},
        {"certificate suite", 60.0, certificate_suite},
        {"LP oracle equivalence", 120.0, lp_oracle},
        {"market structure", 30.0, market_structure},
        {"infinite-market limit", 0.0, infinite_market},
        {"search-cost statics", 0.0, search_cost_statics},
        {"Monte Carlo", 60.0, monte_carlo},
        {"heterogeneous costs", 0.0, heterogeneity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s [%zu] %s: %s; %.2fs%s\n", pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs,
                    c.budget_s > 0.0 ? (in_time ? fmt(" (budget %.0fs)", c.budget_s).c_str() : " (OVER BUDGET)") : "");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
