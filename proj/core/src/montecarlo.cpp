#include "disclose/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "disclose/bisect.hpp"
#include "disclose/errors.hpp"
#include "disclose/parallel.hpp"
#include "disclose/welfare.hpp"

namespace disclose {

namespace {

constexpr std::uint64_t kBlockSize = 1u << 16;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Draws reservation values for inexperienced consumers; returns (cost, reservation).
class CostSampler {
public:
    CostSampler(const CostModel& model, const PosteriorDistribution& G, double r_eq, double s_eq) {
        if (const auto* sc = std::get_if<SingleCost>(&model)) {
            single_ = true;
            s_ = sc->s;
            r_ = sc->s == s_eq ? r_eq : reservation_for_cost(G, sc->s);
            return;
        }
        const CostDistribution& K = std::get<HeterogeneousCost>(model).K;
        K.validate(G.prior().mean());
        if (const auto* d = std::get_if<DiscreteCost>(&K.repr())) {
            double cum = 0.0;
            for (const auto& [c, p] : d->points) {
                cum += p;
                costs_.push_back(c);
                cum_.push_back(cum);
                res_.push_back(c == s_eq ? r_eq : reservation_for_cost(G, c));
            }
            cum_.back() = 1.0;
            return;
        }
        continuous_ = true;
        knots_ = std::get<ContinuousCost>(K.repr()).knots;
        // Reservation values on a cost table, interpolated linearly between entries.
        const int m = 1024;
        const double lo = knots_.front().first, hi = knots_.back().first;
        for (int i = 0; i <= m; ++i) {
            double c = lo + (hi - lo) * i / m;
            costs_.push_back(c);
            res_.push_back(reservation_for_cost(G, c));
        }
    }

    std::pair<double, double> draw(SplitMix64& rng) const {
        if (single_) return {s_, r_};
        const double u = rng.uniform();
        if (!continuous_) {
            std::size_t i = std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin();
            i = std::min(i, costs_.size() - 1);
            return {costs_[i], res_[i]};
        }
        std::size_t j = 1;
        while (j + 1 < knots_.size() && knots_[j].second < u) ++j;
        const auto& a = knots_[j - 1];
        const auto& b = knots_[j];
        double c = b.second > a.second ? a.first + (b.first - a.first) * (u - a.second) / (b.second - a.second) : b.first;
        const double pos = (c - costs_.front()) / (costs_.back() - costs_.front()) * (costs_.size() - 1);
        std::size_t k = std::min(static_cast<std::size_t>(pos), costs_.size() - 2);
        const double w = pos - k;
        return {c, res_[k] * (1.0 - w) + res_[k + 1] * w};
    }

    bool single() const { return single_; }

private:
    bool single_ = false, continuous_ = false;
    double s_ = 0.0, r_ = 0.0;
    std::vector<double> costs_, cum_, res_;
    std::vector<std::pair<double, double>> knots_;
};

struct Accumulator {
    std::uint64_t consumers = 0, inexperienced = 0, multi = 0;
    double cs_s = 0.0, cs_s2 = 0.0, cs_i = 0.0, cs_i2 = 0.0, eta = 0.0, eta2 = 0.0;
    std::vector<std::uint64_t> sales, visits, bin_count, bin_sales;

    Accumulator(int n, int bins) : sales(n, 0), visits(n + 1, 0), bin_count(bins, 0), bin_sales(bins, 0) {}

    void merge(const Accumulator& o) {
        consumers += o.consumers;
        inexperienced += o.inexperienced;
        multi += o.multi;
        cs_s += o.cs_s;
        cs_s2 += o.cs_s2;
        cs_i += o.cs_i;
        cs_i2 += o.cs_i2;
        eta += o.eta;
        eta2 += o.eta2;
        for (std::size_t i = 0; i < sales.size(); ++i) sales[i] += o.sales[i];
        for (std::size_t i = 0; i < visits.size(); ++i) visits[i] += o.visits[i];
        for (std::size_t i = 0; i < bin_count.size(); ++i) {
            bin_count[i] += o.bin_count[i];
            bin_sales[i] += o.bin_sales[i];
        }
    }
};

struct BinLayout {
    std::vector<double> edges;

    BinLayout(double r, int bins) {
        if (bins < 10) throw DomainError("simulation: at least 10 bins required");
        int low = static_cast<int>(std::lround(bins * r));
        low = std::clamp(low, r > 0.0 ? 1 : 0, bins - 1);
        const int high = bins - low;
        for (int i = 0; i < low; ++i) edges.push_back(r * i / low);
        for (int i = 0; i < high; ++i) edges.push_back(r + (1.0 - r) * i / high);
        edges.push_back(1.0);
    }

    int index(double v) const {
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        int k = static_cast<int>(it - edges.begin()) - 1;
        return std::clamp(k, 0, static_cast<int>(edges.size()) - 2);
    }
};

Estimate estimate(double sum, double sum2, std::uint64_t count) {
    if (count == 0) return {kNaN, kNaN};
    const double N = static_cast<double>(count);
    const double mean = sum / N;
    const double var = count > 1 ? std::max(0.0, (sum2 - N * mean * mean) / (N - 1.0)) : 0.0;
    return {mean, std::sqrt(var / N)};
}

// Integral of u over [a, b) against Gf, divided by Gf's mass there.
double bin_average(const Integrand& u, const PosteriorDistribution& Gf, double a, double b) {
    const bool last = b >= 1.0;
    const double mass = (last ? 1.0 : Gf.cdf_left(b)) - Gf.cdf_left(a);
    if (!(mass > 1e-14)) return kNaN;
    double total = 0.0;
    for (IntegrandPiece p : u) {
        p.lo = std::max(p.lo, a);
        p.hi = std::min(p.hi, b);
        if (p.hi > p.lo || (last && p.lo == 1.0 && p.hi == 1.0)) total += Gf.expect(p);
    }
    return total / mass;
}

void fill_curve(SimReport& rep, const std::vector<double>& edges, const std::vector<std::uint64_t>& count,
                const std::vector<std::uint64_t>& sales, const Integrand* u, const PosteriorDistribution& Gf) {
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        CurveBin bin{edges[k], edges[k + 1], 0.5 * (edges[k] + edges[k + 1]), count[k], kNaN, kNaN, kNaN};
        if (count[k] > 0) {
            bin.u_hat = static_cast<double>(sales[k]) / count[k];
            bin.se = std::sqrt(bin.u_hat * (1.0 - bin.u_hat) / count[k]);
        }
        if (u) bin.u_analytic = bin_average(*u, Gf, bin.left, bin.right);
        rep.conditional_sale_curve.push_back(bin);
    }
}

struct Profile {
    const PosteriorDistribution& G;
    int n;
    double alpha;
    double r_edge;
    CostSampler costs;
    int tagged;
    const PosteriorDistribution* G_dev;
};

SimReport run(const Profile& pf, const SimConfig& cfg, const Integrand* u) {
    if (cfg.consumers < 1) throw DomainError("simulation: at least one consumer required");
    const int n = pf.n;
    const BinLayout layout(pf.r_edge, cfg.bins);
    const int nbins = static_cast<int>(layout.edges.size()) - 1;
    const std::uint64_t nblocks = (cfg.consumers + kBlockSize - 1) / kBlockSize;
    std::vector<Accumulator> blocks(nblocks, Accumulator(n, nbins));

    parallel_for(
        nblocks,
        [&](std::size_t b) {
            Accumulator& acc = blocks[b];
            SplitMix64 rng = SplitMix64::stream(cfg.seed, b);
            const std::uint64_t begin = b * kBlockSize;
            const std::uint64_t end = std::min(cfg.consumers, begin + kBlockSize);
            std::vector<int> order(n);
            auto draw = [&](int firm) {
                const PosteriorDistribution& g = (pf.G_dev && firm == pf.tagged) ? *pf.G_dev : pf.G;
                return sample_posterior(g, rng.uniform());
            };
            for (std::uint64_t c = begin; c < end; ++c) {
                ++acc.consumers;
                double best = -1.0, tagged_v = -1.0;
                int winner = 0;
                auto consider = [&](int firm, double v) {
                    if (v > best || (v == best && firm < winner)) {
                        best = v;
                        winner = firm;
                    }
                    if (firm == pf.tagged) tagged_v = v;
                };
                if (rng.uniform() >= pf.alpha) {
                    for (int j = 0; j < n; ++j) consider(j, draw(j));
                    acc.cs_s += best;
                    acc.cs_s2 += best * best;
                } else {
                    ++acc.inexperienced;
                    const auto [s, r] = pf.costs.draw(rng);
                    for (int j = 0; j < n; ++j) order[j] = j;
                    int visited = 0;
                    for (int k = 0; k < n; ++k) {
                        std::swap(order[k], order[k + rng.below(n - k)]);
                        const int firm = order[k];
                        const double v = draw(firm);
                        ++visited;
                        consider(firm, v);
                        if (v >= r) break;
                    }
                    const double surplus = best - s * visited;
                    acc.cs_i += surplus;
                    acc.cs_i2 += surplus * surplus;
                    const double share = static_cast<double>(visited) / n;
                    acc.eta += share;
                    acc.eta2 += share * share;
                    ++acc.visits[visited];
                    if (visited > 1) ++acc.multi;
                }
                ++acc.sales[winner];
                if (tagged_v >= 0.0) {
                    const int k = layout.index(tagged_v);
                    ++acc.bin_count[k];
                    if (winner == pf.tagged) ++acc.bin_sales[k];
                }
            }
        },
        static_cast<unsigned>(std::max(cfg.threads, 0)));

    Accumulator total(n, nbins);
    for (const auto& b : blocks) total.merge(b);

    SimReport rep;
    rep.consumers = total.consumers;
    rep.inexperienced = total.inexperienced;
    rep.single_cost = pf.costs.single();
    rep.eta = estimate(total.eta, total.eta2, total.inexperienced);
    rep.cs_savvy = estimate(total.cs_s, total.cs_s2, total.consumers - total.inexperienced);
    rep.cs_inexperienced = estimate(total.cs_i, total.cs_i2, total.inexperienced);
    rep.sale_counts = total.sales;
    for (auto c : total.sales) rep.firm_sale_shares.push_back(static_cast<double>(c) / total.consumers);
    rep.visit_histogram = total.visits;
    rep.multi_search_freq =
        total.inexperienced ? static_cast<double>(total.multi) / static_cast<double>(total.inexperienced) : 0.0;
    const PosteriorDistribution& Gf = pf.G_dev ? *pf.G_dev : pf.G;
    fill_curve(rep, layout.edges, total.bin_count, total.bin_sales, u, Gf);
    return rep;
}

SimReport simulate(const Equilibrium& eq, const SimConfig& cfg, int tagged, const PosteriorDistribution* G_dev) {
    const int n = eq.params.n;
    if (tagged < 0 || tagged >= n) throw DomainError("simulation: firm index out of range");
    Profile pf{eq.G, n, eq.params.alpha, eq.r_star, CostSampler(cfg.cost_model, eq.G, eq.r_star, eq.params.s), tagged,
               G_dev};
    if (!pf.costs.single()) return run(pf, cfg, nullptr);
    const Integrand u = payoff_integrand(market_from(eq));
    return run(pf, cfg, &u);
}

} // namespace

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(seed + mix64(index + kGolden)));
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += kGolden);
    return mix64(z);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double sample_posterior(const PosteriorDistribution& G, double u01) { return G.quantile(u01); }

double reservation_for_cost(const PosteriorDistribution& G, double s) {
    const double mean = G.mean();
    if (!(s > 0.0) || !(s < mean)) throw DomainError("reservation_for_cost: cost must lie in (0, mean of G)");
    // Integral of (v - r) dG over [r, 1] equals the integral of (1 - G) over [r, 1].
    auto f = [&](double r) { return (1.0 - r) - G.integral_cdf(r, 1.0) - s; };
    return bisect(f, 0.0, 1.0, BisectOptions{1e-15, 1e-15, 200});
}

SimReport simulate_market(const Equilibrium& eq, const SimConfig& config) {
    return simulate(eq, config, 0, nullptr);
}

DeviationSim simulate_deviation(const Equilibrium& eq, int firm_index, const PosteriorDistribution& G_dev,
                                const SimConfig& config) {
    if (!verify_mpc(G_dev, eq.params.prior).pass)
        throw InfeasibleCandidate("simulate_deviation: deviation is not a contraction of the prior");
    SimReport rep = simulate(eq, config, firm_index, &G_dev);
    const double p = rep.firm_sale_shares[firm_index];
    DeviationSim out{{p, std::sqrt(p * (1.0 - p) / static_cast<double>(rep.consumers))}, kNaN};
    if (std::holds_alternative<SingleCost>(config.cost_model)) {
        const Market m = market_from(eq);
        out.analytic_share = (m.alpha * m.eta + 1.0 - m.alpha) * G_dev.expect(payoff_integrand(m));
    }
    return out;
}

std::vector<ZScore> sim_zscores(const Equilibrium& eq, const SimReport& rep, std::uint64_t min_bin_count) {
    std::vector<ZScore> out;
    auto add = [&](std::string name, double sim, double analytic, double se) {
        const double diff = sim - analytic;
        double z = 0.0;
        if (std::fabs(diff) > 1e-12) z = se > 0.0 ? diff / se : std::copysign(std::numeric_limits<double>::infinity(), diff);
        out.push_back({std::move(name), sim, analytic, se, z});
    };
    const int n = eq.params.n;
    add("cs_savvy", rep.cs_savvy.value, cs_savvy(eq.G, n), rep.cs_savvy.se);
    if (rep.single_cost) {
        add("eta", rep.eta.value, eq.eta, rep.eta.se);
        add("cs_inexperienced", rep.cs_inexperienced.value, cs_inexperienced(eq), rep.cs_inexperienced.se);
    }
    const double N = static_cast<double>(rep.consumers);
    const double p = 1.0 / n;
    for (int j = 0; j < n; ++j)
        add("share_" + std::to_string(j), rep.firm_sale_shares[j], p, std::sqrt(p * (1.0 - p) / N));
    for (std::size_t k = 0; k < rep.conditional_sale_curve.size(); ++k) {
        const CurveBin& b = rep.conditional_sale_curve[k];
        if (b.count < min_bin_count || std::isnan(b.u_analytic)) continue;
        add("curve_" + std::to_string(k), b.u_hat, b.u_analytic,
            std::sqrt(b.u_analytic * (1.0 - b.u_analytic) / static_cast<double>(b.count)));
    }
    return out;
}

void write_curve_csv(std::ostream& os, const SimReport& rep) {
    os << "bin_left,bin_right,v_mid,u_hat,se,u_analytic\n";
    char buf[256];
    for (const auto& b : rep.conditional_sale_curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", b.left, b.right, b.v_mid, b.u_hat, b.se,
                      b.u_analytic);
        os << buf;
    }
}

} // namespace disclose
