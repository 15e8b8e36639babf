#include "disclose/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "disclose/errors.hpp"

#ifndef DISCLOSE_VERSION
#define DISCLOSE_VERSION "0.0.0"
#endif

namespace disclose {

namespace {

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw DomainError(std::string("field '") + key + "' has the wrong type");
    }
}

std::vector<std::pair<double, double>> pairs(const json& j, const char* key) {
    std::vector<std::pair<double, double>> out;
    const json& arr = j.at(key);
    if (!arr.is_array()) throw DomainError(std::string("field '") + key + "' must be an array of pairs");
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw DomainError(std::string("field '") + key + "' must hold [x, y] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

json pairs_to_json(const std::vector<std::pair<double, double>>& v) {
    json arr = json::array();
    for (const auto& [a, b] : v) arr.push_back({a, b});
    return arr;
}

// NaN and infinities become null so the output stays valid JSON.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json roots_to_json(const RootBundle& r) {
    json j{{"v_m", r.v_m}, {"v_bar", r.v_bar}};
    j["v_1D"] = r.v_1D ? json(*r.v_1D) : json(nullptr);
    j["v_2D"] = r.v_2D ? json(*r.v_2D) : json(nullptr);
    return j;
}

RootBundle roots_from_json(const json& j) {
    RootBundle r;
    r.v_m = field<double>(j, "v_m");
    r.v_bar = field<double>(j, "v_bar");
    if (j.contains("v_1D") && !j["v_1D"].is_null()) r.v_1D = j["v_1D"].get<double>();
    if (j.contains("v_2D") && !j["v_2D"].is_null()) r.v_2D = j["v_2D"].get<double>();
    return r;
}

} // namespace

Prior prior_from_json(const json& j) {
    const std::string family = field<std::string>(j, "family");
    if (family == "uniform") return Prior::uniform();
    if (family == "power") return Prior::power(field<double>(j, "a"));
    if (family == "piecewise") {
        if (!j.contains("knots")) throw DomainError("missing field 'knots'");
        return Prior::piecewise(pairs(j, "knots"));
    }
    throw DomainError("unknown prior family '" + family + "'");
}

json to_json(const Prior& p) {
    if (std::holds_alternative<Uniform>(p.family())) return {{"family", "uniform"}};
    if (const auto* pw = std::get_if<Power>(&p.family())) return {{"family", "power"}, {"a", pw->a}};
    return {{"family", "piecewise"}, {"knots", pairs_to_json(std::get<PiecewiseLinearCdf>(p.family()).knots)}};
}

CostDistribution cost_from_json(const json& j) {
    const std::string kind = field<std::string>(j, "kind");
    if (kind == "discrete") {
        if (!j.contains("points")) throw DomainError("missing field 'points'");
        return CostDistribution::discrete(pairs(j, "points"));
    }
    if (kind == "continuous") {
        if (!j.contains("knots")) throw DomainError("missing field 'knots'");
        return CostDistribution::continuous(pairs(j, "knots"));
    }
    throw DomainError("unknown cost distribution kind '" + kind + "'");
}

json to_json(const CostDistribution& K) {
    if (const auto* d = std::get_if<DiscreteCost>(&K.repr())) return {{"kind", "discrete"}, {"points", pairs_to_json(d->points)}};
    return {{"kind", "continuous"}, {"knots", pairs_to_json(std::get<ContinuousCost>(K.repr()).knots)}};
}

json to_json(const PosteriorDistribution& G) {
    json segs = json::array();
    for (const Segment& s : G.segments()) {
        if (const auto* f = std::get_if<FullDisclosure>(&s))
            segs.push_back({{"type", "full"}, {"a", f->a}, {"b", f->b}});
        else if (const auto* fl = std::get_if<Flat>(&s))
            segs.push_back({{"type", "flat"}, {"a", fl->a}, {"b", fl->b}, {"level", fl->level}});
        else {
            const auto& ap = std::get<AffinePower>(s);
            segs.push_back({{"type", "affine_power"},
                            {"a", ap.a},
                            {"b", ap.b},
                            {"base", ap.base},
                            {"beta", ap.beta},
                            {"r_anchor", ap.r_anchor}});
        }
    }
    json j{{"n", G.n()}, {"segments", segs}};
    j["atom"] = G.atom() ? json{{"location", G.atom()->location}, {"mass", G.atom()->mass}} : json(nullptr);
    return j;
}

PosteriorDistribution posterior_from_json(const json& j, const Prior& prior, int n) {
    std::vector<Segment> segs;
    for (const auto& s : field<json>(j, "segments")) {
        const std::string type = field<std::string>(s, "type");
        const double a = field<double>(s, "a"), b = field<double>(s, "b");
        if (type == "full")
            segs.push_back(FullDisclosure{a, b});
        else if (type == "flat")
            segs.push_back(Flat{a, b, field<double>(s, "level")});
        else if (type == "affine_power")
            segs.push_back(
                AffinePower{a, b, field<double>(s, "base"), field<double>(s, "beta"), field<double>(s, "r_anchor")});
        else
            throw DomainError("unknown segment type '" + type + "'");
    }
    std::optional<Atom> atom;
    if (j.contains("atom") && !j["atom"].is_null())
        atom = Atom{field<double>(j["atom"], "location"), field<double>(j["atom"], "mass")};
    return PosteriorDistribution(prior, n, std::move(segs), atom);
}

json to_json(const Equilibrium& eq) {
    const MarketParams& p = eq.params;
    return {
        {"params", {{"prior", to_json(p.prior)}, {"n", p.n}, {"alpha", p.alpha}, {"s", p.s}}},
        {"r_star", eq.r_star},
        {"v_L_star", eq.v_L_star},
        {"v_H_star", eq.v_H_star},
        {"v_T_star", eq.v_T_star},
        {"beta_star", eq.beta_star},
        {"eta", eq.eta},
        {"alpha_tilde", eq.alpha_tilde},
        {"r_lower_bar", eq.r_lower_bar},
        {"r_full_info", eq.r_full_info},
        {"bottom_disclosure", eq.bottom_disclosure},
        {"top_disclosure", eq.top_disclosure},
        {"full_disclosure", eq.full_disclosure},
        {"roots", roots_to_json(eq.candidate.roots)},
        {"G", to_json(eq.G)},
    };
}

Equilibrium equilibrium_from_json(const json& j) {
    const json& pj = field<json>(j, "params");
    MarketParams p{prior_from_json(field<json>(pj, "prior")), field<int>(pj, "n"), field<double>(pj, "alpha"),
                   field<double>(pj, "s")};
    if (p.n < 2) throw DomainError("field 'n' must be at least 2");
    Candidate c;
    c.v_L = field<double>(j, "v_L_star");
    c.r = field<double>(j, "r_star");
    c.beta = field<double>(j, "beta_star");
    c.v_H = field<double>(j, "v_H_star");
    c.v_T = field<double>(j, "v_T_star");
    c.n = p.n;
    c.prior = p.prior;
    if (j.contains("roots")) c.roots = roots_from_json(j["roots"]);
    PosteriorDistribution G = posterior_from_json(field<json>(j, "G"), p.prior, p.n);
    return Equilibrium{p,
                       c.r,
                       c.v_L,
                       c.v_H,
                       c.v_T,
                       c.beta,
                       field<double>(j, "eta"),
                       field<double>(j, "alpha_tilde"),
                       field<double>(j, "r_lower_bar"),
                       field<double>(j, "r_full_info"),
                       field<bool>(j, "bottom_disclosure"),
                       field<bool>(j, "top_disclosure"),
                       field<bool>(j, "full_disclosure"),
                       c,
                       std::move(G)};
}

json to_json(const LimitEquilibrium& lim) {
    return {{"v_H_inf", lim.v_H_inf},
            {"atom_location", lim.atom_location},
            {"atom_mass", lim.atom_mass},
            {"G_inf", to_json(lim.G_inf)}};
}

json to_json(const CertificateReport& c) {
    return {{"dm1_convex", c.dm1_convex},
            {"dm1_min_second_diff", num(c.dm1_min_second_diff)},
            {"dm1_continuity_gap", num(c.dm1_continuity_gap)},
            {"dm2_min_gap", num(c.dm2_min_gap)},
            {"dm3_max_contact_violation", num(c.dm3_max_contact_violation)},
            {"dm4_integral_gap", num(c.dm4_integral_gap)},
            {"payoff_identity_gap", num(c.payoff_identity_gap)},
            {"jump", num(c.jump)},
            {"pass", c.pass},
            {"failures", c.failures}};
}

json to_json(const OracleGap& g) {
    return {{"grid_size", g.grid_size},
            {"oracle_value", g.oracle_value},
            {"equilibrium_payoff", g.equilibrium_payoff},
            {"gap", g.gap},
            {"bound", kOracleGapConstant / g.grid_size}};
}

json to_json(const HeteroReport& h) {
    return {{"n", h.n},     {"holds", h.holds}, {"b_star", num(h.b_star)}, {"lhs", num(h.lhs)},
            {"rhs", num(h.rhs)}, {"phi_vs_uK_min_gap", num(h.phi_vs_uK_min_gap)}, {"r_1", h.r_1},
            {"note", h.note}};
}

json to_json(const SimReport& r) {
    auto est = [](const Estimate& e) { return json{{"value", num(e.value)}, {"se", num(e.se)}}; };
    json curve = json::array();
    for (const auto& b : r.conditional_sale_curve)
        curve.push_back({{"bin_left", b.left},
                         {"bin_right", b.right},
                         {"v_mid", b.v_mid},
                         {"count", b.count},
                         {"u_hat", num(b.u_hat)},
                         {"se", num(b.se)},
                         {"u_analytic", num(b.u_analytic)}});
    return {{"consumers", r.consumers},
            {"inexperienced", r.inexperienced},
            {"single_cost", r.single_cost},
            {"eta", est(r.eta)},
            {"cs_savvy", est(r.cs_savvy)},
            {"cs_inexperienced", est(r.cs_inexperienced)},
            {"firm_sale_shares", r.firm_sale_shares},
            {"sale_counts", r.sale_counts},
            {"visit_histogram", r.visit_histogram},
            {"multi_search_freq", r.multi_search_freq},
            {"conditional_sale_curve", curve}};
}

json to_json(const ZScore& z) {
    return {{"name", z.name}, {"simulated", num(z.simulated)}, {"analytic", num(z.analytic)}, {"se", num(z.se)},
            {"z", num(z.z)}};
}

json to_json(const SurplusReport& s) {
    return {{"cs_savvy", s.cs_savvy}, {"cs_inexperienced", s.cs_inexperienced}, {"note", s.note}};
}

json to_json(const SearchStats& s) {
    return {{"p_stop_first", s.p_stop_first},
            {"p_multi_visit", s.p_multi_visit},
            {"expected_visits", s.expected_visits},
            {"eta", s.eta},
            {"alpha_tilde", s.alpha_tilde}};
}

std::uint64_t config_hash(const json& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

const char* tool_version() { return DISCLOSE_VERSION; }

} // namespace disclose
