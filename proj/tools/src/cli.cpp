#include "disclose_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "disclose/errors.hpp"

namespace disclose::cli {

namespace {

const std::set<std::string> kTopKeys{"prior", "n", "alpha", "s", "cost", "sweep", "simulate", "limit"};

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

int integer(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ConfigError(std::string("'") + key + "' must be an integer");
    return j[key].get<int>();
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

void check_point(SweepAxis axis, double x, double mu) {
    if (axis == SweepAxis::N && (x < 2.0 || x != std::floor(x)))
        throw ConfigError("sweep: n values must be integers >= 2");
    if (axis == SweepAxis::S && !(x > 0.0 && x < mu)) throw ConfigError("sweep: s values must lie in (0, mean)");
    if (axis == SweepAxis::Alpha && !(x >= 0.0 && x < 1.0)) throw ConfigError("sweep: alpha values must lie in [0, 1)");
}

SweepAxis parse_axis(const std::string& a) {
    if (a == "n") return SweepAxis::N;
    if (a == "s") return SweepAxis::S;
    if (a == "alpha") return SweepAxis::Alpha;
    throw ConfigError("sweep axis must be n, s or alpha");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

struct Options {
    std::string config_path, out_path, equilibrium_path, curve_path;
    int grid_size = 1001;
    std::optional<std::uint64_t> seed;
    std::optional<int> oracle_grid;
    std::vector<std::string> perturb;
    std::optional<int> n;
    std::optional<double> alpha, s;
    std::optional<std::uint64_t> consumers;
    std::optional<std::string> axis;
    std::optional<double> from, to;
    std::optional<int> count;
};

class Runner {
public:
    Runner(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {
        json raw = opt.config_path.empty() ? json::object() : read_json_file(opt.config_path);
        if (!raw.is_object()) throw ConfigError("config must be a JSON object");
        if (opt.n) raw["n"] = *opt.n;
        if (opt.alpha) raw["alpha"] = *opt.alpha;
        if (opt.s) raw["s"] = *opt.s;
        if (opt.axis || opt.from || opt.to || opt.count) {
            json sw = raw.value("sweep", json::object());
            if (opt.axis) sw["axis"] = *opt.axis;
            if (opt.from || opt.to || opt.count) {
                sw.erase("values");
                if (opt.from) sw["from"] = *opt.from;
                if (opt.to) sw["to"] = *opt.to;
                if (opt.count) sw["count"] = *opt.count;
            }
            raw["sweep"] = sw;
        }
        if (opt.consumers) raw["simulate"]["consumers"] = *opt.consumers;
        cfg_ = parse_config(raw);
    }

    int solve() {
        Equilibrium eq = solve_endog(cfg_.prior, cfg_.n, cfg_.alpha, need_s());
        validate_equilibrium(eq);
        json j = envelope("solve");
        j["equilibrium"] = to_json(eq);
        j["surplus"] = to_json(surplus(eq));
        j["search_stats"] = to_json(search_stats(eq));
        if (eq.full_disclosure) j["note"] = "alpha = 0: full disclosure, G equals the prior";
        emit(j.dump(2) + "\n");
        err_ << "r* = " << fmt(eq.r_star) << "  v_L* = " << fmt(eq.v_L_star) << "  v_H* = " << fmt(eq.v_H_star)
             << "  v_T* = " << fmt(eq.v_T_star) << "  beta* = " << fmt(eq.beta_star) << "\n";
        return kOk;
    }

    int sweep() {
        if (!cfg_.sweep) throw ConfigError("sweep: no grid given (config 'sweep' or --axis/--from/--to/--count)");
        const SweepSpec& sp = *cfg_.sweep;
        MarketParams base{cfg_.prior, cfg_.n, cfg_.alpha, cfg_.s.value_or(0.0)};
        if (sp.axis != SweepAxis::S && !cfg_.s) throw ConfigError("'s' is required");
        if (sp.axis == SweepAxis::S) base.s = sp.values.front();
        std::vector<ScanRow> rows = disclose::sweep(base, sp.axis, sp.values, opt_.grid_size < 2 ? 2001 : opt_.grid_size);
        std::ostringstream os;
        os << "# disclose_eq " << tool_version() << " config_hash=" << hex64(config_hash(cfg_.raw)) << "\n";
        write_sweep_csv(os, sp.axis, rows);
        emit(os.str());
        std::size_t failed = 0;
        for (const auto& r : rows) failed += r.ok ? 0 : 1;
        err_ << rows.size() << " points, " << failed << " failed\n";
        return kOk;
    }

    int verify() {
        Equilibrium eq = load_or_solve();
        Market m = market_from(eq);
        json j = envelope("verify");
        if (!opt_.perturb.empty()) {
            const std::string& field = opt_.perturb[0];
            double delta = 0.0;
            try {
                delta = std::stod(opt_.perturb[1]);
            } catch (const std::exception&) {
                throw ConfigError("--perturb: delta must be a number");
            }
            double v_L = eq.v_L_star, r = eq.r_star;
            if (field == "v_L")
                v_L += delta;
            else if (field == "r")
                r += delta;
            else
                throw ConfigError("--perturb: field must be v_L or r");
            if (!(v_L >= 0.0 && v_L < r && r < 1.0) || !candidate_exists(cfg_.prior, eq.params.n, v_L, r))
                throw ConfigError("--perturb: no candidate at v_L=" + fmt(v_L) + ", r=" + fmt(r));
            m = market_from(make_candidate(eq.params.prior, eq.params.n, v_L, r), eq.params.alpha);
            j["perturbation"] = {{"field", field}, {"delta", delta}, {"v_L", v_L}, {"r", r}};
        }
        CertificateReport cert = check_dm_conditions(m, std::max(opt_.grid_size, 501));
        j["certificate"] = to_json(cert);
        bool pass = cert.pass;
        if (opt_.oracle_grid) {
            OracleGap g = oracle_gap(m, *opt_.oracle_grid);
            const bool ok = g.gap <= kOracleGapConstant / g.grid_size;
            j["oracle"] = to_json(g);
            j["oracle"]["pass"] = ok;
            pass = pass && ok;
            err_ << "oracle gap at m=" << g.grid_size << ": " << fmt(g.gap) << " (bound " << fmt(kOracleGapConstant / g.grid_size)
                 << ")\n";
        }
        j["pass"] = pass;
        emit(j.dump(2) + "\n");
        err_ << "DM1 " << (cert.dm1_convex ? "ok" : "FAIL") << "  DM2 min gap " << fmt(cert.dm2_min_gap) << "  DM3 max violation "
             << fmt(cert.dm3_max_contact_violation) << "  DM4 gap " << fmt(cert.dm4_integral_gap) << "\n";
        if (!pass) {
            std::string f;
            for (const auto& x : cert.failures) f += (f.empty() ? "" : ", ") + x;
            err_ << "certificate failed" << (f.empty() ? "" : ": " + f) << "\n";
            return kCertificateFailure;
        }
        return kOk;
    }

    int simulate() {
        if (!opt_.seed) throw ConfigError("simulate: --seed is required");
        Equilibrium eq = load_or_solve();
        SimConfig sc;
        sc.consumers = cfg_.consumers;
        sc.seed = *opt_.seed;
        sc.bins = cfg_.bins;
        if (cfg_.cost)
            sc.cost_model = HeterogeneousCost{*cfg_.cost};
        else
            sc.cost_model = SingleCost{eq.params.s};
        SimReport rep = simulate_market(eq, sc);
        std::vector<ZScore> zs = sim_zscores(eq, rep);
        double worst = 0.0;
        json zj = json::array();
        for (const auto& z : zs) {
            zj.push_back(to_json(z));
            worst = std::max(worst, std::fabs(z.z));
        }
        json j = envelope("simulate");
        j["seed"] = sc.seed;
        j["report"] = to_json(rep);
        j["zscores"] = zj;
        j["max_abs_z"] = worst;
        emit(j.dump(2) + "\n");
        std::string curve = opt_.curve_path;
        if (curve.empty() && !opt_.out_path.empty()) curve = opt_.out_path + ".curve.csv";
        if (!curve.empty()) {
            std::ofstream cf(curve);
            if (!cf) throw ConfigError("cannot write " + curve);
            write_curve_csv(cf, rep);
        }
        for (const auto& z : zs)
            err_ << z.name << ": simulated " << fmt(z.simulated) << "  analytic " << fmt(z.analytic) << "  z " << fmt(z.z)
                 << "\n";
        if (worst > 5.0) {
            err_ << "statistical failure: |z| = " << fmt(worst) << " > 5\n";
            return kStatisticalFailure;
        }
        return kOk;
    }

    int limit() {
        const double s = need_s();
        const int nl = n_lower_bar(cfg_.prior, cfg_.alpha, s);
        LimitEquilibrium lim = limit_equilibrium(cfg_.prior, cfg_.alpha, s);
        json seq = json::array();
        long long n = nl;
        for (int k = 0; k <= cfg_.doublings; ++k, n *= 2) {
            Equilibrium eq = solve_endog(cfg_.prior, static_cast<int>(n), cfg_.alpha, s);
            seq.push_back({{"n", n}, {"v_H_star", eq.v_H_star}, {"sup_distance_to_limit", sup_distance_midpoints(eq.G, lim.G_inf)}});
        }
        json j = envelope("limit");
        j["n_lower_bar"] = nl;
        j["v_H_sequence"] = seq;
        j["limit"] = to_json(lim);
        emit(j.dump(2) + "\n");
        err_ << "n_lower_bar = " << nl << "  v_H_inf = " << fmt(lim.v_H_inf) << "  atom " << fmt(lim.atom_mass) << " at "
             << fmt(lim.atom_location) << "\n";
        return kOk;
    }

    int hetero() {
        if (!cfg_.cost) throw ConfigError("hetero: 'cost' distribution is required");
        json j = envelope("hetero");
        j["cost"] = to_json(*cfg_.cost);
        if (cfg_.raw.contains("n")) j["at_n"] = to_json(hetero_check(cfg_.prior, cfg_.n, cfg_.alpha, *cfg_.cost));
        HeteroScan scan = hetero_scan(cfg_.prior, cfg_.alpha, *cfg_.cost);
        json trail = json::array();
        for (const auto& r : scan.trail) trail.push_back(to_json(r));
        j["scan"] = {{"first_n", scan.first_n}, {"report", to_json(scan.report)}, {"trail", trail}};
        emit(j.dump(2) + "\n");
        err_ << "condition holds from n = " << scan.first_n << " on the doubling scan; b* = " << fmt(scan.report.b_star)
             << "\n";
        return kOk;
    }

private:
    const Options& opt_;
    std::ostream& out_;
    std::ostream& err_;
    RunConfig cfg_;

    double need_s() const {
        if (!cfg_.s) throw ConfigError("'s' is required");
        return *cfg_.s;
    }

    json envelope(const char* command) const {
        return {{"tool", "disclose_eq"},
                {"version", tool_version()},
                {"config_hash", hex64(config_hash(cfg_.raw))},
                {"command", command}};
    }

    Equilibrium load_or_solve() const {
        if (opt_.equilibrium_path.empty()) {
            Equilibrium eq = solve_endog(cfg_.prior, cfg_.n, cfg_.alpha, need_s());
            validate_equilibrium(eq);
            return eq;
        }
        json j = read_json_file(opt_.equilibrium_path);
        try {
            return equilibrium_from_json(j.contains("equilibrium") ? j["equilibrium"] : j);
        } catch (const DomainError& e) {
            throw ConfigError(opt_.equilibrium_path + ": " + e.what());
        }
    }

    void emit(const std::string& text) const {
        if (opt_.out_path.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(opt_.out_path);
        if (!f) throw ConfigError("cannot write " + opt_.out_path);
        f << text;
    }
};

} // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    check_keys(j, kTopKeys, "config");
    RunConfig c;
    c.raw = j;
    try {
        if (j.contains("prior")) c.prior = prior_from_json(j["prior"]);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("prior: ") + e.what());
    }
    const double mu = c.prior.mean();
    if (j.contains("n")) c.n = integer(j, "n");
    if (c.n < 2) throw ConfigError("'n' must be at least 2");
    if (j.contains("alpha")) c.alpha = number(j, "alpha");
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw ConfigError("'alpha' must lie in [0, 1]");
    if (j.contains("s")) {
        c.s = number(j, "s");
        if (!(*c.s > 0.0 && *c.s < mu)) throw ConfigError("'s' must lie in (0, mean of the prior)");
    }
    if (j.contains("cost")) {
        try {
            c.cost = cost_from_json(j["cost"]);
            c.cost->validate(mu);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("cost: ") + e.what());
        }
    }
    if (j.contains("sweep")) {
        const json& sw = j["sweep"];
        if (!sw.is_object()) throw ConfigError("'sweep' must be an object");
        check_keys(sw, {"axis", "values", "from", "to", "count"}, "sweep");
        if (!sw.contains("axis") || !sw["axis"].is_string()) throw ConfigError("sweep: 'axis' is required");
        SweepSpec sp;
        sp.axis = parse_axis(sw["axis"].get<std::string>());
        if (sw.contains("values")) {
            if (!sw["values"].is_array() || sw["values"].empty()) throw ConfigError("sweep: 'values' must be a non-empty array");
            for (const auto& v : sw["values"]) {
                if (!v.is_number()) throw ConfigError("sweep: values must be numbers");
                sp.values.push_back(v.get<double>());
            }
        } else {
            const double from = number(sw, "from"), to = number(sw, "to");
            const int count = integer(sw, "count");
            if (count < 1) throw ConfigError("sweep: 'count' must be positive");
            for (int i = 0; i < count; ++i) {
                double x = count == 1 ? from : from + (to - from) * i / (count - 1);
                if (sp.axis == SweepAxis::N) x = std::round(x);
                sp.values.push_back(x);
            }
        }
        for (double x : sp.values) check_point(sp.axis, x, mu);
        c.sweep = sp;
    }
    if (j.contains("simulate")) {
        const json& sm = j["simulate"];
        if (!sm.is_object()) throw ConfigError("'simulate' must be an object");
        check_keys(sm, {"consumers", "bins"}, "simulate");
        if (sm.contains("consumers")) {
            if (!sm["consumers"].is_number_unsigned() || sm["consumers"].get<std::uint64_t>() < 1)
                throw ConfigError("simulate: 'consumers' must be a positive integer");
            c.consumers = sm["consumers"].get<std::uint64_t>();
        }
        if (sm.contains("bins")) {
            c.bins = integer(sm, "bins");
            if (c.bins < 10) throw ConfigError("simulate: 'bins' must be at least 10");
        }
    }
    if (j.contains("limit")) {
        const json& lm = j["limit"];
        if (!lm.is_object()) throw ConfigError("'limit' must be an object");
        check_keys(lm, {"doublings"}, "limit");
        if (lm.contains("doublings")) {
            c.doublings = integer(lm, "doublings");
            if (c.doublings < 0 || c.doublings > 12) throw ConfigError("limit: 'doublings' must lie in [0, 12]");
        }
    }
    return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibrium information disclosure in consumer search markets", "disclose_eq"};
    app.set_version_flag("--version", std::string("disclose_eq ") + tool_version());
    app.require_subcommand(1, 1);
    Options opt;
    app.add_option("--config", opt.config_path, "JSON run configuration");
    app.add_option("--out", opt.out_path, "Write the main output here instead of stdout");
    app.add_option("--grid-size", opt.grid_size, "Grid size for certificate checks and verdicts");
    app.add_option("--seed", opt.seed, "Simulation seed (required for simulate)");
    app.add_option("--oracle-grid", opt.oracle_grid, "Also run the LP best-response oracle on this many points")
        ->check(CLI::Range(101, 2001));
    app.add_option("--perturb", opt.perturb, "Perturb a field of the equilibrium: <v_L|r> <delta>")->expected(2);
    app.add_option("--n", opt.n, "Override n");
    app.add_option("--alpha", opt.alpha, "Override alpha");
    app.add_option("--s", opt.s, "Override the search cost");
    app.add_option("--equilibrium", opt.equilibrium_path, "Read the equilibrium from a solve output instead of solving");
    app.add_option("--curve", opt.curve_path, "Conditional-sale curve CSV path (simulate)");
    app.add_option("--consumers", opt.consumers, "Simulated consumers");
    app.add_option("--axis", opt.axis, "Sweep axis: n, s or alpha");
    app.add_option("--from", opt.from, "Sweep start");
    app.add_option("--to", opt.to, "Sweep end");
    app.add_option("--count", opt.count, "Sweep points");

    std::string command;
    for (const char* name : {"solve", "sweep", "verify", "simulate", "limit", "hetero"}) {
        static const std::map<std::string, std::string> help{
            {"solve", "Solve for the equilibrium"},
            {"sweep", "Comparative statics along n, s or alpha (CSV)"},
            {"verify", "Certify an equilibrium (DM conditions, optional LP oracle)"},
            {"simulate", "Agent-level Monte Carlo of the market"},
            {"limit", "Market-size threshold and the large-market limit"},
            {"hetero", "Sufficient condition under heterogeneous search costs"}};
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->fallthrough();
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        Runner runner(opt, out, err);
        if (command == "solve") return runner.solve();
        if (command == "sweep") return runner.sweep();
        if (command == "verify") return runner.verify();
        if (command == "simulate") return runner.simulate();
        if (command == "limit") return runner.limit();
        return runner.hetero();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const UnsupportedBoundary& e) {
        err << "unsupported boundary: " << e.what() << "\n";
        return kUnsupportedBoundary;
    } catch (const ValidationFailure& e) {
        err << "invariant failed: " << e.invariant() << " (" << e.what() << ")\n";
        return kInvariantFailure;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << "\n";
        return kInvariantFailure;
    }
}

} // namespace disclose::cli
