#include "disclose/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "disclose/errors.hpp"
#include "disclose/numerics.hpp"
#include "disclose/quadrature.hpp"

namespace disclose {

namespace {

constexpr double kJumpTol = 1e-9;

// Where an affine-power piece reaches 1.
double affine_top(const AffinePower& p) { return p.r_anchor + (1.0 - p.base) / p.beta; }

double segment_integral_power(const Segment& s, const Prior& prior, int n, double x0, double x1,
                              double k) {
    if (x1 <= x0) return 0.0;
    if (std::holds_alternative<FullDisclosure>(s)) return prior.integral_cdf_power(x0, x1, k);
    if (auto* f = std::get_if<Flat>(&s)) return (k == 0.0 ? 1.0 : std::pow(f->level, k)) * (x1 - x0);
    const auto& p = std::get<AffinePower>(s);
    double top = affine_top(p);
    double total = 0.0;
    double hi = std::min(x1, top);
    if (hi > x0) {
        double e = k / (n - 1.0) + 1.0;
        double lo = std::max(x0, p.r_anchor - p.base / p.beta);  // where the base expression hits 0
        if (hi > lo) {
            double X0 = std::max(0.0, p.base + p.beta * (lo - p.r_anchor));
            total += pow_diff(X0, p.beta * (hi - lo), e) / (e * p.beta);
        }
    }
    if (x1 > top) total += x1 - std::max(x0, top);
    return total;
}

} // namespace

double IntegrandPiece::operator()(double v, const Prior& prior) const {
    if (kind == Kind::Affine) return c0 + c1 * v;
    return c0 + c1 * (k == 0.0 ? 1.0 : std::pow(prior.cdf(std::clamp(v, 0.0, 1.0)), k));
}

double segment_start(const Segment& s) {
    return std::visit([](const auto& x) { return x.a; }, s);
}

double segment_end(const Segment& s) {
    return std::visit([](const auto& x) { return x.b; }, s);
}

double segment_value(const Segment& s, const Prior& prior, int n, double v) {
    if (std::holds_alternative<FullDisclosure>(s)) return prior.cdf(std::clamp(v, 0.0, 1.0));
    if (auto* f = std::get_if<Flat>(&s)) return f->level;
    const auto& p = std::get<AffinePower>(s);
    double x = p.base + p.beta * (v - p.r_anchor);
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return n == 2 ? x : std::pow(x, 1.0 / (n - 1.0));
}

PosteriorDistribution::PosteriorDistribution(Prior prior, int n, std::vector<Segment> segments,
                                             std::optional<Atom> atom)
    : prior_(std::move(prior)), n_(n), atom_(atom) {
    if (n < 1) throw DomainError("posterior: n must be positive");
    for (auto& s : segments)
        if (segment_end(s) > segment_start(s)) segments_.push_back(s);
    if (segments_.empty()) throw DomainError("posterior: no segments");
    if (segment_start(segments_.front()) != 0.0 || segment_end(segments_.back()) != 1.0)
        throw DomainError("posterior: segments must cover [0,1]");
    bool atom_seen = false;
    auto check_jump = [&](double at, double jump) {
        if (jump < -kJumpTol)
            throw DomainError("posterior: cdf decreases at " + std::to_string(at));
        if (jump > kJumpTol) {
            if (!atom_ || std::fabs(atom_->location - at) > 1e-12 ||
                std::fabs(atom_->mass - jump) > kJumpTol)
                throw DomainError("posterior: undeclared jump at " + std::to_string(at));
            atom_seen = true;
        }
    };
    check_jump(0.0, segment_value(segments_.front(), prior_, n_, 0.0));
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        double b = segment_end(segments_[i]);
        if (std::fabs(segment_start(segments_[i + 1]) - b) > 1e-12)
            throw DomainError("posterior: segments not contiguous");
        check_jump(b, segment_value(segments_[i + 1], prior_, n_, b) -
                          segment_value(segments_[i], prior_, n_, b));
    }
    if (std::fabs(segment_value(segments_.back(), prior_, n_, 1.0) - 1.0) > kJumpTol)
        throw DomainError("posterior: cdf does not reach 1");
    if (atom_ && atom_->mass > 0.0 && !atom_seen)
        throw DomainError("posterior: declared atom has no matching jump");
}

PosteriorDistribution PosteriorDistribution::full_disclosure(const Prior& prior, int n) {
    return PosteriorDistribution(prior, n, {FullDisclosure{0.0, 1.0}});
}

PosteriorDistribution PosteriorDistribution::point_mass(const Prior& prior, int n, double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("point_mass: location must be interior");
    return PosteriorDistribution(prior, n, {Flat{0.0, x, 0.0}, Flat{x, 1.0, 1.0}}, Atom{x, 1.0});
}

std::size_t PosteriorDistribution::locate(double v) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), v,
                               [](double x, const Segment& s) { return x < segment_start(s); });
    if (it == segments_.begin()) return 0;
    return static_cast<std::size_t>(it - segments_.begin()) - 1;
}

double PosteriorDistribution::cdf(double v) const {
    if (v < 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    return segment_value(segments_[locate(v)], prior_, n_, v);
}

double PosteriorDistribution::cdf_left(double v) const {
    if (v <= 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    std::size_t i = locate(v);
    if (segment_start(segments_[i]) == v && i > 0) --i;
    return segment_value(segments_[i], prior_, n_, v);
}

double PosteriorDistribution::quantile(double q) const {
    if (q <= 0.0) return 0.0;
    for (const auto& s : segments_) {
        double a = segment_start(s), b = segment_end(s);
        double ga = segment_value(s, prior_, n_, a);
        if (q <= ga) return a;
        double gb = segment_value(s, prior_, n_, b);
        if (q <= gb) {
            if (std::holds_alternative<FullDisclosure>(s)) return std::clamp(prior_.quantile(q), a, b);
            if (auto* p = std::get_if<AffinePower>(&s)) {
                double x = n_ == 2 ? q : std::pow(q, n_ - 1.0);
                return std::clamp(p->r_anchor + (x - p->base) / p->beta, a, b);
            }
            return a;
        }
    }
    return 1.0;
}

double PosteriorDistribution::integral_cdf_power(double lo, double hi, double k) const {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    double total = 0.0;
    for (const auto& s : segments_) {
        double x0 = std::max(lo, segment_start(s));
        double x1 = std::min(hi, segment_end(s));
        if (x1 > x0) total += segment_integral_power(s, prior_, n_, x0, x1, k);
    }
    return total;
}

double PosteriorDistribution::top() const {
    for (const auto& s : segments_) {
        double a = segment_start(s), b = segment_end(s);
        if (segment_value(s, prior_, n_, a) >= 1.0) return a;
        if (auto* p = std::get_if<AffinePower>(&s)) {
            double t = affine_top(*p);
            if (t < b) return std::max(a, t);
        }
    }
    return 1.0;
}

std::vector<double> PosteriorDistribution::breakpoints() const {
    std::vector<double> out{0.0, 1.0};
    for (const auto& s : segments_) {
        out.push_back(segment_start(s));
        if (auto* p = std::get_if<AffinePower>(&s)) {
            double t = affine_top(*p);
            if (t > p->a && t < p->b) out.push_back(t);
        }
        if (std::holds_alternative<FullDisclosure>(s))
            for (double x : prior_.breakpoints())
                if (x > segment_start(s) && x < segment_end(s)) out.push_back(x);
    }
    if (atom_) out.push_back(atom_->location);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double PosteriorDistribution::continuous_part(const Segment& s, double x0, double x1,
                                              const IntegrandPiece& f) const {
    if (std::holds_alternative<Flat>(s)) return 0.0;
    if (std::holds_alternative<FullDisclosure>(s)) {
        double F0 = prior_.cdf(x0), F1 = prior_.cdf(x1);
        double lin = f.kind == IntegrandPiece::Kind::Affine
                         ? prior_.partial_mean(x0, x1)
                         : (std::pow(F1, f.k + 1.0) - std::pow(F0, f.k + 1.0)) / (f.k + 1.0);
        return f.c0 * (F1 - F0) + f.c1 * lin;
    }
    const auto& p = std::get<AffinePower>(s);
    double G0 = segment_value(s, prior_, n_, x0), G1 = segment_value(s, prior_, n_, x1);
    if (G1 <= G0) return 0.0;
    double lin;
    if (f.kind == IntegrandPiece::Kind::Affine) {
        lin = x1 * G1 - x0 * G0 - segment_integral_power(s, prior_, n_, x0, x1, 1.0);
    } else {
        // Integrate in probability space, where the inverse is polynomial.
        auto v_of_q = [&](double q) {
            double x = n_ == 2 ? q : std::pow(q, n_ - 1.0);
            return std::clamp(p.r_anchor + (x - p.base) / p.beta, x0, x1);
        };
        std::vector<double> cuts{G0};
        for (double knot : prior_.breakpoints())
            if (knot > x0 && knot < x1) cuts.push_back(segment_value(s, prior_, n_, knot));
        cuts.push_back(G1);
        std::sort(cuts.begin(), cuts.end());
        lin = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            lin += integrate_gl(
                [&](double q) { return std::pow(prior_.cdf(v_of_q(q)), f.k); }, cuts[i],
                cuts[i + 1], 8, 20);
    }
    return f.c0 * (G1 - G0) + f.c1 * lin;
}

double PosteriorDistribution::expect(const IntegrandPiece& f) const {
    double lo = std::max(f.lo, 0.0), hi = std::min(f.hi, 1.0);
    double total = 0.0;
    if (hi > lo) {
        for (const auto& s : segments_) {
            double x0 = std::max(lo, segment_start(s));
            double x1 = std::min(hi, segment_end(s));
            if (x1 > x0) total += continuous_part(s, x0, x1, f);
        }
    }
    if (atom_ && atom_->mass > 0.0) {
        double x = atom_->location;
        if ((x >= lo && x < hi) || (x == hi && hi >= 1.0)) total += atom_->mass * f(x, prior_);
    }
    return total;
}

double PosteriorDistribution::expect(const Integrand& f) const {
    double total = 0.0;
    for (const auto& piece : f) total += expect(piece);
    return total;
}

} // namespace disclose
