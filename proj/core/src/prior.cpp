#include "disclose/prior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "disclose/errors.hpp"

namespace disclose {

namespace {

void require_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0))
        throw DomainError(std::string(what) + " outside [0,1]: " + std::to_string(v));
}

double exponent_of(const Prior::Family& f) {
    if (std::holds_alternative<Power>(f)) return std::get<Power>(f).a;
    return 1.0;
}

} // namespace

Prior::Prior(Family family) : family_(std::move(family)) {
    if (auto* p = std::get_if<Power>(&family_)) {
        if (!(p->a > 0.0) || !std::isfinite(p->a))
            throw DomainError("power prior needs a finite exponent a > 0");
        mean_ = p->a / (p->a + 1.0);
    } else if (auto* pw = std::get_if<PiecewiseLinearCdf>(&family_)) {
        const auto& k = pw->knots;
        if (k.size() < 3) throw DomainError("piecewise prior needs at least two segments");
        if (k.front().first != 0.0 || k.front().second != 0.0)
            throw DomainError("piecewise prior must start at knot (0,0)");
        if (k.back().first != 1.0 || k.back().second != 1.0)
            throw DomainError("piecewise prior must end at knot (1,1)");
        for (std::size_t i = 1; i < k.size(); ++i) {
            if (!(k[i].first > k[i - 1].first) || !(k[i].second > k[i - 1].second))
                throw DomainError("piecewise prior knots must be strictly increasing");
            slopes_.push_back((k[i].second - k[i - 1].second) / (k[i].first - k[i - 1].first));
        }
        mean_ = partial_mean(0.0, 1.0);
    } else {
        mean_ = 0.5;
    }
}

std::size_t Prior::segment(double v) const {
    const auto& k = std::get<PiecewiseLinearCdf>(family_).knots;
    auto it = std::upper_bound(k.begin(), k.end(), v,
                               [](double x, const auto& knot) { return x < knot.first; });
    std::size_t i = static_cast<std::size_t>(it - k.begin());
    if (i == 0) return 0;
    return std::min(i - 1, slopes_.size() - 1);
}

double Prior::cdf(double v) const {
    require_unit(v, "cdf argument");
    if (auto* pw = std::get_if<PiecewiseLinearCdf>(&family_)) {
        std::size_t i = segment(v);
        const auto& k = pw->knots[i];
        return std::min(1.0, k.second + slopes_[i] * (v - k.first));
    }
    double a = exponent_of(family_);
    return a == 1.0 ? v : std::pow(v, a);
}

double Prior::density(double v) const {
    require_unit(v, "density argument");
    if (std::holds_alternative<PiecewiseLinearCdf>(family_)) return slopes_[segment(v)];
    double a = exponent_of(family_);
    if (a == 1.0) return 1.0;
    return a * std::pow(v, a - 1.0);
}

double Prior::quantile(double q) const {
    require_unit(q, "quantile argument");
    if (q == 1.0) return 1.0;
    if (auto* pw = std::get_if<PiecewiseLinearCdf>(&family_)) {
        const auto& k = pw->knots;
        auto it = std::upper_bound(k.begin(), k.end(), q,
                                   [](double x, const auto& knot) { return x < knot.second; });
        std::size_t i = std::min(static_cast<std::size_t>(it - k.begin()) - 1, slopes_.size() - 1);
        return std::min(1.0, k[i].first + (q - k[i].second) / slopes_[i]);
    }
    double a = exponent_of(family_);
    return a == 1.0 ? q : std::pow(q, 1.0 / a);
}

double Prior::integral_cdf_power(double lo, double hi, double k) const {
    if (hi <= lo) return 0.0;
    if (auto* pw = std::get_if<PiecewiseLinearCdf>(&family_)) {
        const auto& kn = pw->knots;
        double total = 0.0;
        for (std::size_t i = segment(lo); i < slopes_.size() && kn[i].first < hi; ++i) {
            double x0 = std::max(lo, kn[i].first);
            double x1 = std::min(hi, kn[i + 1].first);
            if (x1 <= x0) continue;
            double f0 = kn[i].second + slopes_[i] * (x0 - kn[i].first);
            double f1 = kn[i].second + slopes_[i] * (x1 - kn[i].first);
            total += (std::pow(f1, k + 1.0) - std::pow(f0, k + 1.0)) / ((k + 1.0) * slopes_[i]);
        }
        return total;
    }
    double e = exponent_of(family_) * k + 1.0;
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

double Prior::partial_mean(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    if (auto* pw = std::get_if<PiecewiseLinearCdf>(&family_)) {
        const auto& kn = pw->knots;
        double total = 0.0;
        for (std::size_t i = segment(lo); i < slopes_.size() && kn[i].first < hi; ++i) {
            double x0 = std::max(lo, kn[i].first);
            double x1 = std::min(hi, kn[i + 1].first);
            if (x1 <= x0) continue;
            total += slopes_[i] * (x1 * x1 - x0 * x0) / 2.0;
        }
        return total;
    }
    double a = exponent_of(family_);
    return a / (a + 1.0) * (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0));
}

double Prior::cdf_power_derivative(double v, double m) const {
    double f = cdf(v);
    if (m == 1.0) return density(v);
    if (std::holds_alternative<PiecewiseLinearCdf>(family_))
        return m * std::pow(f, m - 1.0) * density(v);
    double e = exponent_of(family_) * m;
    if (e == 1.0) return 1.0;
    return e * std::pow(v, e - 1.0);
}

double Prior::cdf_power(double v, double m) const {
    if (std::holds_alternative<PiecewiseLinearCdf>(family_)) return std::pow(cdf(v), m);
    require_unit(v, "cdf argument");
    double e = exponent_of(family_) * m;
    return e == 1.0 ? v : std::pow(v, e);
}

double Prior::cdf_power_derivative_inverse(double slope, double m) const {
    if (std::holds_alternative<PiecewiseLinearCdf>(family_)) return -1.0;
    double e = exponent_of(family_) * m;
    if (e <= 1.0) return -1.0;
    return std::pow(slope / e, 1.0 / (e - 1.0));
}

bool Prior::power_is_affine(int n) const {
    double m = n - 1.0;
    if (std::holds_alternative<Uniform>(family_)) return n == 2;
    if (auto* p = std::get_if<Power>(&family_)) return std::fabs(p->a * m - 1.0) < 1e-14;
    if (n != 2) return false;
    for (double s : slopes_)
        if (std::fabs(s - 1.0) > 1e-12) return false;
    return true;
}

std::vector<double> Prior::breakpoints() const {
    std::vector<double> out;
    if (auto* pw = std::get_if<PiecewiseLinearCdf>(&family_))
        for (std::size_t i = 1; i + 1 < pw->knots.size(); ++i) out.push_back(pw->knots[i].first);
    return out;
}

TruncatedMoments truncated_moments(const Prior& p, double a, double b, int n) {
    if (!(b > a)) throw DomainError("truncated_moments: degenerate interval");
    if (n < 2) throw DomainError("truncated_moments: n must be at least 2");
    TruncatedMoments m;
    double fa = p.cdf(a), fb = p.cdf(b);
    m.mass = fb - fa;
    if (m.mass > 0.0) {
        m.mu_tilde = std::clamp(p.partial_mean(a, b) / m.mass, a, b);
        m.eta_tilde = (std::pow(fb, n) - std::pow(fa, n)) / (n * m.mass);
    } else {
        m.mu_tilde = 0.5 * (a + b);
        m.eta_tilde = std::pow(fa, n - 1);
    }
    return m;
}

bool check_convexity(const Prior& p, int n) {
    if (n < 2) throw DomainError("check_convexity: n must be at least 2");
    const auto& f = p.family();
    if (std::holds_alternative<Uniform>(f)) return true;
    if (auto* pw = std::get_if<Power>(&f)) return pw->a * (n - 1) >= 1.0 - 1e-14;
    const int m = 1001;
    std::vector<double> y(m);
    for (int i = 0; i < m; ++i) y[i] = std::pow(p.cdf(static_cast<double>(i) / (m - 1)), n - 1);
    for (int i = 1; i + 1 < m; ++i)
        if (y[i - 1] - 2.0 * y[i] + y[i + 1] < -1e-10) return false;
    return true;
}

} // namespace disclose
