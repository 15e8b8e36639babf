#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace disclose {

struct Uniform {};

struct Power {
    double a = 1.0;
};

struct PiecewiseLinearCdf {
    // (value, cumulative probability), starting at (0,0) and ending at (1,1).
    std::vector<std::pair<double, double>> knots;
};

struct TruncatedMoments {
    double mass = 0.0;
    double mu_tilde = 0.0;
    double eta_tilde = 0.0;
};

// Valuation distribution F on [0,1]. Immutable after construction.
class Prior {
public:
    using Family = std::variant<Uniform, Power, PiecewiseLinearCdf>;

    Prior() : Prior(Uniform{}) {}
    explicit Prior(Family family);

    static Prior uniform() { return Prior(Uniform{}); }
    static Prior power(double a) { return Prior(Power{a}); }
    static Prior piecewise(std::vector<std::pair<double, double>> knots) {
        return Prior(PiecewiseLinearCdf{std::move(knots)});
    }

    const Family& family() const { return family_; }

    double cdf(double v) const;
    // Right density; at v = 1 the left one.
    double density(double v) const;
    double quantile(double q) const;
    double mean() const { return mean_; }

    // Integral of F(v)^k dv over [a, b]; k > -1 / exponent for Power.
    double integral_cdf_power(double a, double b, double k) const;
    double integral_cdf(double a, double b) const { return integral_cdf_power(a, b, 1.0); }
    // Integral of v dF over [a, b].
    double partial_mean(double a, double b) const;
    // F(v)^m with a single pow for the analytic families.
    double cdf_power(double v, double m) const;
    // Derivative of F^{m} at v (right derivative at knots).
    double cdf_power_derivative(double v, double m) const;
    // Point where the derivative of F^m equals `slope`, when F^m is strictly
    // convex with a closed-form inverse derivative (Uniform, Power); else -1.
    double cdf_power_derivative_inverse(double slope, double m) const;

    // True when F^{n-1} is affine on [0,1] (then F^{n-1}(v) = v).
    bool power_is_affine(int n) const;

    // Knots where the density may jump (interior only).
    std::vector<double> breakpoints() const;

private:
    Family family_;
    double mean_ = 0.5;
    std::vector<double> slopes_;  // piecewise family only
    std::size_t segment(double v) const;
};

TruncatedMoments truncated_moments(const Prior& p, double a, double b, int n);
bool check_convexity(const Prior& p, int n);

} // namespace disclose
