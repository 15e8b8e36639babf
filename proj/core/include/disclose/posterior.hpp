#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "disclose/prior.hpp"

namespace disclose {

// G = F on [a, b].
struct FullDisclosure {
    double a, b;
};

// G constant at `level` on [a, b).
struct Flat {
    double a, b, level;
};

// G = min{(base + beta (v - r_anchor))^{1/(n-1)}, 1} on [a, b].
struct AffinePower {
    double a, b, base, beta, r_anchor;
};

using Segment = std::variant<FullDisclosure, Flat, AffinePower>;

struct Atom {
    double location;
    double mass;
};

// One piece of a piecewise integrand on [lo, hi): c0 + c1 * v (Affine) or
// c0 + c1 * F(v)^k (PowerOfF). A piece ending at 1 includes the point 1.
struct IntegrandPiece {
    enum class Kind { Affine, PowerOfF };
    double lo, hi;
    Kind kind;
    double c0, c1;
    double k = 1.0;

    double operator()(double v, const Prior& prior) const;
};

using Integrand = std::vector<IntegrandPiece>;

// Posterior-mean distribution G on [0,1], right-continuous, piecewise.
class PosteriorDistribution {
public:
    PosteriorDistribution(Prior prior, int n, std::vector<Segment> segments,
                          std::optional<Atom> atom = std::nullopt);

    static PosteriorDistribution full_disclosure(const Prior& prior, int n);
    static PosteriorDistribution point_mass(const Prior& prior, int n, double x);

    const Prior& prior() const { return prior_; }
    int n() const { return n_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::optional<Atom>& atom() const { return atom_; }

    double cdf(double v) const;
    double cdf_left(double v) const;
    // Smallest v with G(v) >= q.
    double quantile(double q) const;
    // Integral of G(v)^k dv over [lo, hi].
    double integral_cdf_power(double lo, double hi, double k) const;
    double integral_cdf(double lo, double hi) const { return integral_cdf_power(lo, hi, 1.0); }
    double mean() const { return 1.0 - integral_cdf(0.0, 1.0); }
    // Smallest v with G(v) = 1.
    double top() const;
    // Segment ends, atom, kinks where an affine-power piece reaches 1, prior knots.
    std::vector<double> breakpoints() const;

    // Integral of f dG over [0,1].
    double expect(const Integrand& f) const;
    double expect(const IntegrandPiece& f) const;

private:
    Prior prior_;
    int n_;
    std::vector<Segment> segments_;
    std::optional<Atom> atom_;

    std::size_t locate(double v) const;
    double continuous_part(const Segment& s, double x0, double x1, const IntegrandPiece& f) const;
};

double segment_value(const Segment& s, const Prior& prior, int n, double v);
double segment_start(const Segment& s);
double segment_end(const Segment& s);

} // namespace disclose
