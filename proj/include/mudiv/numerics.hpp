#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mudiv {

/// Thrown when adaptive quadrature cannot meet the requested tolerances.
class quadrature_error : public std::runtime_error {
public:
    explicit quadrature_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
};

namespace detail {

inline void validate(const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0))
        throw std::domain_error("QuadratureSpec: rel_tol must be > 0");
    if (!(spec.abs_tol >= 0.0))
        throw std::domain_error("QuadratureSpec: abs_tol must be >= 0");
    if (spec.max_subdivisions < 1)
        throw std::domain_error("QuadratureSpec: max_subdivisions must be >= 1");
}

// Gauss7/Kronrod15 node-weight table on [-1,1]: {abscissa, gauss weight, kronrod weight}.
// All nodes are interior, so integrable endpoint singularities are never evaluated.
inline constexpr double gk15_nodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

template <class Func>
double gk15(const Func& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double y0 = f(mid);
    double g7 = gk15_nodes[0][1] * y0;
    double k15 = gk15_nodes[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk15_nodes[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += gk15_nodes[i][1] * yi;
        k15 += gk15_nodes[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;
    err = std::fabs(g7 - k15);
    return k15;
}

struct Segment {
    double a, b, value, err;
};

// Globally adaptive GK15 on a finite interval: repeatedly bisect the segment
// with the largest error estimate (lowest index on ties, so runs are
// deterministic for identical inputs).
template <class Func>
double adaptive_gk15(const Func& f, double a, double b, const QuadratureSpec& spec) {
    validate(spec);
    std::vector<Segment> segs;
    segs.reserve(64);
    Segment s0;
    s0.a = a;
    s0.b = b;
    s0.value = gk15(f, a, b, s0.err);
    segs.push_back(s0);

    for (int split = 0; split < spec.max_subdivisions; ++split) {
        double total = 0.0, total_err = 0.0, comp = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            // Neumaier-compensated value sum
            double t = total + segs[i].value;
            if (std::fabs(total) >= std::fabs(segs[i].value))
                comp += (total - t) + segs[i].value;
            else
                comp += (segs[i].value - t) + total;
            total = t;
            total_err += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        total += comp;
        if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)))
            return total;

        Segment& w = segs[worst];
        const double m = 0.5 * (w.a + w.b);
        if (m <= w.a || m >= w.b) {
            // interval no longer splittable in double precision; freeze it
            w.err = 0.0;
            continue;
        }
        Segment left, right;
        left.a = w.a;
        left.b = m;
        right.a = m;
        right.b = w.b;
        left.value = gk15(f, left.a, left.b, left.err);
        right.value = gk15(f, right.a, right.b, right.err);
        w = left;
        segs.push_back(right);
    }
    throw quadrature_error("adaptive quadrature: tolerance not reached after " +
                           std::to_string(spec.max_subdivisions) + " subdivisions");
}

} // namespace detail

/// Adaptive integral of f over the finite interval [a, b].
inline double integrate_interval(const std::function<double(double)>& f, double a, double b,
                                 const QuadratureSpec& spec = {}) {
    if (!(a < b)) return 0.0;
    return detail::adaptive_gk15(f, a, b, spec);
}

/// Integral of f over (0, inf) via the substitution x = t/(1-t) onto (0,1).
/// Nodes never touch the endpoints, so f is only evaluated at finite x > 0.
inline double integrate_semi_infinite(const std::function<double(double)>& f,
                                      const QuadratureSpec& spec = {}) {
    auto g = [&f](double t) {
        const double om = 1.0 - t;
        const double x = t / om;
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx / (om * om);
    };
    return detail::adaptive_gk15(g, 0.0, 1.0, spec);
}

namespace detail {

// Regularized lower incomplete gamma P(s,x) by series (x < s+1) and by the
// Lentz continued fraction for Q(s,x) otherwise. The split keeps ~1e-15
// relative accuracy across the whole first quadrant.
inline double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

inline double gamma_q_contfrac(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

} // namespace detail

/// Regularized lower incomplete gamma P(s,x) = gamma(s,x)/Gamma(s).
inline double regularized_gamma_p(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("regularized_gamma_p: s must be > 0");
    if (x < 0.0) throw std::domain_error("regularized_gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return detail::gamma_p_series(s, x);
    return 1.0 - detail::gamma_q_contfrac(s, x);
}

/// Regularized upper incomplete gamma Q(s,x) = Gamma(s,x)/Gamma(s).
inline double regularized_gamma_q(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("regularized_gamma_q: s must be > 0");
    if (x < 0.0) throw std::domain_error("regularized_gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - detail::gamma_p_series(s, x);
    return detail::gamma_q_contfrac(s, x);
}

/// Lower incomplete gamma gamma(s,x) = int_0^x t^(s-1) e^(-t) dt.
inline double lower_incomplete_gamma(double s, double x) {
    return regularized_gamma_p(s, x) * std::tgamma(s);
}

/// Upper incomplete gamma Gamma(s,x) = Gamma(s) - gamma(s,x).
inline double upper_incomplete_gamma(double s, double x) {
    return regularized_gamma_q(s, x) * std::tgamma(s);
}

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
inline double gaussian_q(double x) {
    return 0.5 * std::erfc(x * 0.70710678118654752440);
}

namespace detail {

// I0(z)*exp(-z). Power series below z=20 (all terms positive, no
// cancellation), asymptotic expansion above.
inline double bessel_i0_scaled(double z) {
    if (z < 0.0) z = -z;
    if (z == 0.0) return 1.0;
    if (z <= 20.0) {
        const double q = 0.25 * z * z;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-z);
    }
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 40; ++k) {
        const double num = 2.0 * k - 1.0;
        term *= num * num / (8.0 * k * z);
        if (term >= prev) break; // asymptotic series started diverging
        sum += term;
        prev = term;
        if (term < sum * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * M_PI * z);
}

} // namespace detail

/// First-order Marcum Q: Q1(a,b) = P[noncentral chi^2(2, a^2) > b^2],
/// computed as a Poisson mixture of Erlang tail probabilities.
inline double marcum_q1(double a, double b) {
    if (a < 0.0 || b < 0.0) throw std::domain_error("marcum_q1: arguments must be >= 0");
    if (b == 0.0) return 1.0;
    const double ha = 0.5 * a * a;
    const double hb = 0.5 * b * b;
    double w = std::exp(-ha);     // Poisson(ha) weight at k
    double e = std::exp(-hb);     // hb^k e^{-hb} / k!
    double surv = e;              // P[Erlang(k+1) > hb]
    double sum = w * surv;
    double wsum = w;
    for (int k = 1; k < 100000; ++k) {
        w *= ha / k;
        e *= hb / k;
        surv += e;
        sum += w * surv;
        wsum += w;
        if (1.0 - wsum < 1e-15 && k > ha) break;
    }
    if (sum < 0.0) return 0.0;
    if (sum > 1.0) return 1.0;
    return sum;
}

/// order-th forward difference of a sampled sequence; order 0 is the identity.
inline std::vector<double> forward_differences(std::span<const double> seq, int order) {
    if (order < 0) throw std::domain_error("forward_differences: order must be >= 0");
    if (seq.size() <= static_cast<std::size_t>(order))
        throw std::length_error("forward_differences: sequence length must exceed order");
    std::vector<double> out(seq.begin(), seq.end());
    for (int k = 0; k < order; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

} // namespace mudiv
