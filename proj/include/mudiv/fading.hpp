#pragma once

#include <cmath>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

#include "numerics.hpp"
#include "random.hpp"

namespace mudiv {

enum class FadingKind { rayleigh, nakagami, rician };

/// Unit-mean channel-gain distribution, the law of |h|^2 for one user.
/// Rayleigh gain is Exp(1); Nakagami-m gain is Gamma(m, 1/m); Rician-K gain
/// is a noncentral chi-square scaled so E[gain] = 1.
struct FadingModel {
    FadingKind kind = FadingKind::rayleigh;
    double m = 1.0; // Nakagami shape
    double k = 0.0; // Rician power ratio

    static FadingModel rayleigh() { return {}; }

    static FadingModel nakagami(double m) {
        if (!(m >= 0.5)) throw std::domain_error("FadingModel: Nakagami m must be >= 0.5");
        return {FadingKind::nakagami, m, 0.0};
    }

    static FadingModel rician(double k) {
        if (!(k >= 0.0)) throw std::domain_error("FadingModel: Rician K must be >= 0");
        return {FadingKind::rician, 1.0, k};
    }
};

inline double gain_cdf(const FadingModel& model, double x) {
    if (x < 0.0) throw std::domain_error("gain_cdf: x must be >= 0");
    switch (model.kind) {
    case FadingKind::rayleigh:
        return -std::expm1(-x);
    case FadingKind::nakagami:
        return regularized_gamma_p(model.m, model.m * x);
    case FadingKind::rician:
        return 1.0 - marcum_q1(std::sqrt(2.0 * model.k),
                               std::sqrt(2.0 * (1.0 + model.k) * x));
    }
    return 0.0;
}

inline double gain_pdf(const FadingModel& model, double x) {
    if (x < 0.0) throw std::domain_error("gain_pdf: x must be >= 0");
    switch (model.kind) {
    case FadingKind::rayleigh:
        return std::exp(-x);
    case FadingKind::nakagami: {
        const double m = model.m;
        if (x == 0.0) {
            if (m > 1.0) return 0.0;
            if (m == 1.0) return 1.0;
            return std::numeric_limits<double>::infinity();
        }
        return std::exp(m * std::log(m) + (m - 1.0) * std::log(x) - m * x - std::lgamma(m));
    }
    case FadingKind::rician: {
        const double kk = model.k;
        const double z = 2.0 * std::sqrt(kk * (1.0 + kk) * x);
        return (1.0 + kk) * detail::bessel_i0_scaled(z) *
               std::exp(z - kk - (1.0 + kk) * x);
    }
    }
    return 0.0;
}

/// Smallest x with gain_cdf(x) >= p. Closed form for Rayleigh, safeguarded
/// Newton elsewhere.
inline double gain_quantile(const FadingModel& model, double p) {
    if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("gain_quantile: p must be in [0,1)");
    if (p == 0.0) return 0.0;
    if (model.kind == FadingKind::rayleigh) return -std::log1p(-p);

    double lo = 0.0, hi = 1.0;
    while (gain_cdf(model, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("gain_quantile: bracket search failed");
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double c = gain_cdf(model, x);
        if (c >= p)
            hi = x;
        else
            lo = x;
        const double d = gain_pdf(model, x);
        double step = (d > 0.0 && std::isfinite(d)) ? (c - p) / d : 0.0;
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi); // fall back to bisection
        if (std::fabs(next - x) <= 1e-14 * std::max(1.0, std::fabs(x)) && it > 3) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

inline double sample_gain(const FadingModel& model, Rng& rng) {
    switch (model.kind) {
    case FadingKind::rayleigh:
        return rng.exponential();
    case FadingKind::nakagami:
        return rng.gamma(model.m) / model.m;
    case FadingKind::rician: {
        const double nu = std::sqrt(model.k / (1.0 + model.k));
        const double sigma = std::sqrt(0.5 / (1.0 + model.k));
        const double re = nu + sigma * rng.normal();
        const double im = sigma * rng.normal();
        return re * re + im * im;
    }
    }
    return 0.0;
}

/// Regular-variation exponent d of the gain CDF at 0: cdf(x) ~ x^d l(x).
inline double rv_exponent(const FadingModel& model) {
    return model.kind == FadingKind::nakagami ? model.m : 1.0;
}

namespace detail {

inline double parse_double(std::string_view s, const char* what) {
    double v = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument(std::string("cannot parse ") + what + " from '" +
                                    std::string(s) + "'");
    return v;
}

// accepts "<value>" or "<key>=<value>" with the given expected key
inline double parse_param(std::string_view s, std::string_view key, const char* what) {
    if (auto eq = s.find('='); eq != std::string_view::npos) {
        if (s.substr(0, eq) != key)
            throw std::invalid_argument(std::string("expected parameter '") + std::string(key) +
                                        "' in '" + std::string(s) + "'");
        s = s.substr(eq + 1);
    }
    return parse_double(s, what);
}

} // namespace detail

/// Text forms: `rayleigh`, `nakagami:m=<v>`, `rician:k=<v>`.
inline FadingModel parse_fading(std::string_view text) {
    const auto colon = text.find(':');
    const auto name = text.substr(0, colon);
    const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (name == "rayleigh") {
        if (!rest.empty()) throw std::invalid_argument("rayleigh takes no parameters");
        return FadingModel::rayleigh();
    }
    if (name == "nakagami")
        return FadingModel::nakagami(detail::parse_param(rest, "m", "Nakagami m"));
    if (name == "rician")
        return FadingModel::rician(detail::parse_param(rest, "k", "Rician K"));
    throw std::invalid_argument("unknown fading model '" + std::string(text) + "'");
}

inline std::string to_string(const FadingModel& model) {
    switch (model.kind) {
    case FadingKind::rayleigh:
        return "rayleigh";
    case FadingKind::nakagami:
        return "nakagami:m=" + std::to_string(model.m);
    case FadingKind::rician:
        return "rician:k=" + std::to_string(model.k);
    }
    return {};
}

} // namespace mudiv
