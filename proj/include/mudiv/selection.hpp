#pragma once

#include <cmath>
#include <stdexcept>

#include "fading.hpp"
#include "random.hpp"
#include "usercount.hpp"

namespace mudiv {

/// Law of the selected (best) user's gain: CDF U_N(F(x)), of mixed type with
/// an atom of pmf(users, 0) at zero when empty contention rounds are possible.
struct BestGainLaw {
    FadingModel fading;
    UserCountModel users;
    double atom_at_zero = 0.0;
};

inline BestGainLaw make_best_gain_law(const FadingModel& fading, const UserCountModel& users) {
    return {fading, users, pmf(users, 0)};
}

/// Composed CDF of the best gain.
inline double best_cdf(const BestGainLaw& law, double x) {
    if (x < 0.0) throw std::domain_error("best_cdf: x must be >= 0");
    return pgf(law.users, gain_cdf(law.fading, x));
}

/// Absolutely continuous part of the best-gain law: U'(F(x)) f(x), x > 0.
inline double best_density(const BestGainLaw& law, double x) {
    if (!(x > 0.0)) throw std::domain_error("best_density: x must be > 0");
    return pgf_prime(law.users, gain_cdf(law.fading, x)) * gain_pdf(law.fading, x);
}

/// Outage probability for Poisson users: exp(-lambda (1 - F(x))).
inline double outage_poisson(double lambda, const FadingModel& fading, double x) {
    if (!(lambda > 0.0)) throw std::domain_error("outage_poisson: lambda must be > 0");
    if (x < 0.0) throw std::domain_error("outage_poisson: x must be >= 0");
    return std::exp(-lambda * (1.0 - gain_cdf(fading, x)));
}

struct GumbelConstants {
    double scale; // a(lambda) = 1 / (lambda f(b))
    double shift; // b(lambda) = F^{-1}(1 - 1/lambda)
};

/// Extreme-value normalization for the best gain at mean user count lambda.
inline GumbelConstants gumbel_constants(const FadingModel& fading, double lambda) {
    if (!(lambda > 1.0)) throw std::domain_error("gumbel_constants: lambda must be > 1");
    const double b = gain_quantile(fading, 1.0 - 1.0 / lambda);
    const double a = 1.0 / (lambda * gain_pdf(fading, b));
    return {a, b};
}

inline double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

/// Draw N ~ users, then the max of N i.i.d. gains (0 if N = 0). Above the
/// count threshold the max is drawn in O(1) as F^{-1}(u^{1/N}), the same law.
inline double sample_best_gain(const BestGainLaw& law, Rng& rng) {
    const std::uint64_t n = sample_count(law.users, rng);
    if (n == 0) return 0.0;
    if (n > 100000) {
        const double u = rng.uniform();
        const double p = std::exp(std::log(u) / static_cast<double>(n));
        return gain_quantile(law.fading, p);
    }
    double best = sample_gain(law.fading, rng);
    for (std::uint64_t i = 1; i < n; ++i) {
        const double g = sample_gain(law.fading, rng);
        if (g > best) best = g;
    }
    return best;
}

} // namespace mudiv
