#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fading.hpp" // detail::parse_param
#include "random.hpp"

namespace mudiv {

enum class UserCountKind { deterministic, poisson, geometric, zt_poisson };

/// Distribution of the random number of contending users.
/// Geometric counts failures before the first success (support {0,1,2,...}),
/// so its PGF is p/(1-(1-p)t). The zero-truncated Poisson is parameterized by
/// the underlying Poisson lambda; its mean lambda/(1-e^-lambda) is reported
/// by mean(), not used as the parameter.
struct UserCountModel {
    UserCountKind kind = UserCountKind::deterministic;
    double param = 1.0; // N, lambda, or p per kind

    static UserCountModel deterministic(std::uint64_t n) {
        return {UserCountKind::deterministic, static_cast<double>(n)};
    }
    static UserCountModel poisson(double lambda) {
        if (!(lambda > 0.0)) throw std::domain_error("UserCountModel: Poisson lambda must be > 0");
        return {UserCountKind::poisson, lambda};
    }
    static UserCountModel geometric(double p) {
        if (!(p > 0.0 && p <= 1.0))
            throw std::domain_error("UserCountModel: geometric p must be in (0,1]");
        return {UserCountKind::geometric, p};
    }
    static UserCountModel zt_poisson(double lambda) {
        if (!(lambda > 0.0))
            throw std::domain_error("UserCountModel: zero-truncated Poisson lambda must be > 0");
        return {UserCountKind::zt_poisson, lambda};
    }

    /// Zero-truncated Poisson with the given mean m >= 1: solves
    /// lambda / (1 - e^-lambda) = m for the underlying lambda.
    static UserCountModel zt_poisson_with_mean(double m) {
        if (!(m >= 1.0))
            throw std::domain_error("UserCountModel: zero-truncated Poisson mean must be >= 1");
        double lo = 1e-12, hi = std::max(m, 1e-9);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid / (-std::expm1(-mid)) < m)
                lo = mid;
            else
                hi = mid;
        }
        return zt_poisson(0.5 * (lo + hi));
    }
};

inline double pmf(const UserCountModel& model, std::uint64_t k) {
    const double kd = static_cast<double>(k);
    switch (model.kind) {
    case UserCountKind::deterministic:
        return kd == model.param ? 1.0 : 0.0;
    case UserCountKind::poisson:
        return std::exp(kd * std::log(model.param) - model.param - std::lgamma(kd + 1.0));
    case UserCountKind::geometric:
        return model.param * std::pow(1.0 - model.param, kd);
    case UserCountKind::zt_poisson: {
        if (k == 0) return 0.0;
        const double lam = model.param;
        return std::exp(kd * std::log(lam) - lam - std::lgamma(kd + 1.0)) /
               (-std::expm1(-lam));
    }
    }
    return 0.0;
}

/// PGF U(t) = E[t^N] on [0,1].
inline double pgf(const UserCountModel& model, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("pgf: t must be in [0,1]");
    switch (model.kind) {
    case UserCountKind::deterministic:
        return model.param == 0.0 ? 1.0 : std::pow(t, model.param);
    case UserCountKind::poisson:
        return std::exp(model.param * (t - 1.0));
    case UserCountKind::geometric:
        return model.param / (1.0 - (1.0 - model.param) * t);
    case UserCountKind::zt_poisson:
        return std::expm1(model.param * t) / std::expm1(model.param);
    }
    return 0.0;
}

/// dU/dt on [0,1]; this is the density weight of the composed best-gain CDF.
inline double pgf_prime(const UserCountModel& model, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("pgf_prime: t must be in [0,1]");
    switch (model.kind) {
    case UserCountKind::deterministic: {
        const double n = model.param;
        if (n == 0.0) return 0.0;
        if (n == 1.0) return 1.0;
        return n * std::pow(t, n - 1.0);
    }
    case UserCountKind::poisson:
        return model.param * std::exp(model.param * (t - 1.0));
    case UserCountKind::geometric: {
        const double q = 1.0 - model.param;
        const double den = 1.0 - q * t;
        return model.param * q / (den * den);
    }
    case UserCountKind::zt_poisson: {
        const double lam = model.param;
        return lam * std::exp(lam * (t - 1.0)) / (-std::expm1(-lam));
    }
    }
    return 0.0;
}

inline double mean(const UserCountModel& model) {
    switch (model.kind) {
    case UserCountKind::deterministic:
        return model.param;
    case UserCountKind::poisson:
        return model.param;
    case UserCountKind::geometric:
        return (1.0 - model.param) / model.param;
    case UserCountKind::zt_poisson:
        return model.param / (-std::expm1(-model.param));
    }
    return 0.0;
}

/// Smallest k with pmf(k) > 0; the k0 that sets the diversity order k0*d.
inline std::uint64_t min_support(const UserCountModel& model) {
    switch (model.kind) {
    case UserCountKind::deterministic:
        return static_cast<std::uint64_t>(model.param);
    case UserCountKind::poisson:
        return 0;
    case UserCountKind::geometric:
        return 0;
    case UserCountKind::zt_poisson:
        return 1;
    }
    return 0;
}

inline std::uint64_t sample_count(const UserCountModel& model, Rng& rng) {
    switch (model.kind) {
    case UserCountKind::deterministic:
        return static_cast<std::uint64_t>(model.param);
    case UserCountKind::poisson:
        return rng.poisson(model.param);
    case UserCountKind::geometric: {
        if (model.param == 1.0) return 0;
        const double u = rng.uniform();
        return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-model.param)));
    }
    case UserCountKind::zt_poisson: {
        const double lam = model.param;
        if (lam > 30.0) { // zero rejections are vanishingly rare here
            for (;;) {
                const std::uint64_t n = rng.poisson(lam);
                if (n > 0) return n;
            }
        }
        // conditional inversion: map u onto the Poisson CDF above P[N=0],
        // which stays O(1) even for tiny lambda
        const double p0 = std::exp(-lam);
        const double target = p0 + rng.uniform() * (1.0 - p0);
        double cum = p0, pk = p0;
        std::uint64_t k = 0;
        while (cum < target && k < 400) {
            ++k;
            pk *= lam / static_cast<double>(k);
            cum += pk;
        }
        return std::max<std::uint64_t>(k, 1);
    }
    }
    return 0;
}

/// Text forms: `det:<N>`, `poisson:<lambda>`, `geom:<p>` (or `geom:p=<p>`,
/// `geom:mean=<m>`), `ztpoisson:<lambda>`.
inline UserCountModel parse_usercount(std::string_view text) {
    const auto colon = text.find(':');
    const auto name = text.substr(0, colon);
    const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (name == "det") {
        const double n = detail::parse_param(rest, "n", "deterministic N");
        if (!(n >= 0.0) || n != std::floor(n))
            throw std::invalid_argument("det:<N> requires a non-negative integer");
        return UserCountModel::deterministic(static_cast<std::uint64_t>(n));
    }
    if (name == "poisson")
        return UserCountModel::poisson(detail::parse_param(rest, "lambda", "Poisson lambda"));
    if (name == "geom") {
        if (rest.substr(0, 5) == "mean=") {
            const double m = detail::parse_double(rest.substr(5), "geometric mean");
            if (!(m >= 0.0)) throw std::invalid_argument("geom:mean=<m> requires m >= 0");
            return UserCountModel::geometric(1.0 / (1.0 + m));
        }
        return UserCountModel::geometric(detail::parse_param(rest, "p", "geometric p"));
    }
    if (name == "ztpoisson")
        return UserCountModel::zt_poisson(
            detail::parse_param(rest, "lambda", "zero-truncated Poisson lambda"));
    throw std::invalid_argument("unknown user-count model '" + std::string(text) + "'");
}

inline std::string to_string(const UserCountModel& model) {
    switch (model.kind) {
    case UserCountKind::deterministic:
        return "det:" + std::to_string(static_cast<std::uint64_t>(model.param));
    case UserCountKind::poisson:
        return "poisson:" + std::to_string(model.param);
    case UserCountKind::geometric:
        return "geom:p=" + std::to_string(model.param);
    case UserCountKind::zt_poisson:
        return "ztpoisson:" + std::to_string(model.param);
    }
    return {};
}

} // namespace mudiv
