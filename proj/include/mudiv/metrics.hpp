#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "numerics.hpp"
#include "selection.hpp"

namespace mudiv {

/// Average received SNR, always linear inside the library. dB conversion is a
/// CLI-boundary concern.
struct SnrPoint {
    double rho;

    static SnrPoint from_db(double db) { return {std::pow(10.0, db / 10.0)}; }
    double db() const { return 10.0 * std::log10(rho); }
};

enum class ErrorForm { exponential, q_function };

/// Instantaneous error-rate model Pe(s) = alpha e^(-eta s) or
/// alpha Q(sqrt(eta s)); alpha and eta select the modulation.
struct ErrorModel {
    ErrorForm form = ErrorForm::exponential;
    double alpha = 1.0;
    double eta = 1.0;

    static ErrorModel exp_form(double alpha = 1.0, double eta = 1.0) {
        if (!(alpha > 0.0 && eta > 0.0))
            throw std::domain_error("ErrorModel: alpha and eta must be > 0");
        return {ErrorForm::exponential, alpha, eta};
    }
    static ErrorModel q_form(double alpha = 1.0, double eta = 2.0) {
        if (!(alpha > 0.0 && eta > 0.0))
            throw std::domain_error("ErrorModel: alpha and eta must be > 0");
        return {ErrorForm::q_function, alpha, eta};
    }

    /// Pe(0), the level an empty contention round contributes.
    double error_at_zero_snr() const {
        return form == ErrorForm::exponential ? alpha : 0.5 * alpha;
    }
};

/// Pe(s) at instantaneous SNR s, clamped at 1 from above only.
inline double instantaneous_error(const ErrorModel& model, double s) {
    if (s < 0.0) throw std::domain_error("instantaneous_error: s must be >= 0");
    const double v = model.form == ErrorForm::exponential
                         ? model.alpha * std::exp(-model.eta * s)
                         : model.alpha * gaussian_q(std::sqrt(model.eta * s));
    return v > 1.0 ? 1.0 : v;
}

/// B(s) = -dPe/ds.
inline double error_derivative_mag(const ErrorModel& model, double s) {
    if (!(s > 0.0)) throw std::domain_error("error_derivative_mag: s must be > 0");
    if (model.form == ErrorForm::exponential)
        return model.alpha * model.eta * std::exp(-model.eta * s);
    return 0.5 * model.alpha * std::sqrt(model.eta / (2.0 * M_PI * s)) *
           std::exp(-0.5 * model.eta * s);
}

namespace detail {

inline const QuadratureSpec& metric_quadrature() {
    // abs_tol 0 keeps the stopping rule scale-free; high-SNR error rates live
    // many decades below 1.
    static const QuadratureSpec spec{1e-11, 0.0, 2000};
    return spec;
}

// rho * integral_0^xmax numerator(x) / (1 + rho x) dx with the upper cutoff
// located by doubling search from log(1+mean)+10; the integrand support grows
// like log(mean).
inline double capacity_quadrature(double rho, const std::function<double(double)>& numerator,
                                  double mean_hint) {
    double xmax = std::log1p(std::max(mean_hint, 0.0)) + 10.0;
    while (numerator(xmax) >= 1e-14 && xmax < 1e9) xmax *= 2.0;
    auto integrand = [&](double x) {
        const double n = numerator(x);
        if (n == 0.0) return 0.0;
        return rho * n / (1.0 + rho * x);
    };
    return integrate_interval(integrand, 0.0, xmax, metric_quadrature());
}

} // namespace detail

/// Error rate averaged over fading for n selected-from users (Stieltjes
/// integral of Pe against F^n). n may be real; the integer case is the
/// physical one.
inline double avg_error_fixed_n(SnrPoint snr, double n, const FadingModel& fading,
                                const ErrorModel& err) {
    if (!(n >= 1.0)) throw std::domain_error("avg_error_fixed_n: n must be >= 1");
    if (!(snr.rho > 0.0)) throw std::domain_error("avg_error_fixed_n: rho must be > 0");
    auto integrand = [&](double x) {
        const double f = gain_pdf(fading, x);
        if (f == 0.0) return 0.0;
        const double F = gain_cdf(fading, x);
        const double w = n == 1.0 ? 1.0 : n * std::pow(F, n - 1.0);
        if (w == 0.0) return 0.0;
        return instantaneous_error(err, snr.rho * x) * w * f;
    };
    return integrate_semi_infinite(integrand, detail::metric_quadrature());
}

/// Error rate averaged over fading and the user distribution:
/// pmf(0) Pe(0) + integral of Pe(rho x) U'(F(x)) f(x).
inline double avg_error_random_n(SnrPoint snr, const UserCountModel& users,
                                 const FadingModel& fading, const ErrorModel& err) {
    if (!(snr.rho > 0.0)) throw std::domain_error("avg_error_random_n: rho must be > 0");
    const double atom = pmf(users, 0) * err.error_at_zero_snr();
    auto integrand = [&](double x) {
        const double f = gain_pdf(fading, x);
        if (f == 0.0) return 0.0;
        const double w = pgf_prime(users, gain_cdf(fading, x));
        if (w == 0.0) return 0.0;
        return instantaneous_error(err, snr.rho * x) * w * f;
    };
    return atom + integrate_semi_infinite(integrand, detail::metric_quadrature());
}

/// Closed form for Poisson users + Rayleigh fading + exponential error model:
/// alpha lambda^(-eta rho) gamma(eta rho + 1, lambda) + alpha e^(-lambda).
/// The gamma product is evaluated as a joint series so that high eta*rho
/// (deep high-SNR regime) stays inside double range.
inline double poisson_rayleigh_error_closed(SnrPoint snr, double lambda, const ErrorModel& err) {
    if (err.form != ErrorForm::exponential)
        throw std::invalid_argument(
            "poisson_rayleigh_error_closed: requires the exponential error form");
    if (!(lambda > 0.0)) throw std::domain_error("poisson_rayleigh_error_closed: lambda > 0");
    if (!(snr.rho > 0.0)) throw std::domain_error("poisson_rayleigh_error_closed: rho > 0");
    const double er = err.eta * snr.rho;
    const double s = er + 1.0;
    double scaled; // lambda^(-eta rho) gamma(eta rho + 1, lambda)
    if (lambda < s + 1.0) {
        // lambda^(-er) gamma(s, lambda) = lambda e^-lambda sum_n lambda^n / prod_{j<=n}(s+j)
        double term = 1.0 / s;
        double sum = term;
        for (int n = 1; n < 10000; ++n) {
            term *= lambda / (s + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        scaled = lambda * std::exp(-lambda) * sum;
    } else {
        scaled = regularized_gamma_p(s, lambda) *
                 std::exp(std::lgamma(s) - er * std::log(lambda));
    }
    return err.alpha * scaled + err.alpha * std::exp(-lambda);
}

/// Ergodic capacity (nats) for n selected-from users:
/// rho * integral (1 - F^n(x)) / (1 + rho x) dx.
inline double ergodic_capacity_fixed_n(SnrPoint snr, double n, const FadingModel& fading) {
    if (!(n >= 1.0)) throw std::domain_error("ergodic_capacity_fixed_n: n must be >= 1");
    if (!(snr.rho > 0.0)) throw std::domain_error("ergodic_capacity_fixed_n: rho must be > 0");
    auto numerator = [&](double x) {
        const double F = gain_cdf(fading, x);
        if (F >= 1.0) return 0.0;
        if (F == 0.0) return 1.0;
        return -std::expm1(n * std::log(F));
    };
    return detail::capacity_quadrature(snr.rho, numerator, n);
}

/// Ergodic capacity averaged over the user distribution:
/// rho * integral (1 - U(F(x))) / (1 + rho x) dx (an N = 0 round contributes 0).
inline double ergodic_capacity_random_n(SnrPoint snr, const UserCountModel& users,
                                        const FadingModel& fading) {
    if (!(snr.rho > 0.0)) throw std::domain_error("ergodic_capacity_random_n: rho must be > 0");
    auto numerator = [&](double x) { return 1.0 - pgf(users, gain_cdf(fading, x)); };
    return detail::capacity_quadrature(snr.rho, numerator, mean(users));
}

/// High-SNR error-rate asymptote P[N=k0] C1 F^k0(C2 / rho) with the constants
/// of the two error forms; the decay exponent in rho is the diversity order
/// k0 * d.
inline double high_snr_asymptote(SnrPoint snr, const UserCountModel& users,
                                 const FadingModel& fading, const ErrorModel& err) {
    if (!(snr.rho > 0.0)) throw std::domain_error("high_snr_asymptote: rho must be > 0");
    const std::uint64_t k0 = min_support(users);
    const double d = rv_exponent(fading);
    const double k0d = static_cast<double>(k0) * d;
    double c1, c2;
    if (err.form == ErrorForm::exponential) {
        c1 = err.alpha * std::tgamma(k0d + 1.0);
        c2 = 1.0 / err.eta;
    } else {
        c1 = err.alpha * std::tgamma(k0d + 0.5) / (2.0 * std::sqrt(M_PI));
        c2 = 2.0 / err.eta;
    }
    const double Fk0 = k0 == 0 ? 1.0 : std::pow(gain_cdf(fading, c2 / snr.rho),
                                                static_cast<double>(k0));
    return pmf(users, k0) * c1 * Fk0;
}

/// Leading capacity-scaling term log(1 + rho log(lambda)) for Poisson users
/// over Rayleigh fading; the remainder is O(1/sqrt(log lambda)).
inline double capacity_scaling(SnrPoint snr, double lambda) {
    if (!(lambda > 1.0)) throw std::domain_error("capacity_scaling: lambda must be > 1");
    if (!(snr.rho > 0.0)) throw std::domain_error("capacity_scaling: rho must be > 0");
    return std::log1p(snr.rho * std::log(lambda));
}

/// Text forms: `exp:a=<alpha>,eta=<eta>`, `qf:a=<alpha>,eta=<eta>`; omitted
/// parameters fall back to the form defaults (exp: a=1,eta=1; qf: a=1,eta=2).
inline ErrorModel parse_error_model(std::string_view text) {
    const auto colon = text.find(':');
    const auto name = text.substr(0, colon);
    auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    ErrorModel model;
    if (name == "exp")
        model = ErrorModel::exp_form();
    else if (name == "qf")
        model = ErrorModel::q_form();
    else
        throw std::invalid_argument("unknown error model '" + std::string(text) + "'");
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("error model parameters must be key=value");
        const auto key = item.substr(0, eq);
        const double value = detail::parse_double(item.substr(eq + 1), "error model parameter");
        if (key == "a")
            model.alpha = value;
        else if (key == "eta")
            model.eta = value;
        else
            throw std::invalid_argument("unknown error model parameter '" + std::string(key) + "'");
    }
    if (!(model.alpha > 0.0 && model.eta > 0.0))
        throw std::invalid_argument("error model requires a > 0 and eta > 0");
    return model;
}

inline std::string to_string(const ErrorModel& model) {
    const char* name = model.form == ErrorForm::exponential ? "exp" : "qf";
    return std::string(name) + ":a=" + std::to_string(model.alpha) +
           ",eta=" + std::to_string(model.eta);
}

} // namespace mudiv
