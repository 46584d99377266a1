#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "metrics.hpp"

namespace mudiv {

/// Result of a discrete complete-monotonicity scan: (-1)^k Delta^k >= -tol
/// elementwise for k = 0..max_order_checked, with tol relative to the local
/// sequence magnitude.
struct CmReport {
    struct Violation {
        int order;
        std::size_t index;
        double magnitude; // normalized signed value (-1)^k Delta^k / scale
    };
    int max_order_checked = 0;
    double tolerance = 0.0;
    std::optional<Violation> first_violation;

    bool passed() const { return !first_violation.has_value(); }
};

inline CmReport check_cm(std::span<const double> seq, int max_order, double tol) {
    if (seq.size() <= static_cast<std::size_t>(max_order))
        throw std::length_error("check_cm: sequence length must exceed max_order");
    CmReport report;
    report.max_order_checked = max_order;
    report.tolerance = tol;
    std::vector<double> diff(seq.begin(), seq.end());
    for (int k = 0; k <= max_order; ++k) {
        if (k > 0) {
            for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
            diff.pop_back();
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < diff.size(); ++i) {
            double scale = 0.0;
            for (std::size_t j = i; j <= i + static_cast<std::size_t>(k); ++j)
                scale = std::max(scale, std::fabs(seq[j]));
            if (scale == 0.0) scale = std::numeric_limits<double>::min();
            const double normalized = sign * diff[i] / scale;
            if (normalized < -tol) {
                report.first_violation = CmReport::Violation{k, i, normalized};
                return report;
            }
        }
    }
    return report;
}

/// Complete monotonicity of the (discrete) derivative: check_cm applied to
/// the first-difference sequence.
inline CmReport check_cmd(std::span<const double> seq, int max_order, double tol) {
    if (seq.size() <= static_cast<std::size_t>(max_order) + 1)
        throw std::length_error("check_cmd: sequence length must exceed max_order + 1");
    std::vector<double> d1(seq.size() - 1);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) d1[i] = seq[i + 1] - seq[i];
    return check_cm(d1, max_order, tol);
}

enum class LtRelation { x_le_y, y_le_x, incomparable };

/// Grid verdict on Laplace-transform ordering via PGF dominance on [0,1].
/// X <=_Lt Y iff U_X(t) >= U_Y(t) everywhere; a grid pass is dominance
/// evidence at the recorded resolution, not a proof.
struct OrderingVerdict {
    LtRelation relation = LtRelation::incomparable;
    double max_violation = 0.0;
    int grid_size = 0;
};

inline OrderingVerdict lt_order_check(const UserCountModel& x, const UserCountModel& y,
                                      int grid = 1001, double tol = 1e-12) {
    if (grid < 11) throw std::domain_error("lt_order_check: grid must be >= 11");
    double viol_xy = 0.0; // how badly U_X >= U_Y fails
    double viol_yx = 0.0;
    for (int j = 0; j < grid; ++j) {
        const double t = static_cast<double>(j) / (grid - 1);
        const double ux = pgf(x, t);
        const double uy = pgf(y, t);
        viol_xy = std::max(viol_xy, uy - ux);
        viol_yx = std::max(viol_yx, ux - uy);
    }
    OrderingVerdict verdict;
    verdict.grid_size = grid;
    if (viol_xy <= tol) {
        verdict.relation = LtRelation::x_le_y;
        verdict.max_violation = viol_xy;
    } else if (viol_yx <= tol) {
        verdict.relation = LtRelation::y_le_x;
        verdict.max_violation = viol_yx;
    } else {
        verdict.relation = LtRelation::incomparable;
        verdict.max_violation = std::min(viol_xy, viol_yx);
    }
    return verdict;
}

/// Checks that an LT ordering of two user distributions propagates to the
/// metrics at every SNR in the grid: the LT-smaller population has the larger
/// error rate and the smaller capacity.
inline bool ordering_consequence_check(const UserCountModel& x, const UserCountModel& y,
                                       const FadingModel& fading, const ErrorModel& err,
                                       std::span<const SnrPoint> snr_grid) {
    const OrderingVerdict verdict = lt_order_check(x, y);
    if (verdict.relation == LtRelation::incomparable)
        throw std::invalid_argument("ordering_consequence_check: distributions are not LT ordered");
    const UserCountModel& lo = verdict.relation == LtRelation::x_le_y ? x : y;
    const UserCountModel& hi = verdict.relation == LtRelation::x_le_y ? y : x;
    for (const SnrPoint snr : snr_grid) {
        const double err_lo = avg_error_random_n(snr, lo, fading, err);
        const double err_hi = avg_error_random_n(snr, hi, fading, err);
        if (err_lo < err_hi - 1e-8 * std::max(err_lo, err_hi)) return false;
        const double cap_lo = ergodic_capacity_random_n(snr, lo, fading);
        const double cap_hi = ergodic_capacity_random_n(snr, hi, fading);
        if (cap_lo > cap_hi + 1e-8 * std::max(cap_lo, cap_hi)) return false;
    }
    return true;
}

/// Jensen gap E_N[Pe] - Pe(E[N]); nonnegative by convexity of the error rate
/// in the number of users. The fixed-N comparator uses the real-N quadrature.
inline double jensen_gap(SnrPoint snr, const UserCountModel& users, const FadingModel& fading,
                         const ErrorModel& err) {
    const double m = mean(users);
    if (!(m >= 1.0)) throw std::domain_error("jensen_gap: mean user count must be >= 1");
    return avg_error_random_n(snr, users, fading, err) - avg_error_fixed_n(snr, m, fading, err);
}

struct TightnessPoint {
    double lambda;
    double gap;
    double normalized_gap; // gap * lambda / Pe(rho, lambda)
};

/// Scans the Poisson Jensen gap over a lambda grid; the normalized gap stays
/// bounded when Pe is regularly varying, which is the tightness statement.
inline std::vector<TightnessPoint> jensen_tightness_scan(SnrPoint snr,
                                                         std::span<const double> lambdas,
                                                         const FadingModel& fading,
                                                         const ErrorModel& err) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 1.0))
            throw std::domain_error("jensen_tightness_scan: lambdas must be > 1");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw std::domain_error("jensen_tightness_scan: lambdas must be increasing");
    }
    std::vector<TightnessPoint> out;
    out.reserve(lambdas.size());
    for (const double lambda : lambdas) {
        const UserCountModel users = UserCountModel::poisson(lambda);
        const double gap = jensen_gap(snr, users, fading, err);
        const double fixed = avg_error_fixed_n(snr, lambda, fading, err);
        out.push_back({lambda, gap, gap * lambda / fixed});
    }
    return out;
}

/// Bernstein-measure density t(u) = rho B(rho F^{-1}(e^-u)) e^-u / f(F^{-1}(e^-u))
/// from the substitution u = -log F(x); its regular variation at u = 0
/// controls the tightness of the Poisson Jensen gap.
inline double t_function(double u, SnrPoint snr, const ErrorModel& err,
                         const FadingModel& fading) {
    if (!(u > 0.0)) throw std::domain_error("t_function: u must be > 0");
    const double eu = std::exp(-u);
    if (eu == 0.0) return 0.0;
    const double x = gain_quantile(fading, eu);
    return snr.rho * error_derivative_mag(err, snr.rho * x) * eu / gain_pdf(fading, x);
}

/// Estimates the regular-variation exponent of t at 0 from log t(ku)/t(u)
/// at u = 1e-3, 1e-4, 1e-5, extrapolating in 1/log(1/u) to strip the leading
/// slowly-varying correction.
inline double rv_exponent_estimate(const std::function<double(double)>& t_fn, double kappa) {
    if (!(kappa > 1.0)) throw std::domain_error("rv_exponent_estimate: kappa must be > 1");
    const double us[3] = {1e-3, 1e-4, 1e-5};
    double est[3], v[3];
    for (int i = 0; i < 3; ++i) {
        const double tu = t_fn(us[i]);
        const double tku = t_fn(kappa * us[i]);
        if (!(tu > 0.0) || !(tku > 0.0))
            throw std::runtime_error("rv_exponent_estimate: t(u) must be positive near 0");
        est[i] = std::log(tku / tu) / std::log(kappa);
        v[i] = 1.0 / (-std::log(us[i]));
    }
    if (std::fabs(est[1] - est[0]) > 0.05 || std::fabs(est[2] - est[1]) > 0.05)
        throw std::runtime_error("rv_exponent_estimate: estimates unstable across u scales");
    const double slope = (est[2] - est[1]) / (v[2] - v[1]);
    return est[2] - slope * v[2];
}

/// Least-squares slope of -log10(error) against log10(rho) restricted to a
/// dB window; the high-SNR limit of this slope is the diversity order.
inline double diversity_order_fit(std::span<const std::pair<double, double>> curve,
                                  std::pair<double, double> window_db) {
    std::vector<std::pair<double, double>> pts; // (log10 rho, -log10 err)
    for (const auto& [db, error] : curve) {
        if (db < window_db.first || db > window_db.second) continue;
        if (!(error > 0.0)) throw std::domain_error("diversity_order_fit: errors must be > 0");
        pts.emplace_back(db / 10.0, -std::log10(error));
    }
    if (pts.size() < 4)
        throw std::length_error("diversity_order_fit: need at least 4 points inside the window");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxy / sxx;
}

} // namespace mudiv
