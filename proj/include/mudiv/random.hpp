#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mudiv {

namespace detail {

inline std::uint32_t philox_mulhi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
}

/// One Philox4x32-10 block (Salmon et al. 2011).
inline void philox4x32_10(const std::uint32_t ctr[4], const std::uint32_t key[2],
                          std::uint32_t out[4]) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t x0 = ctr[0], x1 = ctr[1], x2 = ctr[2], x3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        const std::uint32_t hi0 = philox_mulhi(M0, x0), lo0 = M0 * x0;
        const std::uint32_t hi1 = philox_mulhi(M1, x2), lo1 = M1 * x2;
        const std::uint32_t y0 = hi1 ^ x1 ^ k0;
        const std::uint32_t y2 = hi0 ^ x3 ^ k1;
        x0 = y0;
        x1 = lo1;
        x2 = y2;
        x3 = lo0;
        k0 += W0;
        k1 += W1;
    }
    out[0] = x0;
    out[1] = x1;
    out[2] = x2;
    out[3] = x3;
}

} // namespace detail

/// Philox4x32-10 counter-based generator. A (seed, stream) pair names an
/// independent substream; draws within a stream come from an incrementing
/// counter, so parallel workers can own disjoint streams and still produce
/// bit-identical merged results in stream order.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            detail::philox4x32_10(ctr_, key_, out_);
            if (++ctr_[0] == 0) ++ctr_[1]; // 64-bit draw counter within the stream
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    double exponential() { return -std::log(uniform()); }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(2.0 * exponential());
        const double th = 2.0 * M_PI * uniform();
        cached_ = r * std::sin(th);
        have_cached_ = true;
        return r * std::cos(th);
    }

    /// Gamma(shape, scale 1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::domain_error("Rng::gamma: shape must be > 0");
        if (shape < 1.0)
            return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Poisson(lambda): inversion by search for small means, Hormann's PTRS
    /// transformed rejection otherwise. Both are exact samplers.
    std::uint64_t poisson(double lambda) {
        if (!(lambda >= 0.0)) throw std::domain_error("Rng::poisson: lambda must be >= 0");
        if (lambda == 0.0) return 0;
        if (lambda <= 30.0) {
            const double l = std::exp(-lambda);
            double p = 1.0;
            std::uint64_t k = 0;
            do {
                ++k;
                p *= uniform();
            } while (p > l);
            return k - 1;
        }
        const double slam = std::sqrt(lambda);
        const double loglam = std::log(lambda);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform() - 0.5;
            const double v = uniform();
            const double us = 0.5 - std::fabs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
            if (lhs <= kf * loglam - lambda - std::lgamma(kf + 1.0))
                return static_cast<std::uint64_t>(kf);
        }
    }

private:
    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int idx_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace mudiv
