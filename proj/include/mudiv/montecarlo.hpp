#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "metrics.hpp"
#include "random.hpp"
#include "selection.hpp"

namespace mudiv {

struct SimConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 20260811;
    unsigned workers = 1;
};

struct SimResult {
    double mean = 0.0;
    double std_error = 0.0; // sample standard deviation / sqrt(trials)
    std::uint64_t trials = 0;
};

namespace detail {

inline constexpr std::uint64_t mc_block_size = 1u << 16;

inline void validate(const SimConfig& cfg) {
    if (cfg.trials < 1) throw std::domain_error("SimConfig: trials must be >= 1");
    if (cfg.workers < 1) throw std::domain_error("SimConfig: workers must be >= 1");
}

// Runs fn(block_index, rng, trials_in_block) over fixed-size trial blocks.
// Block b always uses substream (seed, b), and workers only race for block
// indices, so every per-block result is identical for any worker count.
template <class BlockFn>
void run_blocks(const SimConfig& cfg, BlockFn&& fn) {
    validate(cfg);
    const std::uint64_t nblocks = (cfg.trials + mc_block_size - 1) / mc_block_size;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, nblocks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks) return;
            const std::uint64_t begin = b * mc_block_size;
            const std::uint64_t count = std::min(mc_block_size, cfg.trials - begin);
            Rng rng(cfg.seed, b);
            fn(b, rng, count);
        }
    };
    if (workers == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct BlockMoments {
    double sum = 0.0;
    double sumsq = 0.0;
};

inline double neumaier_add(double& sum, double value, double& comp) {
    const double t = sum + value;
    if (std::fabs(sum) >= std::fabs(value))
        comp += (sum - t) + value;
    else
        comp += (value - t) + sum;
    sum = t;
    return t;
}

} // namespace detail

/// Mean and standard error of per_trial(rng) over cfg.trials i.i.d. draws.
/// Per-block moments are merged in block order with compensated summation,
/// so results are bit-identical for any worker count.
template <class PerTrial>
SimResult mc_mean(const SimConfig& cfg, PerTrial&& per_trial) {
    const std::uint64_t nblocks = (cfg.trials + detail::mc_block_size - 1) / detail::mc_block_size;
    std::vector<detail::BlockMoments> blocks(nblocks);
    detail::run_blocks(cfg, [&](std::uint64_t b, Rng& rng, std::uint64_t count) {
        double s = 0.0, sq = 0.0;
        for (std::uint64_t i = 0; i < count; ++i) {
            const double v = per_trial(rng);
            s += v;
            sq += v * v;
        }
        blocks[b] = {s, sq};
    });
    double sum = 0.0, csum = 0.0, sumsq = 0.0, csumsq = 0.0;
    for (const auto& blk : blocks) {
        detail::neumaier_add(sum, blk.sum, csum);
        detail::neumaier_add(sumsq, blk.sumsq, csumsq);
    }
    sum += csum;
    sumsq += csumsq;
    const double n = static_cast<double>(cfg.trials);
    const double mean = sum / n;
    double var = 0.0;
    if (cfg.trials > 1) var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), cfg.trials};
}

/// Fills out[i] with per_trial for trial i; layout is independent of workers.
template <class PerTrial>
void mc_collect(const SimConfig& cfg, PerTrial&& per_trial, std::vector<double>& out) {
    out.assign(cfg.trials, 0.0);
    detail::run_blocks(cfg, [&](std::uint64_t b, Rng& rng, std::uint64_t count) {
        const std::uint64_t begin = b * detail::mc_block_size;
        for (std::uint64_t i = 0; i < count; ++i) out[begin + i] = per_trial(rng);
    });
}

/// Semi-analytic error-rate estimate: the sample mean of Pe(rho gamma*), the
/// conditional error probability given the drawn best gain.
inline SimResult mc_error_rate(SnrPoint snr, const BestGainLaw& law, const ErrorModel& err,
                               const SimConfig& cfg) {
    return mc_mean(cfg, [&](Rng& rng) {
        return instantaneous_error(err, snr.rho * sample_best_gain(law, rng));
    });
}

/// Ergodic-capacity estimate: sample mean of log(1 + rho gamma*), in nats.
inline SimResult mc_capacity(SnrPoint snr, const BestGainLaw& law, const SimConfig& cfg) {
    return mc_mean(cfg, [&](Rng& rng) {
        return std::log1p(snr.rho * sample_best_gain(law, rng));
    });
}

/// Outage estimate: fraction of trials with best gain <= x.
inline SimResult mc_outage(double x, const BestGainLaw& law, const SimConfig& cfg) {
    if (x < 0.0) throw std::domain_error("mc_outage: x must be >= 0");
    return mc_mean(cfg, [&](Rng& rng) {
        return sample_best_gain(law, rng) <= x ? 1.0 : 0.0;
    });
}

/// Kolmogorov-Smirnov distance between the empirical CDF of the normalized
/// best gain (gamma* - b(lambda)) / a(lambda) under Poisson(lambda) users and
/// the Gumbel CDF exp(-e^-x).
inline double mc_gumbel_ks(double lambda, const FadingModel& fading, const SimConfig& cfg) {
    if (!(lambda > 1.0)) throw std::domain_error("mc_gumbel_ks: lambda must be > 1");
    const BestGainLaw law = make_best_gain_law(fading, UserCountModel::poisson(lambda));
    const GumbelConstants gc = gumbel_constants(fading, lambda);
    std::vector<double> samples;
    mc_collect(cfg, [&](Rng& rng) {
        return (sample_best_gain(law, rng) - gc.shift) / gc.scale;
    }, samples);
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double g = gumbel_cdf(samples[i]);
        ks = std::max(ks, std::max(g - static_cast<double>(i) / n,
                                   static_cast<double>(i + 1) / n - g));
    }
    return ks;
}

} // namespace mudiv
