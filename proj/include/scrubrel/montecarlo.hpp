#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "scrubrel/config.hpp"
#include "scrubrel/markov.hpp"
#include "scrubrel/models.hpp"
#include "scrubrel/rng.hpp"

namespace scrubrel {

/// Confidence half-widths use the normal approximation with z = 3; at the
/// trial counts used here exact binomial bounds change nothing.
inline constexpr double kCiZ = 3.0;

enum class SimLevel { State, Bit };

inline std::string_view to_string(SimLevel l) {
    return l == SimLevel::State ? "state" : "bit";
}

struct SimConfig {
    std::int64_t trials = 0;
    double horizon_days = 0.0;
    std::uint64_t seed = 0;
    SimLevel level = SimLevel::State;
    ScrubConfig scrub;
    std::vector<double> sample_times_days; ///< defaults to 5 even checkpoints
    int threads = 0;                       ///< 0 = hardware concurrency
    bool collect_failure_times = false;

    void validate() const {
        if (trials < 1) throw ValidationError("simulation requires trials >= 1");
        if (!(horizon_days > 0.0)) throw ValidationError("simulation requires horizon > 0");
        scrub.validate();
        double prev = 0.0;
        for (double t : sample_times_days) {
            if (!(t > 0.0) || t > horizon_days || t < prev)
                throw ValidationError("sample times must be ascending and within (0, horizon]");
            prev = t;
        }
    }
};

struct SurvivalEstimate {
    std::vector<double> times;
    std::vector<double> survival;
    std::vector<double> ci_halfwidth;
    std::int64_t trials = 0;
    std::int64_t observed_failures = 0;
    /// No failures observed: the CIs carry no information; increase
    /// lambda, the horizon, or the trial count.
    bool degenerate_ci = false;
    std::vector<double> failure_time_samples; ///< finite times, when collected
};

struct SystemMttfEstimate {
    MttfResult result;           ///< point = sample mean; bounds = mean -+ z*se
    double standard_error = 0.0;
    std::int64_t trials = 0;
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimContext {
    WordChain chain;
    bool periodic = false;
    double period_days = 0.0; ///< meaningful when periodic
    double mu_day = 0.0;      ///< access-scrub rate (0 for deterministic)
};

inline SimContext make_context(const ScrubConfig& scrub) {
    SimContext ctx;
    const CanonicalRates rates = canonicalize(scrub);
    ctx.chain = build_chain(scrub.model, rates);
    ctx.periodic = scrub.model != Model::Probabilistic;
    if (ctx.periodic) ctx.period_days = *rates.period_days;
    if (scrub.model != Model::Deterministic) ctx.mu_day = *rates.mu_day;
    return ctx;
}

// A walk can be cut off at a cap and resumed later with a larger one.
// Cut-offs only ever happen in the error-free state (a pending error is
// always resolved first), and overshooting an exponential waiting time is
// again exponential, so saving the clock alone is exact.
struct Walk {
    double t = 0.0;
    int bad_bit = -1; ///< state level uses -1 / 0 as clean / erroneous
};

// One word walked at chain level until absorption or the cap.  While error
// free, scrubs and sweep boundaries are no-ops, so only the next upset is
// drawn; with one error pending, the recovery upset, the fatal upset, and
// (if periodic) the next sweep compete.  Returns the absorption time
// (which may land past the cap when the final episode straddles it) or
// infinity when the walk passes the cap unabsorbed.
inline double run_word_state(Rng& rng, const SimContext& ctx, double cap, Walk& walk) {
    while (walk.t < cap) {
        if (walk.bad_bit < 0) {
            const double next_upset = walk.t + rng.exponential(ctx.chain.upset_rate());
            if (next_upset >= cap) return kInf; // still clean at the cap
            walk.t = next_upset;
            walk.bad_bit = 0;
        } else {
            const double to_recovery = rng.exponential(ctx.chain.recovery_rate);
            const double to_fatal = rng.exponential(ctx.chain.fatal_rate());
            if (ctx.periodic) {
                const double boundary =
                    (std::floor(walk.t / ctx.period_days) + 1.0) * ctx.period_days;
                if (std::min(to_recovery, to_fatal) >= boundary - walk.t) {
                    walk.t = boundary;
                    walk.bad_bit = -1;
                    continue;
                }
            }
            if (to_fatal < to_recovery) return walk.t + to_fatal;
            walk.t += to_recovery;
            walk.bad_bit = -1;
        }
    }
    return kInf;
}

// The same word walked bit by bit: every bit toggles at rate lambda (a
// second upset on a faulty bit restores it), an access scrub or a sweep
// rewrites the word and clears its single faulty bit, and the word dies
// the instant two bits are faulty at once.
inline double run_word_bits(Rng& rng, const SimContext& ctx, double cap, Walk& walk) {
    const double lam = ctx.chain.lambda_day;
    const std::uint32_t n = static_cast<std::uint32_t>(ctx.chain.n);
    while (walk.t < cap) {
        if (walk.bad_bit < 0) {
            const double next_upset = walk.t + rng.exponential(lam * n);
            if (next_upset >= cap) return kInf;
            walk.t = next_upset;
            walk.bad_bit = static_cast<int>(rng.uniform_below(n));
        } else {
            const double to_upset = rng.exponential(lam * n);
            const double to_scrub = rng.exponential(ctx.mu_day);
            if (ctx.periodic) {
                const double boundary =
                    (std::floor(walk.t / ctx.period_days) + 1.0) * ctx.period_days;
                if (std::min(to_upset, to_scrub) >= boundary - walk.t) {
                    walk.t = boundary;
                    walk.bad_bit = -1;
                    continue;
                }
            }
            if (to_scrub < to_upset) {
                walk.t += to_scrub;
                walk.bad_bit = -1;
                continue;
            }
            walk.t += to_upset;
            const int hit = static_cast<int>(rng.uniform_below(n));
            if (hit == walk.bad_bit)
                walk.bad_bit = -1;  // restoring upset on the faulty bit
            else
                return walk.t;      // two faulty bits co-exist
        }
    }
    return kInf;
}

inline double run_word(SimLevel level, Rng& rng, const SimContext& ctx, double cap, Walk& walk) {
    return level == SimLevel::State ? run_word_state(rng, ctx, cap, walk)
                                    : run_word_bits(rng, ctx, cap, walk);
}

template <class PerTrial>
void parallel_trials(std::int64_t trials, int threads, PerTrial&& body) {
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    if (trials < 2048) nthreads = 1;
    if (nthreads == 1) {
        for (std::int64_t i = 0; i < trials; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    const std::int64_t chunk = (trials + nthreads - 1) / nthreads;
    for (int k = 0; k < nthreads; ++k) {
        const std::int64_t lo = k * chunk;
        const std::int64_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline SurvivalEstimate aggregate_survival(const SimConfig& cfg,
                                           std::vector<double>&& failure_times) {
    std::vector<double> times = cfg.sample_times_days;
    if (times.empty())
        for (int k = 1; k <= 5; ++k) times.push_back(cfg.horizon_days * k / 5.0);

    std::vector<double> finite;
    finite.reserve(failure_times.size());
    for (double ft : failure_times)
        if (ft <= cfg.horizon_days) finite.push_back(ft);
    std::sort(finite.begin(), finite.end());

    SurvivalEstimate est;
    est.times = times;
    est.trials = cfg.trials;
    est.observed_failures = static_cast<std::int64_t>(finite.size());
    est.degenerate_ci = finite.empty();
    const double trials = static_cast<double>(cfg.trials);
    for (double tau : times) {
        const auto failed =
            std::upper_bound(finite.begin(), finite.end(), tau) - finite.begin();
        const double p = 1.0 - static_cast<double>(failed) / trials;
        est.survival.push_back(p);
        est.ci_halfwidth.push_back(kCiZ * std::sqrt(p * (1.0 - p) / trials));
    }
    if (cfg.collect_failure_times) est.failure_time_samples = std::move(finite);
    return est;
}

inline SurvivalEstimate simulate_word_level(const SimConfig& cfg, SimLevel level) {
    cfg.validate();
    const SimContext ctx = make_context(cfg.scrub);
    std::vector<double> failure_times(static_cast<std::size_t>(cfg.trials));
    parallel_trials(cfg.trials, cfg.threads, [&](std::int64_t i) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
        Walk walk;
        failure_times[static_cast<std::size_t>(i)] =
            run_word(level, rng, ctx, cfg.horizon_days, walk);
    });
    return aggregate_survival(cfg, std::move(failure_times));
}

} // namespace detail

/// Survival of one word estimated from independent trials of the
/// three-state chain.  Identical seed and config replay bit-identically
/// for any worker count: trial i always consumes stream (seed, i).
inline SurvivalEstimate simulate_word_state(const SimConfig& cfg) {
    return detail::simulate_word_level(cfg, SimLevel::State);
}

/// Same estimate from the bit-level process (the chain's ground truth).
inline SurvivalEstimate simulate_word_bits(const SimConfig& cfg) {
    return detail::simulate_word_level(cfg, SimLevel::Bit);
}

inline SurvivalEstimate simulate_word(const SimConfig& cfg) {
    return detail::simulate_word_level(cfg, cfg.level);
}

/// System MTTF for a small memory: each trial draws the failure time of
/// memory_words_small independent words and keeps the minimum.  A word
/// that outlives the horizon has its walk resumed with the horizon doubled
/// (up to 2^40 doublings, then an error); once the trial has a candidate
/// minimum, later words are cut off there, which cannot change the result.
inline SystemMttfEstimate simulate_system_mttf(const SimConfig& cfg, int memory_words_small) {
    cfg.validate();
    if (memory_words_small < 1 || memory_words_small > 10'000)
        throw ValidationError("simulate_system_mttf: memory_words_small must be in [1, 10000]");
    if (cfg.scrub.lambda_per_bit_day == 0.0)
        throw DivergentMttfError("simulation cannot terminate: zero upset rate");
    const detail::SimContext ctx = detail::make_context(cfg.scrub);

    std::vector<double> minima(static_cast<std::size_t>(cfg.trials));
    detail::parallel_trials(cfg.trials, cfg.threads, [&](std::int64_t i) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
        double best = detail::kInf;
        for (int w = 0; w < memory_words_small; ++w) {
            detail::Walk walk;
            if (best == detail::kInf) {
                double cap = cfg.horizon_days;
                double ft = detail::run_word(cfg.level, rng, ctx, cap, walk);
                int doublings = 0;
                while (ft == detail::kInf) {
                    if (++doublings > 40)
                        throw NumericalError(
                            "simulate_system_mttf: no failure within horizon * 2^40; "
                            "increase lambda or the horizon");
                    cap *= 2.0;
                    ft = detail::run_word(cfg.level, rng, ctx, cap, walk);
                }
                best = ft;
            } else {
                best = std::min(best, detail::run_word(cfg.level, rng, ctx, best, walk));
            }
        }
        minima[static_cast<std::size_t>(i)] = best;
    });

    double mean = 0.0;
    for (double v : minima) mean += v;
    mean /= static_cast<double>(cfg.trials);
    double var = 0.0;
    for (double v : minima) var += (v - mean) * (v - mean);
    var /= static_cast<double>(cfg.trials > 1 ? cfg.trials - 1 : 1);
    const double se = std::sqrt(var / static_cast<double>(cfg.trials));

    SystemMttfEstimate est;
    est.result = {mean, mean - kCiZ * se, mean + kCiZ * se, MttfMethod::MonteCarlo};
    est.standard_error = se;
    est.trials = cfg.trials;
    return est;
}

} // namespace scrubrel
