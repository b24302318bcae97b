#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace scrubrel {

/// Thrown when a parameter set violates its documented invariants.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Model { Probabilistic, Deterministic, Mixed };

inline constexpr double kSecondsPerDay = 86400.0;

inline std::string_view to_string(Model m) {
    switch (m) {
        case Model::Probabilistic: return "probabilistic";
        case Model::Deterministic: return "deterministic";
        case Model::Mixed: return "mixed";
    }
    return "?";
}

inline std::optional<Model> model_from_string(std::string_view s) {
    if (s == "probabilistic" || s == "prob" || s == "p") return Model::Probabilistic;
    if (s == "deterministic" || s == "det" || s == "d") return Model::Deterministic;
    if (s == "mixed" || s == "mix" || s == "m") return Model::Mixed;
    return std::nullopt;
}

/// Full parameter set for one memory system.
///
/// Rates and intervals keep the units they are usually quoted in: the
/// per-bit upset rate is per day, the sweep period and the access rate are
/// in seconds.  canonicalize() converts everything to days.
///
/// A zero upset rate or a zero access rate is accepted as an explicit
/// degenerate (no upsets / no probabilistic scrubbing); negative values are
/// rejected.
struct ScrubConfig {
    double lambda_per_bit_day = 0.0;             ///< transient upsets per bit per day
    int data_bits = 0;                           ///< data bits per word
    int check_bits = 0;                          ///< SEC-DED check bits per word
    std::int64_t memory_words = 0;               ///< words in the memory system
    std::optional<double> scrub_period_seconds;  ///< deterministic sweep interval
    std::optional<double> scrub_rate_per_second; ///< probabilistic access/scrub rate
    Model model = Model::Probabilistic;

    int total_bits() const { return data_bits + check_bits; }

    /// Throws ValidationError if any invariant fails.
    void validate() const;
};

/// The same parameters expressed in the internal unit system (days).
struct CanonicalRates {
    double lambda_day = 0.0;
    std::optional<double> mu_day;
    std::optional<double> period_days;
    int total_bits_n = 0;
};

/// Smallest SEC-DED (extended Hamming) check-bit count for a data word:
/// the least c with 2^(c-1) >= data_bits + c.
inline int sec_ded_check_bits(int data_bits) {
    if (data_bits < 1) throw ValidationError("sec_ded_check_bits: data_bits must be >= 1");
    for (int c = 1;; ++c) {
        // 2^(c-1) without overflow worry: data_bits + c < 2^31, c <= 62
        const std::int64_t capacity = std::int64_t{1} << (c - 1);
        if (capacity >= std::int64_t{data_bits} + c) return c;
    }
}

/// Number of data words in a memory of the given size (1 MB = 2^20 bytes).
/// Check bits are overhead and do not count toward the size.
inline std::int64_t words_from_megabytes(std::int64_t megabytes, int data_bits) {
    if (megabytes < 1) throw ValidationError("words_from_megabytes: megabytes must be >= 1");
    if (data_bits < 1) throw ValidationError("words_from_megabytes: data_bits must be >= 1");
    const std::int64_t bits = megabytes * (std::int64_t{1} << 20) * 8;
    if (bits % data_bits != 0)
        throw ValidationError("words_from_megabytes: " + std::to_string(data_bits) +
                              "-bit words do not divide " + std::to_string(megabytes) + " MB");
    return bits / data_bits;
}

inline void ScrubConfig::validate() const {
    if (!(lambda_per_bit_day >= 0.0))
        throw ValidationError("lambda_per_bit_day must be a finite nonnegative rate");
    if (data_bits < 1) throw ValidationError("data_bits must be >= 1");
    if (check_bits < 0) throw ValidationError("check_bits must be >= 0");
    if (total_bits() < 2)
        throw ValidationError("degenerate word: data_bits + check_bits must be >= 2 "
                              "(a 1-bit word cannot hold two co-existing errors)");
    if (memory_words < 1) throw ValidationError("memory_words must be >= 1");
    if (scrub_period_seconds && !(*scrub_period_seconds > 0.0))
        throw ValidationError("scrub_period_seconds must be > 0 when present");
    if (scrub_rate_per_second && !(*scrub_rate_per_second >= 0.0))
        throw ValidationError("scrub_rate_per_second must be >= 0 when present");

    const bool needs_mu = model == Model::Probabilistic || model == Model::Mixed;
    const bool needs_period = model == Model::Deterministic || model == Model::Mixed;
    if (needs_mu && !scrub_rate_per_second)
        throw ValidationError(std::string(to_string(model)) +
                              " scrubbing requires scrub_rate_per_second (mu)");
    if (needs_period && !scrub_period_seconds)
        throw ValidationError(std::string(to_string(model)) +
                              " scrubbing requires scrub_period_seconds (T)");
}

/// Validate and convert to per-day rates.  The period, if present for the
/// model, comes out in days; for probabilistic scrubbing any supplied
/// period is ignored.
inline CanonicalRates canonicalize(const ScrubConfig& cfg) {
    cfg.validate();
    CanonicalRates out;
    out.lambda_day = cfg.lambda_per_bit_day;
    out.total_bits_n = cfg.total_bits();
    if (cfg.model == Model::Probabilistic || cfg.model == Model::Mixed)
        out.mu_day = *cfg.scrub_rate_per_second * kSecondsPerDay;
    if (cfg.model == Model::Deterministic || cfg.model == Model::Mixed)
        out.period_days = *cfg.scrub_period_seconds / kSecondsPerDay;
    return out;
}

} // namespace scrubrel
