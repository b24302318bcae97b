#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "scrubrel/config.hpp"
#include "scrubrel/markov.hpp"
#include "scrubrel/numerics.hpp"

namespace scrubrel {

/// The survival integral diverges (zero upset rate): no finite MTTF.
struct DivergentMttfError : NumericalError {
    using NumericalError::NumericalError;
};

/// 1 - R(T) underflows double precision, so renewal formulas cannot be
/// evaluated at this scale.
struct BelowResolutionError : NumericalError {
    using NumericalError::NumericalError;
};

enum class MttfMethod {
    ClosedForm,         ///< published probabilistic closed form
    ClosedFormDataBits, ///< published variant counting data bits only
    Quadrature,         ///< direct integration of R(t)
    RenewalExact,       ///< geometric-series identity over scrub intervals
    Bounds,             ///< interval bounds; point is the upper bound
    MonteCarlo,
};

inline std::string_view to_string(MttfMethod m) {
    switch (m) {
        case MttfMethod::ClosedForm: return "closed";
        case MttfMethod::ClosedFormDataBits: return "closed_data_bits";
        case MttfMethod::Quadrature: return "quadrature";
        case MttfMethod::RenewalExact: return "renewal_exact";
        case MttfMethod::Bounds: return "bounds";
        case MttfMethod::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

/// Point estimate in days plus lower/upper companions (equal to the point
/// when the method carries no interval).
struct MttfResult {
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    MttfMethod method = MttfMethod::ClosedForm;
};

struct SystemCurvePoint {
    double t_days = 0.0;
    double log_reliability = 0.0; ///< log R(t) = M log r(t)
    double system_failure = 0.0;  ///< 1 - R(t), cancellation safe
};

/// log R = M log r for M independent, identical words.
inline double system_log_reliability(double word_log_r, std::int64_t memory_words) {
    if (!(word_log_r <= 0.0)) throw ValidationError("system_log_reliability: log r must be <= 0");
    if (memory_words < 1) throw ValidationError("system_log_reliability: M must be >= 1");
    return static_cast<double>(memory_words) * word_log_r;
}

/// Word survival under periodic scrubbing: survival of n = floor(t/T)
/// complete intervals (each a fresh start, since a survivor is error free
/// after the sweep) times survival of the residual x = t - nT.
inline double renewal_word_log_reliability(const TransientRoots& roots, double period_days,
                                           double t_days) {
    if (!(period_days > 0.0)) throw ValidationError("renewal: period must be > 0");
    if (!(t_days >= 0.0)) throw ValidationError("renewal: t must be >= 0");
    const double n = std::floor(t_days / period_days);
    const double x = std::max(t_days - n * period_days, 0.0);
    return n * word_reliability(roots, period_days).log_value +
           word_reliability(roots, x).log_value;
}

namespace detail {

struct PreparedModel {
    CanonicalRates rates;
    WordChain chain;
    TransientRoots roots;
};

inline PreparedModel prepare(const ScrubConfig& cfg) {
    PreparedModel p;
    p.rates = canonicalize(cfg);
    p.chain = build_chain(cfg.model, p.rates);
    p.roots = transient_roots(p.chain);
    return p;
}

inline void require_periodic(const ScrubConfig& cfg, const char* op) {
    if (cfg.model == Model::Probabilistic)
        throw ValidationError(std::string(op) +
                              ": applies to deterministic/mixed models only "
                              "(valid methods for probabilistic: closed, quadrature)");
}

} // namespace detail

/// Word log-survival at time t for the model: the plain kernel for
/// probabilistic scrubbing, the renewal composition otherwise.
inline double model_word_log_reliability(const ScrubConfig& cfg, double t_days) {
    const auto p = detail::prepare(cfg);
    if (cfg.model == Model::Probabilistic) return word_reliability(p.roots, t_days).log_value;
    return renewal_word_log_reliability(p.roots, *p.rates.period_days, t_days);
}

/// System curve R(t) on explicit sample times.
inline std::vector<SystemCurvePoint> reliability_curve(const ScrubConfig& cfg,
                                                       const std::vector<double>& times_days) {
    const auto p = detail::prepare(cfg);
    std::vector<SystemCurvePoint> out;
    out.reserve(times_days.size());
    for (double t : times_days) {
        const double word_log =
            cfg.model == Model::Probabilistic
                ? word_reliability(p.roots, t).log_value
                : renewal_word_log_reliability(p.roots, *p.rates.period_days, t);
        const double log_R = system_log_reliability(std::min(word_log, 0.0), cfg.memory_words);
        out.push_back({t, log_R, safe_complement(log_R)});
    }
    return out;
}

/// Published closed form for probabilistic scrubbing:
///   MTTF = 4 (mu + lambda) / (M (lambda (2n - 1))^2),  n = w + c.
inline MttfResult mttf_probabilistic_closed(const ScrubConfig& cfg) {
    if (cfg.model != Model::Probabilistic)
        throw ValidationError("mttf closed form applies to the probabilistic model only");
    const auto rates = canonicalize(cfg);
    if (rates.lambda_day == 0.0)
        throw DivergentMttfError("MTTF diverges: zero upset rate");
    const double lam = rates.lambda_day;
    const double n = rates.total_bits_n;
    const double denom_root = lam * (2.0 * n - 1.0);
    const double value = 4.0 * (*rates.mu_day + lam) /
                         (static_cast<double>(cfg.memory_words) * denom_root * denom_root);
    return {value, value, value, MttfMethod::ClosedForm};
}

/// Variant of the closed form that appears in the published summary: it
/// drops lambda from the numerator and counts data bits only (no check
/// bits) in the rate factor.  Kept for the deviations report.
inline MttfResult mttf_probabilistic_closed_data_bits(const ScrubConfig& cfg) {
    if (cfg.model != Model::Probabilistic)
        throw ValidationError("mttf closed form applies to the probabilistic model only");
    const auto rates = canonicalize(cfg);
    if (rates.lambda_day == 0.0)
        throw DivergentMttfError("MTTF diverges: zero upset rate");
    const double lam = rates.lambda_day;
    const double denom_root = lam * (2.0 * cfg.data_bits - 1.0);
    const double value = 4.0 * (*rates.mu_day) /
                         (static_cast<double>(cfg.memory_words) * denom_root * denom_root);
    return {value, value, value, MttfMethod::ClosedFormDataBits};
}

/// MTTF of M words with the plain (non-renewal) kernel, by quadrature of
/// R(t) = exp(M log r0(t)) over [0, t*] plus a certified exponential tail:
/// for t >= t*, R(t) <= (a1/(a1-a2))^M exp(-M a2 t), integrable in closed
/// form.  t* is chosen so the tail is ~e^-50 of the total.
inline MttfResult mttf_kernel_quadrature(const TransientRoots& roots, std::int64_t memory_words,
                                         double rel_tol = 1e-9) {
    if (roots.degenerate()) throw DivergentMttfError("MTTF diverges: zero upset rate");
    const double M = static_cast<double>(memory_words);
    const double t_star = 50.0 / (M * roots.a2);
    const double log_weight = -M * std::log1p(-roots.a2 / roots.a1);
    if (log_weight - 50.0 > 500.0)
        throw NumericalError("mttf quadrature: tail bound overflows; roots too close for M");
    auto integrand = [&](double t) {
        return std::exp(M * word_reliability(roots, t).log_value);
    };
    const QuadratureResult q = adaptive_integrate(integrand, 0.0, t_star, rel_tol);
    const double tail = std::exp(log_weight - 50.0) / (M * roots.a2);
    const double value = q.value + tail;
    const double err = q.abs_error_estimate + tail;
    return {value, value - err, value + err, MttfMethod::Quadrature};
}

inline MttfResult mttf_quadrature(const ScrubConfig& cfg, double rel_tol = 1e-9) {
    if (cfg.model != Model::Probabilistic)
        throw ValidationError("mttf quadrature applies to the probabilistic model only "
                              "(valid methods for deterministic/mixed: renewal_exact, bounds)");
    const auto p = detail::prepare(cfg);
    return mttf_kernel_quadrature(p.roots, cfg.memory_words, rel_tol);
}

/// Exact MTTF under periodic scrubbing.  Survival over k complete
/// intervals is R(T)^k, so the interval integrals form a geometric series:
///   MTTF = (integral_0^T R_s(x) dx) / (1 - R_s(T)).
/// The complement is kept in expm1 form throughout; when 1 - R(T) is small
/// the numerator is computed as T minus the integral of the (tiny) failure
/// side, which avoids summing values that are all ~1.
inline MttfResult mttf_renewal_exact(const ScrubConfig& cfg, double rel_tol = 1e-9) {
    detail::require_periodic(cfg, "mttf renewal_exact");
    const auto p = detail::prepare(cfg);
    if (p.roots.degenerate()) throw DivergentMttfError("MTTF diverges: zero upset rate");
    const double T = *p.rates.period_days;
    const double M = static_cast<double>(cfg.memory_words);
    const double complement_T = safe_complement(M * word_reliability(p.roots, T).log_value);
    if (complement_T == 0.0)
        throw BelowResolutionError(
            "1 - R(T) underflows double precision at this scale; rescale lambda or "
            "use a longer period");
    double value, err;
    if (complement_T <= 0.5) {
        auto failure_side = [&](double x) {
            return safe_complement(M * word_reliability(p.roots, x).log_value);
        };
        const QuadratureResult q = adaptive_integrate(failure_side, 0.0, T, rel_tol);
        value = (T - q.value) / complement_T;
        err = q.abs_error_estimate / complement_T;
    } else {
        auto survival_side = [&](double x) {
            return std::exp(M * word_reliability(p.roots, x).log_value);
        };
        const QuadratureResult q = adaptive_integrate(survival_side, 0.0, T, rel_tol);
        value = q.value / complement_T;
        err = q.abs_error_estimate / complement_T;
    }
    return {value, value - err, value + err, MttfMethod::RenewalExact};
}

/// Published MTTF bounds for periodic scrubbing:
///   lower = T R(T) / (1 - R(T)),  upper = T (1 + R(T)) / (2 (1 - R(T))).
/// The point estimate follows the published convention of quoting the
/// upper value.  upper - lower is identically T/2.
inline MttfResult mttf_bounds(const ScrubConfig& cfg) {
    detail::require_periodic(cfg, "mttf bounds");
    const auto p = detail::prepare(cfg);
    if (p.roots.degenerate()) throw DivergentMttfError("MTTF diverges: zero upset rate");
    const double T = *p.rates.period_days;
    const double log_RT =
        system_log_reliability(word_reliability(p.roots, T).log_value, cfg.memory_words);
    const double complement = safe_complement(log_RT);
    if (complement == 0.0)
        throw BelowResolutionError(
            "1 - R(T) underflows double precision at this scale; rescale lambda or "
            "use a longer period");
    const double R = std::exp(log_RT);
    const double lower = T * R / complement;
    const double upper = T * (1.0 + R) / (2.0 * complement);
    return {upper, lower, upper, MttfMethod::Bounds};
}

/// MTTF by the method that is exact for the model: quadrature for
/// probabilistic, the renewal identity otherwise.
inline MttfResult mttf_exact(const ScrubConfig& cfg, double rel_tol = 1e-9) {
    return cfg.model == Model::Probabilistic ? mttf_quadrature(cfg, rel_tol)
                                             : mttf_renewal_exact(cfg, rel_tol);
}

struct ComparisonPoint {
    std::int64_t memory_words = 0;
    double period_seconds = 0.0;
    double mu_per_second = 0.0;
};

struct ComparisonRow {
    ComparisonPoint point;
    double mttf_prob = 0.0;
    double mttf_det = 0.0;
    double mttf_mixed = 0.0;
    double det_over_prob = 0.0;
    double mixed_over_det = 0.0;
    double mixed_over_prob = 0.0;
};

/// MTTF of all three models on a (M, T, mu) grid, with pairwise ratios.
/// Word-size and upset-rate parameters come from the base configuration.
inline std::vector<ComparisonRow> compare_models(const ScrubConfig& base,
                                                 const std::vector<ComparisonPoint>& grid,
                                                 double rel_tol = 1e-9) {
    std::vector<ComparisonRow> rows;
    rows.reserve(grid.size());
    for (const auto& pt : grid) {
        ScrubConfig c = base;
        c.memory_words = pt.memory_words;
        c.scrub_period_seconds = pt.period_seconds;
        c.scrub_rate_per_second = pt.mu_per_second;

        ComparisonRow row;
        row.point = pt;
        c.model = Model::Probabilistic;
        row.mttf_prob = mttf_quadrature(c, rel_tol).point;
        c.model = Model::Deterministic;
        row.mttf_det = mttf_renewal_exact(c, rel_tol).point;
        c.model = Model::Mixed;
        row.mttf_mixed = mttf_renewal_exact(c, rel_tol).point;
        row.det_over_prob = row.mttf_det / row.mttf_prob;
        row.mixed_over_det = row.mttf_mixed / row.mttf_det;
        row.mixed_over_prob = row.mttf_mixed / row.mttf_prob;
        rows.push_back(row);
    }
    return rows;
}

} // namespace scrubrel
