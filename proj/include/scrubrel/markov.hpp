#pragma once

#include <cmath>
#include <limits>

#include "scrubrel/config.hpp"
#include "scrubrel/numerics.hpp"

namespace scrubrel {

// Word-level three-state chain.  S0 = error free, S1 = one correctable
// error, S2 = two co-existing errors (absorbing failure).
//
//   S0 -> S1 at lambda * n        (any of the n bits is upset)
//   S1 -> S0 at recovery_rate     (lambda for a plain sweep interval;
//                                  lambda + mu when accesses also scrub:
//                                  a second upset on the faulty bit cancels
//                                  it, and an access rewrites the word)
//   S1 -> S2 at lambda * (n - 1)  (an upset on any other bit)
struct WordChain {
    int n = 0;                 ///< total bits per word (data + check)
    double lambda_day = 0.0;   ///< per-bit upset rate, per day
    double recovery_rate = 0.0;///< S1 -> S0 rate, per day

    double upset_rate() const { return lambda_day * n; }
    double fatal_rate() const { return lambda_day * (n - 1); }
};

/// Decay rates of the two-exponential survival kernel, a1 >= a2 >= 0.
/// They satisfy a1 + a2 = 2*lambda*n + mu_eff and a1*a2 = lambda^2*n*(n-1),
/// where mu_eff = recovery_rate - lambda.
struct TransientRoots {
    double a1 = 0.0;
    double a2 = 0.0;

    /// True when upsets cannot occur at all; the survival kernel is 1.
    bool degenerate() const { return a2 == 0.0; }
};

/// Probabilities of the three word states.
struct StateDistribution {
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    double reliability() const { return p0 + p1; }
};

/// Total upset rate of one word: lambda * (data_bits + check_bits).
inline double word_error_rate(double lambda_day, int data_bits, int check_bits) {
    if (data_bits + check_bits < 2) throw ValidationError("word_error_rate: word must have >= 2 bits");
    return lambda_day * (data_bits + check_bits);
}

/// Chain for one word under the given scrubbing model.  Deterministic
/// sweeps act only at period boundaries, so within an interval the only
/// way back from S1 is the cancelling upset; access-driven scrubbing adds
/// mu to the recovery rate (mixed uses the same chain as probabilistic).
inline WordChain build_chain(Model model, const CanonicalRates& rates) {
    if (rates.total_bits_n < 2) throw ValidationError("build_chain: word must have >= 2 bits");
    WordChain chain;
    chain.n = rates.total_bits_n;
    chain.lambda_day = rates.lambda_day;
    if (model == Model::Deterministic) {
        chain.recovery_rate = rates.lambda_day;
    } else {
        if (!rates.mu_day)
            throw ValidationError("build_chain: probabilistic/mixed model requires mu");
        chain.recovery_rate = rates.lambda_day + *rates.mu_day;
    }
    return chain;
}

/// Decay rates of the chain restricted to {S0, S1}: the roots of
///   s^2 - (2*lambda*n + mu_eff)*s + lambda^2*n*(n-1) = 0.
/// The product is formed directly from lambda^2*n*(n-1) so a2 keeps full
/// relative precision when mu dominates (a2/a1 can be ~1e-15).
inline TransientRoots transient_roots(const WordChain& chain) {
    if (chain.n < 2) throw ValidationError("transient_roots: word must have >= 2 bits");
    if (chain.lambda_day < 0.0 || chain.recovery_rate < chain.lambda_day)
        throw ValidationError("transient_roots: invalid chain rates");
    const double lam = chain.lambda_day;
    const double mu_eff = chain.recovery_rate - lam;
    if (lam == 0.0) return TransientRoots{mu_eff, 0.0}; // no upsets: survival is 1
    const double sum = 2.0 * lam * chain.n + mu_eff;
    const double product = lam * lam * chain.n * (chain.n - 1);
    const auto [a1, a2] = stable_quadratic_roots(sum, product);
    return TransientRoots{a1, a2};
}

namespace detail {

// Failure probability F0(t) = 1 - r0(t) of the two-exponential kernel,
// evaluated to full relative precision.
//
// For a1*t >= 1/2 the expm1 form
//   F0 = [a1*(1 - e^{-a2 t}) - a2*(1 - e^{-a1 t})] / (a1 - a2)
// loses at most a couple of digits.  For smaller t both terms shrink to
// a1*a2*t and the subtraction cancels catastrophically (F0 ~ a1*a2*t^2/2),
// so we switch to the series
//   F0 = a1*a2 * sum_{k>=2} (-t)^k / k! * h_{k-2},
// with h_m = a1^m + a1^{m-1} a2 + ... + a2^m the complete homogeneous
// symmetric polynomial, built incrementally.
inline double two_exp_failure(double a1, double a2, double t) {
    if (t == 0.0 || a2 == 0.0) return 0.0;
    if (a1 == a2) {
        // double root: F0 = 1 - (1 + a t) e^{-a t}
        const double u = a1 * t;
        if (u < 0.5) {
            // series: 1 - (1+u)e^{-u} = sum_{k>=2} (-1)^k (k-1) u^k / k!
            double sum = 0.0, term = 0.5 * u * u;
            for (int k = 2; k < 64; ++k) {
                sum += term;
                term *= -u * static_cast<double>(k) / ((k + 1.0) * (k - 1.0));
                if (std::abs(term) < std::numeric_limits<double>::epsilon() * sum) break;
            }
            return sum;
        }
        return -std::expm1(std::log1p(u) - u);
    }
    if (a1 * t >= 0.5) {
        const double c2 = -std::expm1(-a2 * t); // 1 - e^{-a2 t}
        const double c1 = -std::expm1(-a1 * t);
        const double f = (a1 * c2 - a2 * c1) / (a1 - a2);
        return std::min(f, 1.0);
    }
    double sum = 0.0;
    double tk = 0.5 * t * t;   // t^k / k!  starting at k = 2
    double sign = 1.0;
    double h = 1.0;            // h_{k-2}, starting at h_0
    double a2_pow = 1.0;       // a2^{k-2}
    for (int k = 2; k < 80; ++k) {
        const double term = sign * tk * h;
        sum += term;
        if (std::abs(term) < 0.5 * std::numeric_limits<double>::epsilon() * std::abs(sum)) break;
        tk *= t / (k + 1.0);
        sign = -sign;
        a2_pow *= a2;
        h = a1 * h + a2_pow;
    }
    return a1 * a2 * sum;
}

} // namespace detail

/// Survival kernel of one word, with its complement and log computed
/// cancellation-safely.  The failure probability is the first-class value;
/// it stays meaningful down to ~1e-300 where 1 - r would round to zero.
struct WordReliability {
    double value = 1.0;      ///< r0(t)
    double failure = 0.0;    ///< F0(t) = 1 - r0(t), full relative precision
    double log_value = 0.0;  ///< log r0(t)
};

inline WordReliability word_reliability(const TransientRoots& roots, double t_days) {
    if (!(t_days >= 0.0)) throw ValidationError("word_reliability: t must be >= 0");
    WordReliability out;
    if (roots.degenerate() || t_days == 0.0) return out;
    out.failure = detail::two_exp_failure(roots.a1, roots.a2, t_days);
    out.log_value = std::log1p(-out.failure);
    out.value = 1.0 - out.failure;
    return out;
}

/// Shorthand for the failure probability alone.
inline double word_failure_probability(const TransientRoots& roots, double t_days) {
    return word_reliability(roots, t_days).failure;
}

/// Brute-force check of the closed form: integrate the three state
/// equations
///   P0' = -lambda n P0 + recovery P1
///   P1' =  lambda n P0 - (recovery + lambda (n-1)) P1
///   P2' =  lambda (n-1) P1
/// from (1, 0, 0) with classical fourth-order Runge-Kutta at a fixed step
/// (the last step is shortened to land on t exactly).  The step must be
/// chosen small enough for the target accuracy; see the step-halving test.
inline StateDistribution ode_oracle(const WordChain& chain, double t_days, double step_days) {
    if (!(step_days > 0.0)) throw ValidationError("ode_oracle: step must be > 0");
    if (!(t_days >= 0.0)) throw ValidationError("ode_oracle: t must be >= 0");

    const double in_rate = chain.upset_rate();
    const double out_rate = chain.recovery_rate + chain.fatal_rate();
    const double fatal = chain.fatal_rate();
    const double rec = chain.recovery_rate;

    double p0 = 1.0, p1 = 0.0, p2 = 0.0;
    auto d0 = [&](double q0, double q1) { return -in_rate * q0 + rec * q1; };
    auto d1 = [&](double q0, double q1) { return in_rate * q0 - out_rate * q1; };

    double t = 0.0;
    while (t < t_days) {
        const double h = std::min(step_days, t_days - t);
        const double k0a = d0(p0, p1), k1a = d1(p0, p1), k2a = fatal * p1;
        const double q0b = p0 + 0.5 * h * k0a, q1b = p1 + 0.5 * h * k1a;
        const double k0b = d0(q0b, q1b), k1b = d1(q0b, q1b), k2b = fatal * q1b;
        const double q0c = p0 + 0.5 * h * k0b, q1c = p1 + 0.5 * h * k1b;
        const double k0c = d0(q0c, q1c), k1c = d1(q0c, q1c), k2c = fatal * q1c;
        const double q0d = p0 + h * k0c, q1d = p1 + h * k1c;
        const double k0d = d0(q0d, q1d), k1d = d1(q0d, q1d), k2d = fatal * q1d;
        p0 += (h / 6.0) * (k0a + 2.0 * k0b + 2.0 * k0c + k0d);
        p1 += (h / 6.0) * (k1a + 2.0 * k1b + 2.0 * k1c + k1d);
        p2 += (h / 6.0) * (k2a + 2.0 * k2b + 2.0 * k2c + k2d);
        t += h;
    }
    return StateDistribution{p0, p1, p2};
}

} // namespace scrubrel
