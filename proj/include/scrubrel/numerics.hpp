#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace scrubrel {

/// Thrown when a numerical routine cannot deliver its accuracy contract.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : NumericalError {
    QuadratureError(const std::string& msg, double a, double b, double local_error,
                    std::int64_t evals)
        : NumericalError(msg + " (worst interval [" + std::to_string(a) + ", " +
                         std::to_string(b) + "], local error " + std::to_string(local_error) +
                         ", " + std::to_string(evals) + " evaluations)"),
          worst_a(a), worst_b(b), worst_local_error(local_error), evaluations(evals) {}
    double worst_a;
    double worst_b;
    double worst_local_error;
    std::int64_t evaluations;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

/// Both roots of x^2 - sum*x + product = 0, returned as (larger, smaller).
///
/// The larger root uses the sign-safe quadratic formula; the smaller one is
/// recovered from the product identity, which keeps full relative precision
/// even when the roots differ by many orders of magnitude (subtracting
/// sum/2 - sqrt(...) directly would cancel to zero).
inline std::pair<double, double> stable_quadratic_roots(double sum, double product) {
    if (!(sum > 0.0)) throw NumericalError("stable_quadratic_roots: sum must be > 0");
    if (!(product >= 0.0)) throw NumericalError("stable_quadratic_roots: product must be >= 0");
    const double disc = sum * sum - 4.0 * product;
    if (disc < 0.0) throw NumericalError("stable_quadratic_roots: complex roots (sum^2 < 4*product)");
    const double a1 = 0.5 * (sum + std::sqrt(disc));
    const double a2 = product == 0.0 ? 0.0 : product / a1;
    return {a1, a2};
}

/// 1 - exp(log_r) without cancellation, for log_r <= 0.
inline double safe_complement(double log_r) { return -std::expm1(log_r) + 0.0; }

namespace detail {

template <class F>
double adaptive_simpson_rec(F& f, double a, double fa, double b, double fb, double m, double fm,
                            double whole, double tol, int depth, double& err_acc,
                            std::int64_t& evals, std::int64_t budget) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // |delta|/15 is the usual Richardson estimate of the refined error
    if (depth <= 0 || evals > budget) {
        if (std::abs(delta) / 15.0 > tol)
            throw QuadratureError("adaptive_integrate: refinement budget exceeded", a, b,
                                  std::abs(delta) / 15.0, evals);
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) / 15.0 <= tol) {
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    const double l = adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1,
                                          err_acc, evals, budget);
    const double r = adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1,
                                          err_acc, evals, budget);
    return l + r;
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
///
/// Refines until the accumulated local error estimates drop below
/// rel_tol * |value| (the target is seeded from a coarse first pass and the
/// result re-checked against the final value).  Throws QuadratureError when
/// the recursion depth or evaluation budget is exhausted before the
/// tolerance is met.
template <class F>
QuadratureResult adaptive_integrate(F&& f, double a, double b, double rel_tol = 1e-9,
                                    std::int64_t eval_budget = 4'000'000) {
    if (!(a < b)) throw NumericalError("adaptive_integrate: requires a < b");
    if (!(rel_tol > 0.0)) throw NumericalError("adaptive_integrate: rel_tol must be > 0");

    auto func = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y))
            throw NumericalError("adaptive_integrate: integrand not finite at x = " +
                                 std::to_string(x));
        return y;
    };

    std::int64_t evals = 0;
    const double fa = func(a);
    const double fb = func(b);
    const double m = 0.5 * (a + b);
    const double fm = func(m);
    evals += 3;
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);

    // Absolute tolerance from the coarse estimate, with a floor so an
    // integral that is genuinely zero terminates.
    double scale = std::abs(whole);
    if (scale == 0.0) scale = (b - a) * 1e-300;
    const double tol = rel_tol * scale;

    QuadratureResult out;
    out.value = detail::adaptive_simpson_rec(func, a, fa, b, fb, m, fm, whole, tol, 48,
                                             out.abs_error_estimate, evals, eval_budget);
    out.evaluations = evals;

    // If the coarse pass badly overestimated the magnitude, re-run against
    // the refined value once.
    if (std::abs(out.value) < 0.1 * scale && std::abs(out.value) > 0.0) {
        const double tol2 = rel_tol * std::abs(out.value);
        if (out.abs_error_estimate > tol2) {
            QuadratureResult tight;
            std::int64_t evals2 = 0;
            tight.value = detail::adaptive_simpson_rec(func, a, fa, b, fb, m, fm, whole, tol2, 48,
                                                       tight.abs_error_estimate, evals2,
                                                       eval_budget);
            tight.evaluations = evals + evals2;
            return tight;
        }
    }
    return out;
}

} // namespace scrubrel
