#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scrubrel/numerics.hpp"
#include "scrubrel/rng.hpp"

using namespace scrubrel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("stable_quadratic_roots on plain cases") {
    auto [a1, a2] = stable_quadratic_roots(3.0, 2.0);
    CHECK(a1 == 2.0);
    CHECK(a2 == 1.0);
    auto [b1, b2] = stable_quadratic_roots(2.0, 1.0); // discriminant boundary
    CHECK(b1 == 1.0);
    CHECK(b2 == 1.0);
}

TEST_CASE("stable_quadratic_roots keeps the tiny root precise") {
    // reference value from a 50-digit evaluation of the same inputs
    auto [a1, a2] = stable_quadratic_roots(8640.00078, 1.482e-7);
    CHECK_THAT(a1, WithinRel(8640.0007799999828472, 1e-15));
    CHECK_THAT(a2, WithinRel(1.7152776229263291133e-11, 1e-14));
}

TEST_CASE("stable_quadratic_roots rejects invalid input") {
    CHECK_THROWS_AS(stable_quadratic_roots(0.0, 1.0), NumericalError);
    CHECK_THROWS_AS(stable_quadratic_roots(-1.0, 0.5), NumericalError);
    CHECK_THROWS_AS(stable_quadratic_roots(1.0, 0.26), NumericalError); // complex pair
    CHECK_THROWS_AS(stable_quadratic_roots(1.0, -1e-12), NumericalError);
}

TEST_CASE("stable_quadratic_roots round-trips Vieta across magnitudes") {
    Rng rng(11, 0);
    for (int i = 0; i < 2000; ++i) {
        const double sum = std::exp((rng.uniform_pos() - 0.5) * 40.0);
        // keep the product inside the real-root region
        const double frac = rng.uniform_pos();
        const double product = 0.25 * sum * sum * frac * frac;
        auto [a1, a2] = stable_quadratic_roots(sum, product);
        REQUIRE(a1 >= a2);
        REQUIRE_THAT(a1 + a2, WithinRel(sum, 1e-14));
        if (product > 0.0) REQUIRE_THAT(a1 * a2, WithinRel(product, 1e-14));
    }
}

TEST_CASE("safe_complement") {
    CHECK(safe_complement(0.0) == 0.0);
    CHECK(!std::signbit(safe_complement(0.0)));
    CHECK_THAT(safe_complement(-1e-15), WithinRel(1e-15, 1e-12));
    CHECK_THAT(safe_complement(-std::log(2.0)), WithinRel(0.5, 1e-15));
}

TEST_CASE("adaptive_integrate on known antiderivatives") {
    const auto one = adaptive_integrate([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(one.value == 1.0);

    const auto decay = adaptive_integrate([](double t) { return std::exp(-t); }, 0.0, 40.0, 1e-12);
    CHECK_THAT(decay.value, WithinRel(1.0 - std::exp(-40.0), 1e-12));

    struct Case {
        double (*f)(double);
        double a, b, truth;
    };
    const Case suite[] = {
        {[](double x) { return std::sin(x); }, 0.0, 3.141592653589793, 2.0},
        {[](double x) { return x * x * x; }, 0.0, 1.0, 0.25},
        {[](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, 0.7853981633974483},
        {[](double x) { return std::exp(-x * x); }, 0.0, 5.0, 0.8862269254527579},
    };
    for (const auto& c : suite) {
        const auto q = adaptive_integrate(c.f, c.a, c.b, 1e-10);
        CHECK_THAT(q.value, WithinRel(c.truth, 1e-9));
        // the local-estimate sum must bound the actual error
        CHECK(std::abs(q.value - c.truth) <= q.abs_error_estimate + 1e-15 * std::abs(c.truth));
    }
}

TEST_CASE("adaptive_integrate agrees with a brute-force midpoint rule") {
    // the failure-side integrand used by the renewal identity
    const double a1 = 4.5244997998398398206e-4, a2 = 3.2755002001601601794e-4;
    const double M = 262144.0;
    auto f = [&](double x) {
        const double c2 = -std::expm1(-a2 * x);
        const double c1 = -std::expm1(-a1 * x);
        const double f0 = (a1 * c2 - a2 * c1) / (a1 - a2);
        return -std::expm1(M * std::log1p(-f0));
    };
    const double T = 0.5;
    const auto q = adaptive_integrate(f, 0.0, T, 1e-10);
    double riemann = 0.0;
    const int slices = 1'000'000;
    for (int i = 0; i < slices; ++i) riemann += f((i + 0.5) * T / slices);
    riemann *= T / slices;
    CHECK_THAT(q.value, WithinRel(riemann, 1e-8));
}

TEST_CASE("adaptive_integrate reports budget exhaustion with diagnostics") {
    auto nasty = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3) + 1e-18); };
    try {
        adaptive_integrate(nasty, 0.0, 1.0, 1e-12, 20'000);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.evaluations > 0);
        CHECK(e.worst_a >= 0.0);
        CHECK(e.worst_b <= 1.0);
        CHECK(e.worst_local_error > 0.0);
    }
}

TEST_CASE("adaptive_integrate validates arguments") {
    auto f = [](double) { return 1.0; };
    CHECK_THROWS_AS(adaptive_integrate(f, 1.0, 0.0), NumericalError);
    CHECK_THROWS_AS(adaptive_integrate(f, 0.0, 1.0, 0.0), NumericalError);
    auto inf_at_zero = [](double x) { return 1.0 / x; };
    CHECK_THROWS_AS(adaptive_integrate(inf_at_zero, 0.0, 1.0), NumericalError);
}
