#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scrubrel/markov.hpp"
#include "scrubrel/rng.hpp"

using namespace scrubrel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CanonicalRates rates_of(double lam, int n, double mu_day = -1.0, double period_days = -1.0) {
    CanonicalRates r;
    r.lambda_day = lam;
    r.total_bits_n = n;
    if (mu_day >= 0.0) r.mu_day = mu_day;
    if (period_days > 0.0) r.period_days = period_days;
    return r;
}

} // namespace

TEST_CASE("word_error_rate is lambda times the full word width") {
    CHECK_THAT(word_error_rate(1e-5, 32, 7), WithinRel(3.9e-4, 1e-12));
    CHECK(word_error_rate(0.0, 32, 7) == 0.0);
    CHECK_THAT(word_error_rate(1e-4, 64, 8), WithinRel(7.2e-3, 1e-12));
    CHECK_THROWS_AS(word_error_rate(1e-5, 1, 0), ValidationError);
}

TEST_CASE("build_chain picks the recovery rate per model") {
    const auto prob = build_chain(Model::Probabilistic, rates_of(1e-5, 39, 8640.0));
    CHECK_THAT(prob.recovery_rate, WithinRel(8640.00001, 1e-12));
    const auto det = build_chain(Model::Deterministic, rates_of(1e-5, 39));
    CHECK(det.recovery_rate == 1e-5); // only the cancelling upset acts within a sweep
    const auto mixed = build_chain(Model::Mixed, rates_of(1e-5, 39, 8640.0, 1e-4));
    CHECK(mixed.recovery_rate == prob.recovery_rate);
    CHECK(mixed.n == 39);
    CHECK_THROWS_AS(build_chain(Model::Mixed, rates_of(1e-5, 39)), ValidationError);
    CHECK_THROWS_AS(build_chain(Model::Probabilistic, rates_of(1e-5, 1, 8640.0)),
                    ValidationError);
}

TEST_CASE("deterministic roots match the symbolic solution lambda*(n +- sqrt(n))") {
    const double lam = 1e-5;
    const int n = 39;
    const auto roots = transient_roots(build_chain(Model::Deterministic, rates_of(lam, n)));
    CHECK_THAT(roots.a1, WithinRel(lam * (n + std::sqrt(double(n))), 1e-13));
    CHECK_THAT(roots.a2, WithinRel(lam * (n - std::sqrt(double(n))), 1e-13));
    CHECK_THAT(roots.a1, WithinRel(4.5244997998398398206e-4, 1e-14)); // 50-digit reference
    CHECK_THAT(roots.a2, WithinRel(3.2755002001601601794e-4, 1e-14));
}

TEST_CASE("probabilistic roots keep the slow rate at full precision") {
    const auto roots =
        transient_roots(build_chain(Model::Probabilistic, rates_of(1e-5, 39, 8640.0)));
    CHECK_THAT(roots.a1, WithinRel(8640.0007799999828472, 1e-15));
    CHECK_THAT(roots.a2, WithinRel(1.7152776229263291133e-11, 1e-14));
    // product identity holds by construction
    CHECK_THAT(roots.a1 * roots.a2, WithinRel(1e-10 * 39 * 38, 1e-15));
}

TEST_CASE("roots satisfy the Vieta identities across a random grid") {
    Rng rng(2024, 0);
    for (int i = 0; i < 2000; ++i) {
        const double lam = std::exp(-18.0 + 16.0 * rng.uniform_pos());
        const int n = 2 + static_cast<int>(rng.uniform_below(199));
        const bool with_mu = rng.uniform_below(2) == 1;
        const double mu = with_mu ? std::exp(-14.0 + 25.0 * rng.uniform_pos()) : 0.0;
        const auto chain = build_chain(with_mu ? Model::Probabilistic : Model::Deterministic,
                                       rates_of(lam, n, with_mu ? mu : -1.0));
        const auto r = transient_roots(chain);
        REQUIRE(r.a1 >= r.a2);
        REQUIRE(r.a2 > 0.0);
        REQUIRE_THAT(r.a1 + r.a2, WithinRel(2.0 * lam * n + mu, 1e-12));
        REQUIRE_THAT(r.a1 * r.a2, WithinRel(lam * lam * n * (n - 1), 1e-12));
    }
}

TEST_CASE("probabilistic chain with mu = 0 degenerates to the deterministic one") {
    const auto det = transient_roots(build_chain(Model::Deterministic, rates_of(1e-3, 39)));
    const auto prob =
        transient_roots(build_chain(Model::Probabilistic, rates_of(1e-3, 39, 0.0)));
    CHECK(det.a1 == prob.a1);
    CHECK(det.a2 == prob.a2);
}

TEST_CASE("roots scale linearly under a joint rate rescaling") {
    Rng rng(5, 0);
    for (int i = 0; i < 200; ++i) {
        const double lam = std::exp(-16.0 + 12.0 * rng.uniform_pos());
        const double mu = std::exp(-8.0 + 16.0 * rng.uniform_pos());
        const double k = std::exp((rng.uniform_pos() - 0.5) * 10.0);
        const auto base =
            transient_roots(build_chain(Model::Probabilistic, rates_of(lam, 39, mu)));
        const auto scaled =
            transient_roots(build_chain(Model::Probabilistic, rates_of(k * lam, 39, k * mu)));
        REQUIRE(scaled.a1 >= scaled.a2);
        REQUIRE_THAT(scaled.a1, WithinRel(k * base.a1, 1e-13));
        REQUIRE_THAT(scaled.a2, WithinRel(k * base.a2, 1e-13));
    }
}

TEST_CASE("zero upset rate short-circuits to certain survival") {
    const auto roots =
        transient_roots(build_chain(Model::Probabilistic, rates_of(0.0, 39, 8640.0)));
    CHECK(roots.degenerate());
    for (double t : {0.0, 1.0, 1e4}) {
        const auto r = word_reliability(roots, t);
        CHECK(r.value == 1.0);
        CHECK(r.failure == 0.0);
        CHECK(r.log_value == 0.0);
    }
}

TEST_CASE("word_reliability boundary behavior") {
    const auto roots = transient_roots(build_chain(Model::Deterministic, rates_of(1e-5, 39)));
    const auto at0 = word_reliability(roots, 0.0);
    CHECK(at0.value == 1.0);
    CHECK(at0.failure == 0.0);
    CHECK_THROWS_AS(word_reliability(roots, -1e-9), ValidationError);
}

TEST_CASE("failure probability matches 50-digit references") {
    const auto det = transient_roots(build_chain(Model::Deterministic, rates_of(1e-5, 39)));
    const double T10s = 10.0 / kSecondsPerDay;
    CHECK_THAT(word_failure_probability(det, T10s), WithinRel(9.9263757300961997059e-16, 1e-13));

    const auto prob =
        transient_roots(build_chain(Model::Probabilistic, rates_of(1e-5, 39, 8640.0)));
    CHECK_THAT(word_failure_probability(prob, 1.0), WithinRel(1.7150790954268907411e-11, 1e-12));
    CHECK_THAT(word_failure_probability(prob, 0.4), WithinRel(6.8591252168344837464e-12, 1e-12));
    // long-time survival is dominated by the slow decay rate
    CHECK_THAT(word_reliability(prob, 1.0).log_value, WithinRel(-prob.a2, 1e-4));
}

TEST_CASE("failure probability is continuous across the series/expm1 switch") {
    const auto det = transient_roots(build_chain(Model::Deterministic, rates_of(1e-5, 39)));
    const double t_lo = 0.499 / det.a1;
    const double t_hi = 0.501 / det.a1;
    CHECK_THAT(word_failure_probability(det, t_lo), WithinRel(0.068042336269913958832, 1e-12));
    CHECK_THAT(word_failure_probability(det, t_hi), WithinRel(0.068513179502354307738, 1e-12));
}

TEST_CASE("survival is monotone nonincreasing and falls to zero") {
    Rng rng(77, 0);
    for (int i = 0; i < 100; ++i) {
        const double lam = std::exp(-14.0 + 10.0 * rng.uniform_pos());
        const int n = 2 + static_cast<int>(rng.uniform_below(120));
        const double mu = rng.uniform_below(2) ? std::exp(-5.0 + 12.0 * rng.uniform_pos()) : 0.0;
        const auto roots = transient_roots(
            build_chain(Model::Probabilistic, rates_of(lam, n, mu)));
        double prev = 1.0;
        for (double t = 0.0; t <= 5.0 / roots.a2; t += 0.37 / roots.a2) {
            const double r = word_reliability(roots, t).value;
            REQUIRE(r <= prev + 1e-15);
            REQUIRE(r >= 0.0);
            prev = r;
        }
        REQUIRE(word_reliability(roots, 200.0 / roots.a2).value < 1e-12);
    }
}

TEST_CASE("ode oracle starts at the initial condition and conserves probability") {
    const auto chain = build_chain(Model::Probabilistic, rates_of(1e-3, 39, 86.4));
    const auto at0 = ode_oracle(chain, 0.0, 1e-3);
    CHECK(at0.p0 == 1.0);
    CHECK(at0.p1 == 0.0);
    CHECK(at0.p2 == 0.0);
    CHECK_THROWS_AS(ode_oracle(chain, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(ode_oracle(chain, -1.0, 1e-3), ValidationError);
    for (double t : {0.1, 1.0, 10.0}) {
        const auto p = ode_oracle(chain, t, 1e-4);
        REQUIRE_THAT(p.p0 + p.p1 + p.p2, WithinAbs(1.0, 1e-12));
        REQUIRE(p.p0 >= 0.0);
        REQUIRE(p.p1 >= 0.0);
        REQUIRE(p.p2 >= 0.0);
    }
}

TEST_CASE("closed form agrees with the ode oracle") {
    for (double mu_day : {0.0, 86.4}) {
        const auto rates = rates_of(1e-3, 39, mu_day);
        const Model model = mu_day > 0.0 ? Model::Probabilistic : Model::Deterministic;
        const auto chain = build_chain(model, rates);
        const auto roots = transient_roots(chain);
        for (double t : {0.1, 1.0, 10.0}) {
            const auto p = ode_oracle(chain, t, 1e-4);
            const double closed = word_reliability(roots, t).value;
            REQUIRE_THAT(closed, WithinAbs(p.reliability(), 1e-10));
        }
    }
}

TEST_CASE("ode oracle step-halving stays below 1e-12") {
    const auto chain = build_chain(Model::Probabilistic, rates_of(1e-3, 39, 86.4));
    const auto coarse = ode_oracle(chain, 2.0, 1e-4);
    const auto fine = ode_oracle(chain, 2.0, 5e-5);
    CHECK_THAT(coarse.reliability(), WithinAbs(fine.reliability(), 1e-12));
}
