#include <catch2/catch_amalgamated.hpp>

#include "scrubrel/config.hpp"
#include "scrubrel/rng.hpp"

using namespace scrubrel;
using Catch::Matchers::WithinRel;

TEST_CASE("sec_ded_check_bits matches the published word sizes") {
    CHECK(sec_ded_check_bits(32) == 7);
    CHECK(sec_ded_check_bits(64) == 8);
    // exhaustive check of 2^(c-1) >= w + c for w = 1: c = 1, 2 fail, 3 holds
    CHECK(sec_ded_check_bits(1) == 3);
    CHECK(sec_ded_check_bits(16) == 6);
    CHECK_THROWS_AS(sec_ded_check_bits(0), ValidationError);
}

TEST_CASE("sec_ded_check_bits is monotone nondecreasing") {
    int prev = sec_ded_check_bits(1);
    for (int w = 2; w <= 4096; ++w) {
        const int c = sec_ded_check_bits(w);
        REQUIRE(c >= prev);
        prev = c;
    }
}

TEST_CASE("words_from_megabytes counts data capacity only") {
    CHECK(words_from_megabytes(1, 32) == 262144);
    CHECK(words_from_megabytes(1, 64) == 131072);
    CHECK(words_from_megabytes(128, 32) == 33554432);
    CHECK_THROWS_AS(words_from_megabytes(1, 7), ValidationError);
    CHECK_THROWS_AS(words_from_megabytes(0, 32), ValidationError);
}

TEST_CASE("words_from_megabytes doubles exactly with the size") {
    Rng rng(20240809, 0);
    const int word_sizes[] = {8, 16, 32, 64, 128};
    for (int i = 0; i < 50; ++i) {
        const std::int64_t mb = 1 + static_cast<std::int64_t>(rng.uniform_below(512));
        const int w = word_sizes[rng.uniform_below(5)];
        REQUIRE(words_from_megabytes(2 * mb, w) == 2 * words_from_megabytes(mb, w));
    }
}

namespace {

ScrubConfig base_config(Model m) {
    ScrubConfig cfg;
    cfg.lambda_per_bit_day = 1e-5;
    cfg.data_bits = 32;
    cfg.check_bits = 7;
    cfg.memory_words = 262144;
    cfg.scrub_period_seconds = 10.0;
    cfg.scrub_rate_per_second = 0.1;
    cfg.model = m;
    return cfg;
}

} // namespace

TEST_CASE("canonicalize converts with exactly 86400 s/day") {
    const CanonicalRates r = canonicalize(base_config(Model::Mixed));
    CHECK(r.lambda_day == 1e-5);
    REQUIRE(r.mu_day.has_value());
    CHECK(*r.mu_day == 0.1 * kSecondsPerDay);
    CHECK_THAT(*r.mu_day, WithinRel(8640.0, 1e-12));
    REQUIRE(r.period_days.has_value());
    CHECK(*r.period_days == 10.0 / kSecondsPerDay);
    CHECK_THAT(*r.period_days, WithinRel(1.157407407407407e-4, 1e-12));
    CHECK(r.total_bits_n == 39);
}

TEST_CASE("canonicalize drops fields the model does not use") {
    const CanonicalRates prob = canonicalize(base_config(Model::Probabilistic));
    CHECK(prob.mu_day.has_value());
    CHECK_FALSE(prob.period_days.has_value()); // period present but ignored
    const CanonicalRates det = canonicalize(base_config(Model::Deterministic));
    CHECK(det.period_days.has_value());
    CHECK_FALSE(det.mu_day.has_value());
}

TEST_CASE("unit conversion round-trips to machine precision") {
    Rng rng(7, 0);
    for (int i = 0; i < 200; ++i) {
        const double x = std::exp((rng.uniform_pos() - 0.5) * 20.0);
        CHECK_THAT(x * kSecondsPerDay / kSecondsPerDay, WithinRel(x, 1e-15));
        CHECK_THAT(x / kSecondsPerDay * kSecondsPerDay, WithinRel(x, 1e-15));
    }
}

TEST_CASE("validation rejects inconsistent parameter sets") {
    auto cfg = base_config(Model::Probabilistic);
    cfg.scrub_rate_per_second.reset();
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = base_config(Model::Deterministic);
    cfg.scrub_period_seconds.reset();
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = base_config(Model::Mixed);
    cfg.scrub_period_seconds.reset();
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = base_config(Model::Mixed);
    cfg.scrub_rate_per_second.reset();
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = base_config(Model::Deterministic);
    cfg.data_bits = 1;
    cfg.check_bits = 0; // one-bit word cannot hold two co-existing errors
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = base_config(Model::Deterministic);
    cfg.lambda_per_bit_day = -1e-9;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = base_config(Model::Deterministic);
    cfg.memory_words = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = base_config(Model::Deterministic);
    cfg.scrub_period_seconds = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("zero rates are accepted as explicit degenerates") {
    auto cfg = base_config(Model::Probabilistic);
    cfg.lambda_per_bit_day = 0.0;
    CHECK_NOTHROW(cfg.validate());
    cfg = base_config(Model::Probabilistic);
    cfg.scrub_rate_per_second = 0.0; // no-scrub diagnostic kernel
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("model names round-trip") {
    for (Model m : {Model::Probabilistic, Model::Deterministic, Model::Mixed}) {
        const auto back = model_from_string(to_string(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(model_from_string("periodic").has_value());
    CHECK(model_from_string("det") == Model::Deterministic);
}
