#include <doctest.h>

#include <cmath>

#include "wdro/concentration.hpp"
#include "wdro/rng.hpp"
#include "wdro/transport.hpp"

using namespace wdro;

TEST_SUITE_BEGIN("concentration");

TEST_CASE("rate with unit arguments") {
    // log(c1/gamma) = 1, c2 = 1, n = 1: base is 1 regardless of the exponent.
    ConcentrationParams params;
    params.c1 = std::exp(1.0) * 0.3;
    params.gamma = 0.3;
    params.c2 = 1.0;
    params.a = 1.5;
    params.p = 5;
    CHECK(concentration_rate(params, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate on the fast branch: cube root of one quarter") {
    ConcentrationParams params;
    params.c1 = std::exp(1.0) * 0.2;
    params.gamma = 0.2;  // log term = 1
    params.c2 = 1.0;
    params.a = 1.5;
    params.p = 3;
    // n = 4 >= 1, so the exponent is 1/max(p,2) = 1/3.
    const double expected = std::pow(0.25, 1.0 / 3.0);
    CHECK(concentration_rate(params, 4) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("rate on the slow branch uses the tail exponent") {
    ConcentrationParams params;
    params.c1 = std::exp(10.0) * 0.1;
    params.gamma = 0.1;  // log term = 10
    params.c2 = 1.0;
    params.a = 1.5;
    params.p = 3;
    // n = 4 < 10: exponent 1/a.
    const double expected = std::pow(10.0 / 4.0, 1.0 / 1.5);
    CHECK(concentration_rate(params, 4) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("tenfold sample growth shrinks the fast-branch rate by the right factor") {
    ConcentrationParams params;
    params.c1 = std::exp(1.0) * 0.15;
    params.gamma = 0.15;
    params.c2 = 2.0;
    params.a = 2.5;
    params.p = 4;
    const std::size_t n = 7;  // both n and 10n on the fast branch
    const double ratio = concentration_rate(params, 10 * n) / concentration_rate(params, n);
    CHECK(ratio == doctest::Approx(std::pow(10.0, -1.0 / 4.0)).epsilon(1e-12));
}

TEST_CASE("rate is strictly decreasing in n and gamma") {
    Rng rng(3);
    for (int t = 0; t < 60; ++t) {
        ConcentrationParams params;
        params.c1 = std::exp(1.0);
        params.gamma = 0.05 + 0.4 * rng.uniform01();
        params.c2 = 0.2 + rng.uniform01();
        params.a = 1.2 + rng.uniform01();
        params.p = (t % 2 == 0) ? 1 : 3 + rng.uniform_index(3);
        const std::size_t n = 1 + rng.uniform_index(200);
        CHECK(concentration_rate(params, n + 5) < concentration_rate(params, n));

        ConcentrationParams larger = params;
        larger.gamma = params.gamma + 0.2;
        CHECK(concentration_rate(larger, n) < concentration_rate(params, n));
    }
}

TEST_CASE("vacuous configurations are rejected") {
    ConcentrationParams params;
    params.c1 = 0.05;
    params.gamma = 0.1;  // c1/gamma < 1
    params.p = 3;
    CHECK_THROWS_AS(concentration_rate(params, 10), Error);
}

TEST_CASE("radius arithmetic") {
    // rate(beta) = 1 and no displacement.
    ConcentrationParams params;
    params.c1 = std::exp(1.0) * 0.3;
    params.c2 = 1.0;
    params.a = 1.5;
    params.p = 3;
    CHECK(ambiguity_radius(params, 1, 0.3, 0.0) == doctest::Approx(1.0));

    // rate(beta) = 0.5, beta = 0.1, W(Q,P) = 2 -> 0.7.
    ConcentrationParams half;
    half.c1 = std::exp(1.0) * 0.1;
    half.c2 = 4.0;
    half.a = 1.5;
    half.p = 1;  // max(p,2) = 2, so rate = sqrt(1/4)
    CHECK(ambiguity_radius(half, 1, 0.1, 2.0) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("radius against a transport-computed displacement") {
    const auto p = DiscreteDistribution::uniform({{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
    const auto q = DiscreteDistribution::uniform({{0.5, 0.0, 0.0}, {1.5, 0.0, 0.0}});
    const double w = wasserstein(q, p, NormSpec{NormKind::L2}).distance;
    CHECK(w == doctest::Approx(0.5).epsilon(1e-12));

    ConcentrationParams params;
    params.c1 = std::exp(1.0) * 0.2;
    params.c2 = 1.0;
    params.a = 1.5;
    params.p = 3;
    const double beta = 0.2;
    ConcentrationParams at_beta = params;
    at_beta.gamma = beta;
    const double hand_sum = concentration_rate(at_beta, 25) + beta * w;
    CHECK(ambiguity_radius(params, 25, beta, w) == doctest::Approx(hand_sum).epsilon(1e-14));
}

TEST_CASE("empirical sampling is deterministic and well-formed") {
    const auto base = DiscreteDistribution::uniform({{0.0}, {1.0}, {2.0}});
    const auto a = sample_empirical(base, 100, 42);
    const auto b = sample_empirical(base, 100, 42);
    CHECK(a.atoms == b.atoms);
    CHECK(a.weights == b.weights);
    CHECK_NOTHROW(validate(a));
}

TEST_CASE("calibrated constants give clean-data coverage") {
    const auto base = DiscreteDistribution::uniform(
        {{0.0, 0.0, 0.0}, {1.0, 0.5, 0.0}, {0.2, 0.8, 0.4}, {0.9, 0.1, 0.7}});
    const auto contaminant = DiscreteDistribution::uniform(
        {{0.5, 0.5, 0.5}, {1.5, 1.0, 0.5}, {0.7, 1.3, 0.9}});

    const CalibrationResult cal =
        calibrate_concentration(base, {50}, {0.2}, 120, 77, 2.0, 3);
    CHECK(cal.c2 > 0.0);

    ConcentrationParams params;
    params.c1 = cal.c1;
    params.c2 = cal.c2;
    params.a = 2.0;
    params.p = 3;
    const CoverageCell cell = coverage_cell(base, contaminant, 0.2, params, 0.2, 50, 120, 99,
                                            NormSpec{NormKind::L2});
    CHECK(cell.pass);
    CHECK(cell.frequency >= 0.8);
}

TEST_SUITE_END();
