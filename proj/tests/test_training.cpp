#include <doctest.h>

#include <cmath>
#include <cstring>

#include "wdro/data.hpp"
#include "wdro/oracle.hpp"
#include "wdro/training.hpp"

using namespace wdro;

TEST_SUITE_BEGIN("training");

TEST_CASE("noiseless quadratic training recovers the generator") {
    const Vector theta_star{0.7, -0.4, 0.2, 0.1};
    const Dataset d = synth_linear(50, 3, theta_star, 0.0, 404);

    RobustConfig cfg;
    TrainConfig tc;
    tc.max_iters = 20000;
    tc.tol = 0.0;
    const TrainReport rep =
        train(d, ModelFamily::Linear, LossKind::Quadratic, cfg, tc, NormSpec{NormKind::L2});
    for (std::size_t k = 0; k < theta_star.size(); ++k)
        CHECK(rep.theta_hat.theta[k] == doctest::Approx(theta_star[k]).epsilon(1e-4));
    CHECK(rep.objective < 1e-8);
}

TEST_CASE("training matches the normal equations at zero radius") {
    const Vector theta_star{0.5, 0.3, -0.2};
    const Dataset d = synth_linear(80, 2, theta_star, 0.2, 505);

    RobustConfig cfg;
    TrainConfig tc;
    tc.max_iters = 30000;
    tc.tol = 0.0;
    const TrainReport rep =
        train(d, ModelFamily::Linear, LossKind::Quadratic, cfg, tc, NormSpec{NormKind::L2});
    const Vector exact = oracle::least_squares_fit(d);
    for (std::size_t k = 0; k < exact.size(); ++k)
        CHECK(std::abs(rep.theta_hat.theta[k] - exact[k]) < 1e-4);
}

TEST_CASE("a dominating penalty reports the zero start") {
    const Dataset d = synth_linear(30, 2, {1.0, 1.0, 0.5}, 0.1, 606);
    RobustConfig cfg;
    cfg.regularizer = RegularizerKind::ConservativeLinear;
    cfg.rho = 1e6;
    TrainConfig tc;
    tc.max_iters = 300;
    const TrainReport rep =
        train(d, ModelFamily::Linear, LossKind::Quadratic, cfg, tc, NormSpec{NormKind::L2});
    CHECK(dual_norm_value(rep.theta_hat.theta, NormKind::L2) < 1e-3);
}

TEST_CASE("objective is continuous at tiny radii") {
    const Dataset d = synth_linear(40, 2, {0.4, -0.6, 0.1}, 0.1, 707);
    TrainConfig tc;
    tc.max_iters = 6000;

    RobustConfig none;
    RobustConfig tiny;
    tiny.regularizer = RegularizerKind::ConservativeLinear;
    tiny.rho = 1e-9;
    const double j0 =
        train(d, ModelFamily::Linear, LossKind::Quadratic, none, tc, NormSpec{NormKind::L2})
            .objective;
    const double j1 =
        train(d, ModelFamily::Linear, LossKind::Quadratic, tiny, tc, NormSpec{NormKind::L2})
            .objective;
    CHECK(std::abs(j0 - j1) < 1e-6);
}

TEST_CASE("report invariants hold") {
    const Dataset d = synth_linear(30, 2, {0.4, 0.2, 0.0}, 0.3, 808);
    RobustConfig cfg;
    cfg.regularizer = RegularizerKind::TightLinear;
    cfg.rho = 0.05;
    TrainConfig tc;
    tc.max_iters = 2000;
    const TrainReport rep =
        train(d, ModelFamily::Linear, LossKind::Quadratic, cfg, tc, NormSpec{NormKind::L2});

    CHECK(rep.objective ==
          doctest::Approx(rep.empirical_loss + rep.rho * rep.regularizer_value).epsilon(1e-10));

    // The reported objective is attained by the reported parameters.
    const double mean = evaluate(rep.theta_hat, d);
    CHECK(mean == doctest::Approx(rep.empirical_loss).epsilon(1e-12));
}

TEST_CASE("training is bitwise deterministic") {
    const Dataset d = synth_linear(25, 3, {0.1, 0.2, 0.3, 0.0}, 0.2, 909);
    RobustConfig cfg;
    cfg.weights = TermWeights{0.01, 0.02};
    TrainConfig tc;
    tc.max_iters = 1500;
    const TrainReport a =
        train(d, ModelFamily::Linear, LossKind::Quadratic, cfg, tc, NormSpec{NormKind::L2});
    const TrainReport b =
        train(d, ModelFamily::Linear, LossKind::Quadratic, cfg, tc, NormSpec{NormKind::L2});
    CHECK(a.objective == b.objective);
    CHECK(std::memcmp(a.theta_hat.theta.data(), b.theta_hat.theta.data(),
                      sizeof(double) * a.theta_hat.theta.size()) == 0);
}

TEST_CASE("evaluate basics") {
    Dataset d;
    d.records = {{{1.0}, 3.0}, {{2.0}, 5.0}};
    ModelParams fit{{2.0, 1.0}, ModelFamily::Linear, LossKind::Quadratic};
    CHECK(evaluate(fit, d) == 0.0);

    Dataset labels;
    labels.records = {{{0.5}, 1.0}, {{-0.5}, 0.0}};
    ModelParams logit{{0.0, 0.0}, ModelFamily::Logistic, LossKind::CrossEntropy};
    CHECK(evaluate(logit, labels) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("incompatible regularizers are rejected") {
    const Dataset d = synth_linear(10, 2, {0.1, 0.1, 0.0}, 0.0, 111);
    RobustConfig cfg;
    cfg.regularizer = RegularizerKind::Logistic;
    cfg.rho = 0.1;
    TrainConfig tc;
    CHECK_THROWS_AS(train(d, ModelFamily::Linear, LossKind::Quadratic, cfg, tc,
                          NormSpec{NormKind::L2}),
                    Error);

    cfg.regularizer = RegularizerKind::TightLinear;
    CHECK_THROWS_AS(train(d, ModelFamily::Linear, LossKind::Absolute, cfg, tc,
                          NormSpec{NormKind::L2}),
                    Error);
}

TEST_CASE("absolute loss objective supports both penalty variants") {
    const Dataset d = synth_linear(30, 2, {0.4, -0.3, 0.1}, 0.1, 212);
    RobustConfig cfg;
    cfg.regularizer = RegularizerKind::AbsoluteLoss;
    cfg.rho = 0.05;
    TrainConfig tc;
    tc.max_iters = 3000;

    const TrainReport plain =
        train(d, ModelFamily::Linear, LossKind::Absolute, cfg, tc, NormSpec{NormKind::L2});
    const double tn = dual_norm_value(plain.theta_hat.theta, NormKind::L2);
    CHECK(plain.regularizer_value == doctest::Approx(tn).epsilon(1e-12));

    RobustConfig squared = cfg;
    squared.absolute_penalty_squared = true;
    const TrainReport lit =
        train(d, ModelFamily::Linear, LossKind::Absolute, squared, tc, NormSpec{NormKind::L2});
    const double tn2 = dual_norm_value(lit.theta_hat.theta, NormKind::L2);
    CHECK(lit.regularizer_value == doctest::Approx(tn2 * tn2).epsilon(1e-12));
}

TEST_SUITE_END();
