#include <doctest.h>

#include <cmath>

#include "wdro/models.hpp"
#include "wdro/rng.hpp"
#include "wdro/verify.hpp"

using namespace wdro;

TEST_SUITE_BEGIN("models");

TEST_CASE("predict: intercept-only, sigmoid at zero, dot product") {
    ModelParams intercept_only{{0.0, 0.0, 2.5}, ModelFamily::Linear, LossKind::Quadratic};
    CHECK(predict(intercept_only, {7.0, -3.0}) == doctest::Approx(2.5));

    ModelParams logit{{0.0, 0.0, 0.0}, ModelFamily::Logistic, LossKind::CrossEntropy};
    CHECK(predict(logit, {4.0, 5.0}) == doctest::Approx(0.5));

    ModelParams lin{{1.0, 2.0, 3.0}, ModelFamily::Linear, LossKind::Quadratic};
    CHECK(predict(lin, {4.0, 5.0}) == doctest::Approx(17.0));

    CHECK_THROWS_AS(predict(lin, {4.0}), Error);
}

TEST_CASE("quadratic loss at a perfect fit") {
    ModelParams m{{1.0, 1.0, 0.0}, ModelFamily::Linear, LossKind::Quadratic};
    const Vector x{2.0, 3.0};
    const LossEval le = loss(m, x, 5.0);
    CHECK(le.value == 0.0);
    for (double g : le.grad_theta) CHECK(g == 0.0);
    for (double g : le.grad_x) CHECK(g == 0.0);
    CHECK(le.grad_y == 0.0);
}

TEST_CASE("logistic loss at theta = 0") {
    ModelParams m{{0.0, 0.0}, ModelFamily::Logistic, LossKind::CrossEntropy};
    const LossEval le = loss(m, {1.0}, 1.0);
    CHECK(le.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(le.grad_y == 0.0);  // -[x 1] theta with theta = 0

    CHECK_THROWS_AS(loss(m, {1.0}, 0.5), Error);
    try {
        loss(m, {1.0}, 0.5);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidLabel);
    }
}

TEST_CASE("absolute loss takes the zero subgradient at the kink") {
    ModelParams m{{1.0, 0.0}, ModelFamily::Linear, LossKind::Absolute};
    const LossEval le = loss(m, {2.0}, 2.0);  // residual exactly 0
    CHECK(le.value == 0.0);
    CHECK(le.grad_theta[0] == 0.0);
    CHECK(le.grad_x[0] == 0.0);
    CHECK(le.grad_y == 0.0);
}

TEST_CASE("gradients match central finite differences") {
    CHECK(verify::gradient_check_worst_error(1234, 120) < 1e-5);
}

TEST_CASE("logistic loss is nonnegative and midpoint-convex in theta") {
    Rng rng(8);
    for (int t = 0; t < 60; ++t) {
        const std::size_t p_x = 1 + rng.uniform_index(4);
        Vector a(p_x + 1), b(p_x + 1), x(p_x);
        for (double& v : a) v = rng.normal();
        for (double& v : b) v = rng.normal();
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        const double y = static_cast<double>(rng.uniform_index(2));

        Vector mid(p_x + 1);
        for (std::size_t k = 0; k <= p_x; ++k) mid[k] = 0.5 * (a[k] + b[k]);

        ModelParams ma{a, ModelFamily::Logistic, LossKind::CrossEntropy};
        ModelParams mb{b, ModelFamily::Logistic, LossKind::CrossEntropy};
        ModelParams mm{mid, ModelFamily::Logistic, LossKind::CrossEntropy};
        const double fa = loss_value(ma, x, y);
        const double fb = loss_value(mb, x, y);
        const double fm = loss_value(mm, x, y);
        CHECK(fa >= 0.0);
        CHECK(fm <= 0.5 * (fa + fb) + 1e-9);
    }
}

TEST_SUITE_END();
