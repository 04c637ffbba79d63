#include <doctest.h>

#include <cmath>

#include "wdro/regularizers.hpp"
#include "wdro/rng.hpp"

using namespace wdro;

namespace {

Dataset pool_dataset(Rng& rng, std::size_t n, std::size_t p_x) {
    Vector pool{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    Dataset d;
    for (std::size_t i = 0; i < n; ++i) {
        Record r;
        r.x.resize(p_x);
        for (double& v : r.x) v = rng.uniform(-2.0, 2.0);
        r.y = pool[rng.uniform_index(pool.size())];
        d.records.push_back(std::move(r));
    }
    return d;
}

}  // namespace

TEST_SUITE_BEGIN("regularizers");

TEST_CASE("tight regularizer basics") {
    Dataset single;
    single.records = {{{1.0}, 0.0}};
    const NormSpec norm{NormKind::L2};

    CHECK(tight_linear({0.0, 0.0}, single, norm).value == 0.0);
    // Residual 1, projected theta (1,0): value 1.
    CHECK(tight_linear({1.0, 0.0}, single, norm).value == doctest::Approx(1.0));
}

TEST_CASE("tight regularizer equals an exhaustive scan") {
    Rng rng(2);
    for (int t = 0; t < 40; ++t) {
        const std::size_t p_x = 1 + rng.uniform_index(4);
        const Dataset d = pool_dataset(rng, 4 + rng.uniform_index(12), p_x);
        Vector theta(p_x + 1);
        for (double& v : theta) v = rng.normal();
        for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
            const NormSpec norm{k};
            double max_res = 0.0;
            for (const Record& r : d.records)
                max_res = std::max(max_res, std::abs(augmented_dot(theta, r.x) - r.y));
            Vector w = theta;
            w.back() = 0.0;
            const double expected = max_res * dual_norm_value(w, k);
            CHECK(tight_linear(theta, d, norm).value ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("conservative regularizer closed form") {
    const NormSpec norm{NormKind::L2};
    CHECK(conservative_linear({0.0, 0.0}, {3.0, 2.0}, norm).value == 0.0);
    // Unit dual norm, degenerate bounds: (0+1)*1 + 0*1 = 1.
    CHECK(conservative_linear({1.0, 0.0}, {0.0, 0.0}, norm).value == doctest::Approx(1.0));
}

TEST_CASE("conservative dominates tight on matching bounds") {
    Rng rng(4);
    for (int t = 0; t < 60; ++t) {
        const std::size_t p_x = 1 + rng.uniform_index(4);
        const Dataset d = pool_dataset(rng, 4 + rng.uniform_index(12), p_x);
        Vector theta(p_x + 1);
        for (double& v : theta) v = (t % 17 == 0) ? 0.0 : rng.normal();
        const NormSpec norm{NormKind::L2};
        const DataBounds bounds = data_bounds(d, norm);
        CHECK(tight_linear(theta, d, norm).value <=
              conservative_linear(theta, bounds, norm).value + 1e-9);
    }
}

TEST_CASE("absolute-loss regularizer is the dual norm") {
    CHECK(absolute_linear({0.0, 0.0, 0.0}, NormSpec{NormKind::L2}).value == 0.0);
    CHECK(absolute_linear({3.0, 4.0, 0.0}, NormSpec{NormKind::L2}).value == doctest::Approx(5.0));
    // L1 ground norm pairs with the max norm.
    CHECK(absolute_linear({1.0, -1.0, 2.0}, NormSpec{NormKind::L1}).value == doctest::Approx(2.0));
}

TEST_CASE("logistic regularizer closed form") {
    const NormSpec norm{NormKind::L2};
    CHECK(logistic_reg({0.0, 0.0}, {1.0, 1.0}, norm).value == 0.0);
    CHECK(logistic_reg({1.0, 0.0}, {0.0, 1.0}, norm).value == doctest::Approx(3.0));

    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        Vector theta{rng.normal(), rng.normal(), rng.normal()};
        const DataBounds b{std::abs(rng.normal()), std::abs(rng.normal())};
        const double expected = (b.Y + b.X + 2.0) * dual_norm_value(theta, NormKind::L2);
        CHECK(logistic_reg(theta, b, norm).value == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("empirical lipschitz ratio basics") {
    const NormSpec norm{NormKind::L2};

    // Constant loss: logistic with theta = 0, pairs varying only in x.
    ModelParams logit{{0.0, 0.0}, ModelFamily::Logistic, LossKind::CrossEntropy};
    std::vector<SamplePair> pairs{{Record{{0.0}, 1.0}, Record{{2.0}, 1.0}}};
    CHECK(empirical_lipschitz(logit, pairs, norm) == 0.0);

    // Known ratio: absolute loss, difference 2 over distance 1.
    ModelParams abs_model{{2.0, 0.0}, ModelFamily::Linear, LossKind::Absolute};
    std::vector<SamplePair> one{{Record{{1.0}, 0.0}, Record{{0.0}, 0.0}}};
    CHECK(empirical_lipschitz(abs_model, one, norm) == doctest::Approx(2.0));

    std::vector<SamplePair> degenerate{{Record{{1.0}, 0.0}, Record{{1.0}, 0.0}}};
    CHECK_THROWS_AS(empirical_lipschitz(abs_model, degenerate, norm), Error);
}

TEST_CASE("sampled ratios stay below the closed forms on feature-only pairs") {
    Rng rng(10);
    for (int t = 0; t < 40; ++t) {
        const std::size_t p_x = 1 + rng.uniform_index(3);
        const Dataset d = pool_dataset(rng, 10, p_x);
        Vector theta(p_x + 1);
        for (double& v : theta) v = (t % 17 == 0) ? 0.0 : rng.normal();
        const NormSpec norm{NormKind::L2};
        const DataBounds bounds = data_bounds(d, norm);

        std::vector<SamplePair> pairs;
        for (std::size_t i = 0; i < d.records.size(); ++i)
            for (std::size_t j = i + 1; j < d.records.size(); ++j)
                if (d.records[i].y == d.records[j].y &&
                    distance(d.records[i].x, d.records[j].x, NormKind::L2) > 1e-9)
                    pairs.push_back({d.records[i], d.records[j]});
        if (pairs.empty()) continue;

        ModelParams quad{theta, ModelFamily::Linear, LossKind::Quadratic};
        const double emp = empirical_lipschitz(quad, pairs, norm);
        CHECK(emp <= tight_linear(theta, d, norm).value + 1e-9);
        CHECK(emp <= conservative_linear(theta, bounds, norm).value + 1e-9);

        ModelParams abs_model{theta, ModelFamily::Linear, LossKind::Absolute};
        CHECK(empirical_lipschitz(abs_model, pairs, norm) <=
              absolute_linear(theta, norm).value + 1e-9);
    }
}

TEST_CASE("positive homogeneity of the norm-based regularizers") {
    Rng rng(12);
    for (int t = 0; t < 30; ++t) {
        Vector theta{rng.normal(), rng.normal(), rng.normal()};
        const double c = rng.uniform(-3.0, 3.0);
        Vector scaled = theta;
        for (double& v : scaled) v *= c;
        const NormSpec norm{NormKind::L2};
        const DataBounds b{1.0, 2.0};
        CHECK(absolute_linear(scaled, norm).value ==
              doctest::Approx(std::abs(c) * absolute_linear(theta, norm).value).epsilon(1e-12));
        CHECK(logistic_reg(scaled, b, norm).value ==
              doctest::Approx(std::abs(c) * logistic_reg(theta, b, norm).value).epsilon(1e-12));
    }
}

TEST_CASE("closed-form subgradients satisfy the convexity inequality") {
    Rng rng(14);
    const NormSpec norm{NormKind::L2};
    for (int t = 0; t < 40; ++t) {
        const std::size_t p_x = 2;
        const Dataset d = pool_dataset(rng, 8, p_x);
        const DataBounds bounds = data_bounds(d, norm);
        Vector theta(p_x + 1), other(p_x + 1);
        for (double& v : theta) v = rng.normal();
        for (double& v : other) v = rng.normal();

        auto check_subgradient = [&](auto&& f) {
            const RegularizerEval at = f(theta);
            const RegularizerEval target = f(other);
            double lin = at.value;
            for (std::size_t k = 0; k <= p_x; ++k)
                lin += at.grad_theta[k] * (other[k] - theta[k]);
            CHECK(target.value >= lin - 1e-9);
        };
        check_subgradient([&](const Vector& v) { return conservative_linear(v, bounds, norm); });
        check_subgradient([&](const Vector& v) { return absolute_linear(v, norm); });
        check_subgradient([&](const Vector& v) { return logistic_reg(v, bounds, norm); });
    }
}

TEST_CASE("tight regularizer gradient matches finite differences at smooth points") {
    // The data-dependent form is a product of a residual max and the
    // projected dual norm; away from argmax ties, zero residuals and the
    // norm's kink, the product rule gives the exact gradient.
    Rng rng(16);
    const NormSpec norm{NormKind::L2};
    const double h = 1e-6;
    int done = 0;
    while (done < 30) {
        const std::size_t p_x = 1 + rng.uniform_index(3);
        const Dataset d = pool_dataset(rng, 6, p_x);
        Vector theta(p_x + 1);
        for (double& v : theta) v = rng.normal();

        // Smoothness guards: unique argmax with a clear gap, nonzero
        // residual, theta away from 0.
        std::vector<double> residuals;
        for (const Record& r : d.records)
            residuals.push_back(std::abs(augmented_dot(theta, r.x) - r.y));
        std::vector<double> sorted = residuals;
        std::sort(sorted.begin(), sorted.end());
        const double top = sorted.back();
        const double second = sorted[sorted.size() - 2];
        Vector w = theta;
        w.back() = 0.0;
        if (top - second < 1e-3 || top < 1e-3 || dual_norm_value(w, NormKind::L2) < 1e-3) continue;

        const RegularizerEval at = tight_linear(theta, d, norm);
        for (std::size_t k = 0; k <= p_x; ++k) {
            Vector tp = theta, tm = theta;
            tp[k] += h;
            tm[k] -= h;
            const double fd =
                (tight_linear(tp, d, norm).value - tight_linear(tm, d, norm).value) / (2.0 * h);
            CHECK(at.grad_theta[k] == doctest::Approx(fd).epsilon(1e-4));
        }
        ++done;
    }
}

TEST_SUITE_END();
