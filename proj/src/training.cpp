#include "wdro/training.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wdro/regularizers.hpp"

namespace wdro {

namespace {

struct Penalty {
    // raw regularizer L(theta); the penalty added to the mean loss is
    // rho * L(theta) (weight mode folds the weights into L and uses rho = 1)
    std::function<RegularizerEval(const Vector&)> eval;
    double rho = 1.0;
};

Penalty make_penalty(const Dataset& d, ModelFamily family, LossKind loss_kind,
                     const RobustConfig& cfg, NormSpec norm) {
    if (cfg.weights) {
        const TermWeights w = *cfg.weights;
        return {[w, norm](const Vector& theta) {
                    const double tn = dual_norm_value(theta, norm.kind);
                    RegularizerEval e;
                    e.value = w.squared * tn * tn + w.plain * tn;
                    const Vector dn = dual_norm_subgradient(theta, norm.kind);
                    const double factor = 2.0 * w.squared * tn + w.plain;
                    e.grad_theta.assign(theta.size(), 0.0);
                    for (std::size_t i = 0; i < theta.size(); ++i)
                        e.grad_theta[i] = factor * dn[i];
                    return e;
                },
                1.0};
    }

    switch (cfg.regularizer) {
        case RegularizerKind::None:
            return {[](const Vector& theta) {
                        RegularizerEval e;
                        e.grad_theta.assign(theta.size(), 0.0);
                        return e;
                    },
                    cfg.rho};
        case RegularizerKind::TightLinear: {
            if (family != ModelFamily::Linear || loss_kind != LossKind::Quadratic)
                fail(ErrorKind::IncompatibleRegularizer,
                     "tight_linear requires the linear/quadratic model");
            const Dataset* data = &d;
            return {[data, norm](const Vector& theta) { return tight_linear(theta, *data, norm); },
                    cfg.rho};
        }
        case RegularizerKind::ConservativeLinear: {
            if (family != ModelFamily::Linear || loss_kind != LossKind::Quadratic)
                fail(ErrorKind::IncompatibleRegularizer,
                     "conservative_linear requires the linear/quadratic model");
            const DataBounds bounds = data_bounds(d, norm);
            return {[bounds, norm](const Vector& theta) {
                        return conservative_linear(theta, bounds, norm);
                    },
                    cfg.rho};
        }
        case RegularizerKind::AbsoluteLoss: {
            if (family != ModelFamily::Linear || loss_kind != LossKind::Absolute)
                fail(ErrorKind::IncompatibleRegularizer,
                     "absolute_loss regularizer requires the linear/absolute model");
            const bool squared = cfg.absolute_penalty_squared;
            return {[squared, norm](const Vector& theta) {
                        RegularizerEval e = absolute_linear(theta, norm);
                        if (squared) {
                            const double tn = e.value;
                            for (double& g : e.grad_theta) g *= 2.0 * tn;
                            e.value = tn * tn;
                        }
                        return e;
                    },
                    cfg.rho};
        }
        case RegularizerKind::Logistic: {
            if (family != ModelFamily::Logistic)
                fail(ErrorKind::IncompatibleRegularizer,
                     "logistic regularizer requires the logistic model");
            const DataBounds bounds = data_bounds(d, norm);
            return {[bounds, norm](const Vector& theta) {
                        return logistic_reg(theta, bounds, norm);
                    },
                    cfg.rho};
        }
    }
    fail(ErrorKind::InvalidParams, "unknown regularizer kind");
}

}  // namespace

TrainReport train(const Dataset& d, ModelFamily family, LossKind loss_kind,
                  const RobustConfig& cfg, const TrainConfig& tc, NormSpec norm) {
    validate_dataset(d);
    validate(cfg);
    if (tc.max_iters < 1 || !(tc.step0 > 0.0) || !(tc.tol >= 0.0))
        fail(ErrorKind::InvalidParams, "train config must have positive iterations and step");

    const std::size_t p = d.feature_dim() + 1;
    const double inv_n = 1.0 / static_cast<double>(d.size());
    const Penalty penalty = make_penalty(d, family, loss_kind, cfg, norm);

    ModelParams model;
    model.family = family;
    model.loss = loss_kind;
    model.theta.assign(p, 0.0);
    validate_model(model);

    auto objective_parts = [&](const ModelParams& m) {
        double mean = 0.0;
        for (const Record& r : d.records) mean += loss_value(m, r.x, r.y);
        mean *= inv_n;
        const RegularizerEval reg = penalty.eval(m.theta);
        return std::tuple<double, double, double>(mean + penalty.rho * reg.value, mean, reg.value);
    };

    // Best-iterate tracking: theta = 0 is probed first, so a dominating
    // penalty can never report anything worse than the start.
    ModelParams best = model;
    auto [best_obj, best_mean, best_reg] = objective_parts(model);

    TrainReport report;
    report.converged = false;

    double window_best = best_obj;
    std::size_t it = 0;
    for (it = 1; it <= tc.max_iters; ++it) {
        // Subgradient of the mean loss plus the penalty.
        Vector grad(p, 0.0);
        for (const Record& r : d.records) {
            const LossEval le = loss(model, r.x, r.y);
            for (std::size_t k = 0; k < p; ++k) grad[k] += le.grad_theta[k];
        }
        for (std::size_t k = 0; k < p; ++k) grad[k] *= inv_n;
        const RegularizerEval reg = penalty.eval(model.theta);
        for (std::size_t k = 0; k < p; ++k) grad[k] += penalty.rho * reg.grad_theta[k];

        const double step = tc.step0 / std::sqrt(static_cast<double>(it));
        for (std::size_t k = 0; k < p; ++k) model.theta[k] -= step * grad[k];

        // A dominating penalty can blow the iterates up; the best iterate
        // seen so far (at worst the zero start) remains the report.
        if (!all_finite(model.theta)) break;

        const auto [obj, mean, regv] = objective_parts(model);
        if (obj < best_obj) {
            best_obj = obj;
            best_mean = mean;
            best_reg = regv;
            best = model;
        }

        if (it % 50 == 0) {
            if (window_best - best_obj < tc.tol) {
                report.converged = true;
                break;
            }
            window_best = best_obj;
        }
    }

    report.theta_hat = best;
    report.objective = best_obj;
    report.empirical_loss = best_mean;
    report.rho = penalty.rho;
    report.regularizer_value = best_reg;
    report.iterations = std::min(it, tc.max_iters);
    return report;
}

double evaluate(const ModelParams& theta, const Dataset& d) {
    validate_model(theta);
    validate_dataset(d);
    if (theta.theta.size() != d.feature_dim() + 1)
        fail(ErrorKind::DimensionMismatch, "theta length does not match dataset feature dim + 1");
    double mean = 0.0;
    for (const Record& r : d.records) mean += loss_value(theta, r.x, r.y);
    return mean / static_cast<double>(d.size());
}

}  // namespace wdro
