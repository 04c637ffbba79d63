#include "wdro/models.hpp"

#include <algorithm>
#include <cmath>

namespace wdro {

namespace {

constexpr double kProbClamp = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double predict(const ModelParams& m, const Vector& x) {
    validate_model(m);
    const double score = augmented_dot(m.theta, x);
    return m.family == ModelFamily::Logistic ? sigmoid(score) : score;
}

LossEval loss(const ModelParams& m, const Vector& x, double y) {
    validate_model(m);
    const std::size_t p_x = x.size();
    const double score = augmented_dot(m.theta, x);

    LossEval out;
    out.grad_theta.assign(p_x + 1, 0.0);
    out.grad_x.assign(p_x, 0.0);

    // d(score)/dtheta = [x; 1], d(score)/dx = theta_{1..p_x}
    auto fill_grads = [&](double dscore, double dy) {
        for (std::size_t i = 0; i < p_x; ++i) {
            out.grad_theta[i] = dscore * x[i];
            out.grad_x[i] = dscore * m.theta[i];
        }
        out.grad_theta[p_x] = dscore;
        out.grad_y = dy;
    };

    switch (m.loss) {
        case LossKind::Quadratic: {
            const double r = score - y;
            out.value = 0.5 * r * r;
            fill_grads(r, -r);
            break;
        }
        case LossKind::Absolute: {
            const double r = score - y;
            const double s = sign0(r);
            out.value = std::abs(r);
            fill_grads(s, -s);
            break;
        }
        case LossKind::CrossEntropy: {
            if (y != 0.0 && y != 1.0)
                fail(ErrorKind::InvalidLabel, "logistic labels must be 0 or 1");
            const double p = clamp_prob(sigmoid(score));
            out.value = -y * std::log(p) - (1.0 - y) * std::log(1.0 - p);
            // d(loss)/d(score) = sigmoid(score) - y; d(loss)/dy = -score.
            fill_grads(sigmoid(score) - y, -score);
            break;
        }
    }
    return out;
}

double loss_value(const ModelParams& m, const Vector& x, double y) {
    const double score = augmented_dot(m.theta, x);
    switch (m.loss) {
        case LossKind::Quadratic: {
            const double r = score - y;
            return 0.5 * r * r;
        }
        case LossKind::Absolute:
            return std::abs(score - y);
        case LossKind::CrossEntropy: {
            if (y != 0.0 && y != 1.0)
                fail(ErrorKind::InvalidLabel, "logistic labels must be 0 or 1");
            const double p = clamp_prob(sigmoid(score));
            return -y * std::log(p) - (1.0 - y) * std::log(1.0 - p);
        }
    }
    return 0.0;
}

}  // namespace wdro
