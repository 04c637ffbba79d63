#pragma once

#include "wdro/core.hpp"

namespace wdro {

/// Loss value together with the exact gradients used by the trainer and the
/// Lipschitz machinery. For the absolute loss the gradients are subgradients
/// with sign(0) = 0.
struct LossEval {
    double value = 0.0;
    Vector grad_theta;  // length p_x + 1
    Vector grad_x;      // length p_x
    double grad_y = 0.0;
};

/// Linear: theta^T [x; 1]. Logistic: sigmoid of the same score, in (0,1).
double predict(const ModelParams& m, const Vector& x);

/// Loss and gradients at a single observation. Logistic labels must be 0 or
/// 1; predictions are clamped to [1e-12, 1 - 1e-12] before the logs.
LossEval loss(const ModelParams& m, const Vector& x, double y);

/// Loss value only (cheaper inner loop for training/evaluation).
double loss_value(const ModelParams& m, const Vector& x, double y);

}  // namespace wdro
