#pragma once

#include <cstdint>

#include "wdro/core.hpp"
#include "wdro/models.hpp"

namespace wdro {

/// Subgradient-descent settings. Steps follow step0 / sqrt(t); the run stops
/// early when the best objective improves by less than `tol` over a
/// 50-iteration window. Deterministic: the seed is recorded but the start is
/// always theta = 0.
struct TrainConfig {
    std::size_t max_iters = 5000;
    double step0 = 1.0;
    double tol = 1e-8;
    std::uint64_t seed = 0;
};

struct TrainReport {
    ModelParams theta_hat;
    double objective = 0.0;        // best value of empirical loss + penalty
    double empirical_loss = 0.0;   // sample-average term at theta_hat
    double regularizer_value = 0.0;
    double rho = 0.0;              // objective = empirical_loss + rho * regularizer_value
    std::size_t iterations = 0;
    bool converged = false;
};

/// Solve the regularized sample-average problem for the given model family
/// and loss by deterministic subgradient descent with best-iterate
/// reporting. With weights set in the config the penalty is
/// weights.squared * ||theta||_*^2 + weights.plain * ||theta||_* (rho is
/// reported as 1); otherwise rho * L(theta) for the configured regularizer.
TrainReport train(const Dataset& d, ModelFamily family, LossKind loss_kind,
                  const RobustConfig& cfg, const TrainConfig& tc, NormSpec norm);

/// Exact sample-average loss of the model on a dataset.
double evaluate(const ModelParams& theta, const Dataset& d);

}  // namespace wdro
