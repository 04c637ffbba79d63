#pragma once

#include <utility>
#include <vector>

#include "wdro/core.hpp"
#include "wdro/models.hpp"

namespace wdro {

/// Value and a subgradient of a Lipschitz-constant regularizer L(theta).
struct RegularizerEval {
    double value = 0.0;
    Vector grad_theta;
};

/// Zero the intercept coordinate: the feature projection behind the
/// regularizers (the ground metric only moves (x, y), never the constant 1).
Vector project_features(const Vector& theta);

/// Data-dependent linear-regression regularizer:
/// [max_i |theta^T [x_i; 1] - y_i|] * dual_norm(projected theta). The max over
/// the training records stands in for the max over the data domain; the
/// subgradient uses the lowest-index argmax record.
RegularizerEval tight_linear(const Vector& theta, const Dataset& d, NormSpec norm);

/// Closed-form bound (X + 1) * ||theta||_*^2 + Y * ||theta||_*.
/// Larger than tight_linear on the dataset the bounds came from.
RegularizerEval conservative_linear(const Vector& theta, DataBounds bounds, NormSpec norm);

/// Absolute-loss regularizer ||theta||_*.
RegularizerEval absolute_linear(const Vector& theta, NormSpec norm);

/// Logistic regularizer (Y + X + 2) * ||theta||_*.
RegularizerEval logistic_reg(const Vector& theta, DataBounds bounds, NormSpec norm);

/// A sampled pair of joint points ((x, y), (x', y')).
using SamplePair = std::pair<Record, Record>;

/// max over pairs of |loss(x,y) - loss(x',y')| / ||(x,y) - (x',y')|| — a lower
/// bound on the loss's Lipschitz constant in the data argument. Throws
/// DegeneratePair when a pair is closer than 1e-12 under the ground norm.
double empirical_lipschitz(const ModelParams& m, const std::vector<SamplePair>& sample_pairs,
                           NormSpec norm);

}  // namespace wdro
