#pragma once

#include <vector>

#include "wdro/core.hpp"

namespace wdro {

/// Finitely supported probability measure on R^m. Weights are nonnegative and
/// sum to 1 within kWeightSumTol.
struct DiscreteDistribution {
    std::vector<Vector> atoms;
    Vector weights;

    std::size_t size() const { return atoms.size(); }
    std::size_t dim() const { return atoms.empty() ? 0 : atoms.front().size(); }

    static DiscreteDistribution dirac(Vector point);
    static DiscreteDistribution uniform(std::vector<Vector> atoms);
};

void validate(const DiscreteDistribution& d);

/// Coupling between two discrete distributions; rows index source atoms,
/// columns destination atoms.
struct TransportPlan {
    Matrix mass;
};

/// Checks row sums against `source` and column sums against `dest` within
/// kMarginalTol.
void check_marginals(const TransportPlan& plan, const Vector& source, const Vector& dest);

struct TransportResult {
    double distance = 0.0;
    TransportPlan plan;
    /// Optimal duals of the transportation program:
    /// source_potential[i] + dest_potential[j] <= cost(i,j), equality on the
    /// support of the plan.
    Vector source_potential;
    Vector dest_potential;
};

/// Exact order-1 optimal transport between two finitely supported
/// distributions under the given ground norm, solved with the transportation
/// simplex. Desk scale (hundreds of atoms); throws SolverFailure if the pivot
/// guard is exceeded.
TransportResult wasserstein(const DiscreteDistribution& p, const DiscreteDistribution& q,
                            NormSpec norm);

/// Closed form for scalar atoms: integral of |F_p - F_q| over the merged
/// support. Must agree with wasserstein() within 1e-9.
double wasserstein_1d(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Evaluates a candidate Kantorovich potential. `potential` holds one value
/// per atom of the concatenated support [p.atoms..., q.atoms...]. Throws
/// NotLipschitz if any pair violates |f(z) - f(z')| <= ||z - z'|| beyond 1e-9.
/// By weak duality the returned value never exceeds wasserstein(p, q).
double kantorovich_dual_value(const DiscreteDistribution& p, const DiscreteDistribution& q,
                              NormSpec norm, const Vector& potential);

/// Builds an optimal 1-Lipschitz potential on the concatenated support from
/// the transportation duals; kantorovich_dual_value of it equals the primal
/// distance.
Vector optimal_potential(const DiscreteDistribution& p, const DiscreteDistribution& q,
                         NormSpec norm);

/// (1-beta) p + beta q on the union of supports; exactly equal atoms are
/// merged. beta = 0 returns p, beta = 1 returns q.
DiscreteDistribution mixture(const DiscreteDistribution& p, const DiscreteDistribution& q,
                             double beta);

/// Empirical distribution of a dataset: uniform mass 1/n on the joint points
/// (x_i, y_i), duplicates merged.
DiscreteDistribution empirical_distribution(const Dataset& d);

}  // namespace wdro
