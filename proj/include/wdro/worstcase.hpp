#pragma once

#include <vector>

#include "wdro/core.hpp"
#include "wdro/transport.hpp"

namespace wdro {

/// Worst-case expected loss over a transport ball with finite candidate
/// support. The center is the empirical distribution; `candidates` is the
/// support the adversarial distribution may use and must contain every center
/// atom (so radius 0 is feasible). `losses` holds one loss value per
/// candidate for a fixed model.
struct AmbiguityInstance {
    DiscreteDistribution center;
    std::vector<Vector> candidates;
    Vector losses;
    double rho = 0.0;
    NormSpec norm;
};

void validate(const AmbiguityInstance& inst);

struct WorstCaseResult {
    double value = 0.0;
    /// Coupling attaining the value: rows = center atoms, columns =
    /// candidates. Row sums equal the center weights; the column sums induce
    /// the worst-case distribution.
    TransportPlan witness;
};

/// Exact maximum of sum_ij plan_ij * losses[j] over couplings with row sums
/// equal to the center weights and transport cost sum_ij plan_ij * c_ij <=
/// rho. Solved through the Lagrangian dual min_{lambda >= 0} lambda rho +
/// sum_i w_i max_j (losses_j - lambda c_ij), which is piecewise linear in
/// lambda; the finite breakpoint set is searched exhaustively.
WorstCaseResult worst_case_loss(const AmbiguityInstance& inst);

/// (empirical mean loss + lipschitz_bound * rho) - worst_case_loss(inst).
/// Nonnegative (>= -1e-8) whenever lipschitz_bound is a valid Lipschitz
/// constant of the loss over the instance point set; exactly 0 when rho = 0
/// and every center atom has a unique zero-distance candidate.
double lipschitz_bound_gap(const AmbiguityInstance& inst, double lipschitz_bound);

}  // namespace wdro
