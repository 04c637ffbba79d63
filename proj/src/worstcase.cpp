#include "wdro/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wdro {

namespace {

Matrix cost_matrix(const AmbiguityInstance& inst) {
    const std::size_t m = inst.center.size();
    const std::size_t n = inst.candidates.size();
    Matrix c(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            c(i, j) = distance(inst.center.atoms[i], inst.candidates[j], inst.norm.kind);
    return c;
}

double dual_objective(const AmbiguityInstance& inst, const Matrix& cost, double lambda) {
    double value = lambda * inst.rho;
    for (std::size_t i = 0; i < inst.center.size(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < inst.losses.size(); ++j)
            best = std::max(best, inst.losses[j] - lambda * cost(i, j));
        value += inst.center.weights[i] * best;
    }
    return value;
}

// Worst case at rho = 0: each atom's mass may only sit on its zero-distance
// candidates; the adversary picks the largest loss among them. Kept separate
// so the rho = 0 value is exact (same summation order as the empirical mean).
WorstCaseResult solve_zero_radius(const AmbiguityInstance& inst, const Matrix& cost) {
    const std::size_t m = inst.center.size();
    const std::size_t n = inst.candidates.size();
    WorstCaseResult result;
    result.witness.mass = Matrix(m, n, 0.0);
    result.value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t arg = SIZE_MAX;
        for (std::size_t j = 0; j < n; ++j) {
            if (cost(i, j) != 0.0) continue;
            if (arg == SIZE_MAX || inst.losses[j] > inst.losses[arg]) arg = j;
        }
        if (arg == SIZE_MAX)
            fail(ErrorKind::InfeasibleInstance,
                 "center atom " + std::to_string(i) + " has no zero-distance candidate");
        result.witness.mass(i, arg) = inst.center.weights[i];
        result.value += inst.center.weights[i] * inst.losses[arg];
    }
    return result;
}

}  // namespace

void validate(const AmbiguityInstance& inst) {
    validate(inst.center);
    if (inst.candidates.empty()) fail(ErrorKind::InvalidParams, "instance needs candidates");
    if (inst.losses.size() != inst.candidates.size())
        fail(ErrorKind::DimensionMismatch, "one loss value per candidate required");
    if (!(inst.rho >= 0.0) || !std::isfinite(inst.rho))
        fail(ErrorKind::InvalidParams, "rho must be finite and >= 0");
    if (!all_finite(inst.losses)) fail(ErrorKind::NonFiniteValue, "losses contain NaN/inf");
    const std::size_t dim = inst.center.dim();
    for (std::size_t j = 0; j < inst.candidates.size(); ++j) {
        if (inst.candidates[j].size() != dim)
            fail(ErrorKind::DimensionMismatch, "candidate " + std::to_string(j) + " has wrong dimension");
        if (!all_finite(inst.candidates[j]))
            fail(ErrorKind::NonFiniteValue, "candidate " + std::to_string(j) + " contains NaN/inf");
    }
    for (std::size_t i = 0; i < inst.center.size(); ++i) {
        const bool covered =
            std::any_of(inst.candidates.begin(), inst.candidates.end(),
                        [&](const Vector& c) { return c == inst.center.atoms[i]; });
        if (!covered)
            fail(ErrorKind::InfeasibleInstance,
                 "candidates must include center atom " + std::to_string(i));
    }
}

WorstCaseResult worst_case_loss(const AmbiguityInstance& inst) {
    validate(inst);
    const Matrix cost = cost_matrix(inst);
    if (inst.rho == 0.0) return solve_zero_radius(inst, cost);

    const std::size_t m = inst.center.size();
    const std::size_t n = inst.candidates.size();

    // Kinks of the dual can only sit where some row's argmax changes:
    // lambda = (l_j - l_k) / (c_ij - c_ik). Collect them plus 0.
    std::vector<double> lambdas{0.0};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const double dc = cost(i, j) - cost(i, k);
                if (dc == 0.0) continue;
                const double lam = (inst.losses[j] - inst.losses[k]) / dc;
                if (lam > 0.0 && std::isfinite(lam)) lambdas.push_back(lam);
            }

    double best_value = std::numeric_limits<double>::infinity();
    double best_lambda = 0.0;
    for (double lam : lambdas) {
        const double v = dual_objective(inst, cost, lam);
        if (v < best_value) {
            best_value = v;
            best_lambda = lam;
        }
    }

    // Witness: rows put mass on argmax columns of the optimal lambda; ties
    // are resolved so the total transport cost lands within the budget
    // (exactly on it when lambda* > 0, by complementary slackness).
    double scale = 1.0;
    for (double l : inst.losses) scale = std::max(scale, std::abs(l));
    for (double v : cost.data()) scale = std::max(scale, best_lambda * std::abs(v));
    const double tie_tol = 1e-9 * scale;

    std::vector<std::size_t> cheap(m), dear(m);
    for (std::size_t i = 0; i < m; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            best = std::max(best, inst.losses[j] - best_lambda * cost(i, j));
        std::size_t jc = SIZE_MAX, jd = SIZE_MAX;
        for (std::size_t j = 0; j < n; ++j) {
            if (inst.losses[j] - best_lambda * cost(i, j) < best - tie_tol) continue;
            if (jc == SIZE_MAX || cost(i, j) < cost(i, jc)) jc = j;
            if (jd == SIZE_MAX || cost(i, j) > cost(i, jd)) jd = j;
        }
        cheap[i] = jc;
        dear[i] = jd;
    }

    WorstCaseResult result;
    result.witness.mass = Matrix(m, n, 0.0);
    double spent = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        result.witness.mass(i, cheap[i]) = inst.center.weights[i];
        spent += inst.center.weights[i] * cost(i, cheap[i]);
    }
    // Shift mass toward the expensive tied candidates until the budget is
    // met; within a row the cost moves linearly with the shifted amount.
    for (std::size_t i = 0; i < m && spent < inst.rho; ++i) {
        const double gain = cost(i, dear[i]) - cost(i, cheap[i]);
        if (gain <= 0.0) continue;
        const double room = inst.center.weights[i] * gain;
        const double want = inst.rho - spent;
        const double t = std::min(inst.center.weights[i], want / gain);
        result.witness.mass(i, cheap[i]) -= t;
        result.witness.mass(i, dear[i]) += t;
        spent += std::min(room, want);
    }

    result.value = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            result.value += result.witness.mass(i, j) * inst.losses[j];

    // The witness realizes the dual bound up to tie-resolution noise; fall
    // back to the dual value, which is the exact optimum.
    if (std::abs(result.value - best_value) > 1e-7 * (1.0 + std::abs(best_value)))
        fail(ErrorKind::SolverFailure, "breakpoint witness does not attain the dual value");
    result.value = best_value;
    return result;
}

double lipschitz_bound_gap(const AmbiguityInstance& inst, double lipschitz_bound) {
    if (!(lipschitz_bound >= 0.0) || !std::isfinite(lipschitz_bound))
        fail(ErrorKind::InvalidParams, "Lipschitz bound must be finite and >= 0");
    const WorstCaseResult worst = worst_case_loss(inst);

    // Empirical mean via each atom's zero-distance candidate, in the same
    // summation order the rho = 0 path uses, so the gap vanishes exactly.
    const Matrix cost = cost_matrix(inst);
    const WorstCaseResult at_center = solve_zero_radius(inst, cost);
    double center_mean = 0.0;
    if (inst.rho == 0.0) {
        center_mean = at_center.value;
    } else {
        // At rho > 0 the adversary may exceed the per-atom max at distance 0;
        // use the plain per-atom loss of the matching candidate.
        for (std::size_t i = 0; i < inst.center.size(); ++i) {
            std::size_t match = SIZE_MAX;
            for (std::size_t j = 0; j < inst.candidates.size(); ++j)
                if (inst.candidates[j] == inst.center.atoms[i]) {
                    match = j;
                    break;
                }
            center_mean += inst.center.weights[i] * inst.losses[match];
        }
    }
    return center_mean + lipschitz_bound * inst.rho - worst.value;
}

}  // namespace wdro
