#pragma once

#include <vector>

#include "wdro/core.hpp"

namespace wdro::oracle {

/// Generic small-scale LP machinery used by the verification suites as an
/// independent route next to the specialized solvers. Not tuned for size;
/// keep instances at desk scale (tens of variables).

enum class Relation { LessEq, Eq, GreaterEq };

struct LpConstraint {
    Vector coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

struct LpResult {
    bool feasible = false;
    bool bounded = false;
    double value = 0.0;
    Vector x;
};

/// maximize objective . x subject to the constraints and x >= 0, solved with
/// a two-phase tableau simplex under Bland's rule.
LpResult solve_lp_max(const Vector& objective, const std::vector<LpConstraint>& constraints);

/// Solve A x = b by Gaussian elimination with partial pivoting. Throws
/// SolverFailure on (numerically) singular systems.
Vector solve_linear_system(Matrix a, Vector b);

/// Ordinary least squares for y ~ theta^T [x; 1] via the normal equations.
Vector least_squares_fit(const Dataset& d);

}  // namespace wdro::oracle
