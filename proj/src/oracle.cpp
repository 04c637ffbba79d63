#include "wdro/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wdro::oracle {

namespace {

// Tableau simplex. Columns: structural vars, slacks/surpluses, artificials,
// rhs last. Bland's rule for both phases, so no cycling.
class Tableau {
  public:
    Tableau(const Vector& objective, const std::vector<LpConstraint>& constraints) {
        nvars_ = objective.size();
        const std::size_t m = constraints.size();

        std::size_t nslack = 0;
        for (const auto& c : constraints)
            if (c.rel != Relation::Eq) ++nslack;

        // Every row gets an artificial; redundant ones are priced out in
        // phase 1. Simple and robust at this scale.
        nart_ = m;
        ncols_ = nvars_ + nslack + nart_ + 1;
        rows_.assign(m, Vector(ncols_, 0.0));
        basis_.assign(m, 0);

        std::size_t slack_at = nvars_;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = constraints[i];
            if (c.coeffs.size() != nvars_)
                fail(ErrorKind::DimensionMismatch, "constraint coefficient length mismatch");
            double sign = (c.rhs < 0.0) ? -1.0 : 1.0;
            Relation rel = c.rel;
            if (sign < 0.0 && rel != Relation::Eq)
                rel = (rel == Relation::LessEq) ? Relation::GreaterEq : Relation::LessEq;
            for (std::size_t j = 0; j < nvars_; ++j) rows_[i][j] = sign * c.coeffs[j];
            rows_[i][ncols_ - 1] = sign * c.rhs;
            if (rel != Relation::Eq) {
                rows_[i][slack_at] = (rel == Relation::LessEq) ? 1.0 : -1.0;
                ++slack_at;
            }
            rows_[i][nvars_ + nslack + i] = 1.0;
            basis_[i] = nvars_ + nslack + i;
        }
        art_begin_ = nvars_ + nslack;

        obj_.assign(ncols_, 0.0);
        for (std::size_t j = 0; j < nvars_; ++j) obj_[j] = objective[j];

        double scale = 1.0;
        for (const auto& row : rows_)
            for (double v : row) scale = std::max(scale, std::abs(v));
        tol_ = 1e-10 * scale;
    }

    LpResult solve() {
        LpResult result;

        // Phase 1: minimize the sum of artificials.
        Vector phase1(ncols_, 0.0);
        for (std::size_t j = art_begin_; j + 1 < ncols_; ++j) phase1[j] = -1.0;
        Vector z = reduced_costs(phase1);
        if (!iterate(z, phase1, /*forbid_artificials=*/false)) {
            result.feasible = false;
            return result;
        }
        double art_sum = 0.0;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (basis_[i] >= art_begin_) art_sum += rows_[i][ncols_ - 1];
        if (art_sum > 1e-7) {
            result.feasible = false;
            return result;
        }
        drive_out_artificials();

        // Phase 2.
        z = reduced_costs(obj_);
        if (!iterate(z, obj_, /*forbid_artificials=*/true)) {
            result.feasible = true;
            result.bounded = false;
            return result;
        }

        result.feasible = true;
        result.bounded = true;
        result.x.assign(nvars_, 0.0);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (basis_[i] < nvars_) result.x[basis_[i]] = rows_[i][ncols_ - 1];
        result.value = 0.0;
        for (std::size_t j = 0; j < nvars_; ++j) result.value += obj_[j] * result.x[j];
        return result;
    }

  private:
    Vector reduced_costs(const Vector& cost) const {
        // z_j - c_j for every column.
        Vector z(ncols_, 0.0);
        for (std::size_t j = 0; j < ncols_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows_.size(); ++i) s += cost[basis_[i]] * rows_[i][j];
            z[j] = s - ((j + 1 < ncols_) ? cost[j] : 0.0);
        }
        return z;
    }

    // Returns false when unbounded (phase 2) — phase 1 is always bounded.
    bool iterate(Vector& z, const Vector& cost, bool forbid_artificials) {
        const std::size_t max_iters = 2000 + 200 * (rows_.size() + ncols_);
        for (std::size_t it = 0; it < max_iters; ++it) {
            // Bland: smallest improving column index.
            std::size_t enter = SIZE_MAX;
            const std::size_t limit = forbid_artificials ? art_begin_ : ncols_ - 1;
            for (std::size_t j = 0; j < limit; ++j)
                if (z[j] < -tol_) {
                    enter = j;
                    break;
                }
            if (enter == SIZE_MAX) return true;

            std::size_t leave = SIZE_MAX;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                const double a = rows_[i][enter];
                if (a > tol_) {
                    const double ratio = rows_[i][ncols_ - 1] / a;
                    if (ratio < best_ratio - 1e-15 ||
                        (std::abs(ratio - best_ratio) <= 1e-15 &&
                         (leave == SIZE_MAX || basis_[i] < basis_[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == SIZE_MAX) return false;

            do_pivot(leave, enter);
            z = reduced_costs(cost);
        }
        fail(ErrorKind::SolverFailure, "simplex iteration budget exceeded");
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (basis_[i] < art_begin_) continue;
            std::size_t col = SIZE_MAX;
            for (std::size_t j = 0; j < art_begin_; ++j)
                if (std::abs(rows_[i][j]) > tol_) {
                    col = j;
                    break;
                }
            if (col != SIZE_MAX) do_pivot(i, col);
            // else: redundant row; the artificial stays basic at zero and is
            // barred from re-entering in phase 2.
        }
    }

    void do_pivot(std::size_t row, std::size_t col) {
        const double piv = rows_[row][col];
        for (double& v : rows_[row]) v /= piv;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == row) continue;
            const double factor = rows_[i][col];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < ncols_; ++j) rows_[i][j] -= factor * rows_[row][j];
        }
        basis_[row] = col;
    }

    std::vector<Vector> rows_;
    std::vector<std::size_t> basis_;
    Vector obj_;
    std::size_t nvars_ = 0;
    std::size_t nart_ = 0;
    std::size_t ncols_ = 0;
    std::size_t art_begin_ = 0;
    double tol_ = 1e-10;
};

}  // namespace

LpResult solve_lp_max(const Vector& objective, const std::vector<LpConstraint>& constraints) {
    Tableau t(objective, constraints);
    return t.solve();
}

Vector solve_linear_system(Matrix a, Vector b) {
    const std::size_t n = b.size();
    if (a.rows() != n || a.cols() != n)
        fail(ErrorKind::DimensionMismatch, "solve_linear_system: shape mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) < 1e-12)
            fail(ErrorKind::SolverFailure, "linear system is singular to working precision");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vector x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

Vector least_squares_fit(const Dataset& d) {
    validate_dataset(d);
    const std::size_t p = d.feature_dim() + 1;
    Matrix ata(p, p, 0.0);
    Vector atb(p, 0.0);
    for (const Record& r : d.records) {
        Vector a = r.x;
        a.push_back(1.0);
        for (std::size_t i = 0; i < p; ++i) {
            atb[i] += a[i] * r.y;
            for (std::size_t j = 0; j < p; ++j) ata(i, j) += a[i] * a[j];
        }
    }
    return solve_linear_system(std::move(ata), std::move(atb));
}

}  // namespace wdro::oracle
