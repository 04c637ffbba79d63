#include <doctest.h>

#include <cmath>

#include "wdro/models.hpp"
#include "wdro/oracle.hpp"
#include "wdro/rng.hpp"
#include "wdro/worstcase.hpp"

using namespace wdro;

namespace {

AmbiguityInstance hand_instance() {
    // One center atom, an extra candidate at distance 1 with loss 5.
    AmbiguityInstance inst;
    inst.center = DiscreteDistribution::dirac({0.0});
    inst.candidates = {{0.0}, {1.0}};
    inst.losses = {0.0, 5.0};
    inst.norm = NormSpec{NormKind::L2};
    return inst;
}

AmbiguityInstance random_instance(Rng& rng, double rho_scale) {
    AmbiguityInstance inst;
    const std::size_t dim = 1 + rng.uniform_index(3);
    const std::size_t m = 1 + rng.uniform_index(4);
    const std::size_t extra = 1 + rng.uniform_index(4);
    inst.norm = NormSpec{NormKind::L2};

    for (std::size_t i = 0; i < m; ++i) {
        Vector a(dim);
        for (double& v : a) v = rng.uniform(-2.0, 2.0);
        inst.center.atoms.push_back(std::move(a));
    }
    inst.center.weights.assign(m, 1.0 / static_cast<double>(m));

    inst.candidates = inst.center.atoms;
    for (std::size_t e = 0; e < extra; ++e) {
        Vector a(dim);
        for (double& v : a) v = rng.uniform(-2.0, 2.0);
        inst.candidates.push_back(std::move(a));
    }
    inst.losses.resize(inst.candidates.size());
    for (double& l : inst.losses) l = rng.uniform(0.0, 4.0);

    double max_cost = 0.0;
    for (const auto& c : inst.candidates)
        for (const auto& a : inst.center.atoms)
            max_cost = std::max(max_cost, distance(c, a, inst.norm.kind));
    inst.rho = rho_scale * max_cost * rng.uniform01();
    return inst;
}

double lp_value(const AmbiguityInstance& inst) {
    const std::size_t m = inst.center.size();
    const std::size_t n = inst.candidates.size();
    Vector objective(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) objective[i * n + j] = inst.losses[j];
    std::vector<oracle::LpConstraint> cons;
    for (std::size_t i = 0; i < m; ++i) {
        oracle::LpConstraint c;
        c.coeffs.assign(m * n, 0.0);
        for (std::size_t j = 0; j < n; ++j) c.coeffs[i * n + j] = 1.0;
        c.rel = oracle::Relation::Eq;
        c.rhs = inst.center.weights[i];
        cons.push_back(std::move(c));
    }
    oracle::LpConstraint budget;
    budget.coeffs.assign(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            budget.coeffs[i * n + j] =
                distance(inst.center.atoms[i], inst.candidates[j], inst.norm.kind);
    budget.rel = oracle::Relation::LessEq;
    budget.rhs = inst.rho;
    cons.push_back(std::move(budget));
    const oracle::LpResult r = oracle::solve_lp_max(objective, cons);
    REQUIRE(r.feasible);
    REQUIRE(r.bounded);
    return r.value;
}

}  // namespace

TEST_SUITE_BEGIN("worstcase");

TEST_CASE("zero radius reproduces the empirical mean exactly") {
    AmbiguityInstance inst = hand_instance();
    inst.rho = 0.0;
    const WorstCaseResult r = worst_case_loss(inst);
    CHECK(r.value == 0.0);
    CHECK(r.witness.mass(0, 0) == 1.0);
    CHECK(lipschitz_bound_gap(inst, 5.0) == 0.0);
}

TEST_CASE("half budget moves half the mass") {
    AmbiguityInstance inst = hand_instance();
    inst.rho = 0.5;
    const WorstCaseResult r = worst_case_loss(inst);
    CHECK(r.value == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(r.witness.mass(0, 1) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("candidates must cover the center") {
    AmbiguityInstance inst;
    inst.center = DiscreteDistribution::dirac({0.0});
    inst.candidates = {{1.0}};
    inst.losses = {1.0};
    inst.norm = NormSpec{NormKind::L2};
    CHECK_THROWS_AS(worst_case_loss(inst), Error);
    try {
        worst_case_loss(inst);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleInstance);
    }
}

TEST_CASE("breakpoint search matches the generic LP") {
    Rng rng(19);
    for (int t = 0; t < 60; ++t) {
        const AmbiguityInstance inst = random_instance(rng, 1.5);
        const WorstCaseResult r = worst_case_loss(inst);
        CHECK(r.value == doctest::Approx(lp_value(inst)).epsilon(1e-8));
    }
}

TEST_CASE("witness is a feasible coupling attaining the value") {
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
        const AmbiguityInstance inst = random_instance(rng, 1.0);
        const WorstCaseResult r = worst_case_loss(inst);

        const Vector rows = r.witness.mass.row_sums();
        for (std::size_t i = 0; i < rows.size(); ++i)
            CHECK(rows[i] == doctest::Approx(inst.center.weights[i]).epsilon(1e-9));

        double cost = 0.0, value = 0.0;
        for (std::size_t i = 0; i < inst.center.size(); ++i)
            for (std::size_t j = 0; j < inst.candidates.size(); ++j) {
                cost += r.witness.mass(i, j) *
                        distance(inst.center.atoms[i], inst.candidates[j], inst.norm.kind);
                value += r.witness.mass(i, j) * inst.losses[j];
            }
        CHECK(cost <= inst.rho + 1e-9);
        CHECK(value == doctest::Approx(r.value).epsilon(1e-7));
    }
}

TEST_CASE("worst case is nondecreasing and midpoint-concave in the radius") {
    Rng rng(29);
    for (int t = 0; t < 30; ++t) {
        AmbiguityInstance inst = random_instance(rng, 1.0);
        AmbiguityInstance bigger = inst;
        bigger.rho = inst.rho * 1.7 + 0.01;
        AmbiguityInstance mid = inst;
        mid.rho = 0.5 * (inst.rho + bigger.rho);

        const double va = worst_case_loss(inst).value;
        const double vb = worst_case_loss(bigger).value;
        const double vm = worst_case_loss(mid).value;
        CHECK(va <= vb + 1e-9);
        CHECK(vm >= 0.5 * (va + vb) - 1e-9);
    }
}

TEST_CASE("bound gap stays nonnegative with a certified constant") {
    Rng rng(31);
    for (int t = 0; t < 40; ++t) {
        const AmbiguityInstance inst = random_instance(rng, 1.2);
        // Exact Lipschitz constant of the loss values on the finite point set.
        double lip = 0.0;
        for (std::size_t i = 0; i < inst.candidates.size(); ++i)
            for (std::size_t j = i + 1; j < inst.candidates.size(); ++j) {
                const double dist =
                    distance(inst.candidates[i], inst.candidates[j], inst.norm.kind);
                if (dist < 1e-9) continue;
                lip = std::max(lip, std::abs(inst.losses[i] - inst.losses[j]) / dist);
            }
        CHECK(lipschitz_bound_gap(inst, lip) >= -1e-8);
    }
}

TEST_SUITE_END();
