#include "wdro/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <string>

namespace wdro {

DiscreteDistribution DiscreteDistribution::dirac(Vector point) {
    DiscreteDistribution d;
    d.atoms.push_back(std::move(point));
    d.weights.push_back(1.0);
    return d;
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<Vector> atoms) {
    DiscreteDistribution d;
    const double w = 1.0 / static_cast<double>(atoms.size());
    d.weights.assign(atoms.size(), w);
    d.atoms = std::move(atoms);
    return d;
}

void validate(const DiscreteDistribution& d) {
    if (d.atoms.empty()) fail(ErrorKind::EmptyDataset, "distribution has no atoms");
    if (d.atoms.size() != d.weights.size())
        fail(ErrorKind::DimensionMismatch, "atoms and weights differ in length");
    const std::size_t m = d.atoms.front().size();
    if (m == 0) fail(ErrorKind::DimensionMismatch, "atoms must have dimension >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
        if (d.atoms[i].size() != m)
            fail(ErrorKind::DimensionMismatch, "atom " + std::to_string(i) + " has wrong dimension");
        if (!all_finite(d.atoms[i]))
            fail(ErrorKind::NonFiniteValue, "atom " + std::to_string(i) + " contains NaN/inf");
        if (!(d.weights[i] >= 0.0) || !std::isfinite(d.weights[i]))
            fail(ErrorKind::InvalidParams, "weight " + std::to_string(i) + " is negative or non-finite");
        sum += d.weights[i];
    }
    if (std::abs(sum - 1.0) > kWeightSumTol)
        fail(ErrorKind::InvalidParams,
             "weights sum to " + std::to_string(sum) + ", expected 1 within 1e-12");
}

void check_marginals(const TransportPlan& plan, const Vector& source, const Vector& dest) {
    if (plan.mass.rows() != source.size() || plan.mass.cols() != dest.size())
        fail(ErrorKind::DimensionMismatch, "plan shape does not match marginals");
    const Vector rs = plan.mass.row_sums();
    const Vector cs = plan.mass.col_sums();
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (std::abs(rs[i] - source[i]) > kMarginalTol)
            fail(ErrorKind::SolverFailure, "plan row " + std::to_string(i) + " violates marginal");
    for (std::size_t j = 0; j < cs.size(); ++j)
        if (std::abs(cs[j] - dest[j]) > kMarginalTol)
            fail(ErrorKind::SolverFailure, "plan column " + std::to_string(j) + " violates marginal");
}

namespace {

// ---------------------------------------------------------------------------
// Transportation simplex. Basis arcs form a spanning tree on the bipartite
// node set {sources} u {sinks}; pivots follow the classic entering-arc /
// cycle / leaving-arc scheme. Dantzig pricing by default with a switch to
// Bland's rule after a pivot budget, which makes termination unconditional.
// ---------------------------------------------------------------------------
class TransportSimplex {
  public:
    TransportSimplex(const Matrix& cost, const Vector& supply, const Vector& demand)
        : c_(cost),
          s_(supply),
          d_(demand),
          m_(supply.size()),
          n_(demand.size()),
          basic_(m_ * n_, false),
          flow_(m_ * n_, 0.0) {
        double scale = 0.0;
        for (double v : cost.data()) scale = std::max(scale, std::abs(v));
        eps_ = 1e-12 * (scale + 1.0);
    }

    void solve() {
        northwest_corner();
        const std::size_t bland_after = 200 + 20 * (m_ + n_);
        const std::size_t max_pivots = 20000 + 2000 * (m_ + n_);
        std::size_t pivots = 0;
        while (true) {
            compute_duals();
            const auto entering = (pivots < bland_after) ? price_dantzig() : price_bland();
            if (!entering.first) break;
            pivot(entering.second.first, entering.second.second);
            if (++pivots > max_pivots)
                fail(ErrorKind::SolverFailure, "transportation simplex exceeded pivot budget");
        }
    }

    double objective() const {
        double total = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (basic_[i * n_ + j]) total += flow_[i * n_ + j] * c_(i, j);
        return total;
    }

    Matrix plan() const {
        Matrix out(m_, n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (basic_[i * n_ + j]) out(i, j) = flow_[i * n_ + j];
        return out;
    }

    const Vector& source_duals() const { return u_; }
    const Vector& dest_duals() const { return v_; }

  private:
    void northwest_corner() {
        Vector rs = s_, rd = d_;
        std::size_t i = 0, j = 0;
        while (true) {
            const double t = std::min(rs[i], rd[j]);
            basic_[i * n_ + j] = true;
            flow_[i * n_ + j] = t;
            rs[i] -= t;
            rd[j] -= t;
            if (i == m_ - 1 && j == n_ - 1) break;
            // Advance exactly one index per arc so the basis has m+n-1 arcs.
            if (rs[i] <= rd[j] && i < m_ - 1)
                ++i;
            else if (j < n_ - 1)
                ++j;
            else
                ++i;
        }
    }

    void compute_duals() {
        u_.assign(m_, 0.0);
        v_.assign(n_, 0.0);
        std::vector<bool> known(m_ + n_, false);
        known[0] = true;
        // adjacency over basic arcs, nodes 0..m-1 sources, m..m+n-1 sinks
        std::vector<std::vector<std::size_t>> adj(m_ + n_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (basic_[i * n_ + j]) {
                    adj[i].push_back(m_ + j);
                    adj[m_ + j].push_back(i);
                }
        std::queue<std::size_t> bfs;
        bfs.push(0);
        while (!bfs.empty()) {
            const std::size_t a = bfs.front();
            bfs.pop();
            for (std::size_t b : adj[a]) {
                if (known[b]) continue;
                const std::size_t i = (a < m_) ? a : b;
                const std::size_t j = (a < m_) ? b - m_ : a - m_;
                if (a < m_)
                    v_[j] = c_(i, j) - u_[i];
                else
                    u_[i] = c_(i, j) - v_[j];
                known[b] = true;
                bfs.push(b);
            }
        }
    }

    std::pair<bool, std::pair<std::size_t, std::size_t>> price_dantzig() const {
        double best = -eps_;
        std::pair<std::size_t, std::size_t> arc{0, 0};
        bool found = false;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                if (basic_[i * n_ + j]) continue;
                const double rc = c_(i, j) - u_[i] - v_[j];
                if (rc < best) {
                    best = rc;
                    arc = {i, j};
                    found = true;
                }
            }
        return {found, arc};
    }

    std::pair<bool, std::pair<std::size_t, std::size_t>> price_bland() const {
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                if (basic_[i * n_ + j]) continue;
                if (c_(i, j) - u_[i] - v_[j] < -eps_) return {true, {i, j}};
            }
        return {false, {0, 0}};
    }

    void pivot(std::size_t ei, std::size_t ej) {
        // Unique tree path from source ei to sink ej.
        std::vector<std::vector<std::size_t>> adj(m_ + n_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (basic_[i * n_ + j]) {
                    adj[i].push_back(m_ + j);
                    adj[m_ + j].push_back(i);
                }
        std::vector<std::size_t> parent(m_ + n_, SIZE_MAX);
        std::vector<bool> seen(m_ + n_, false);
        std::queue<std::size_t> bfs;
        bfs.push(ei);
        seen[ei] = true;
        while (!bfs.empty()) {
            const std::size_t a = bfs.front();
            bfs.pop();
            if (a == m_ + ej) break;
            for (std::size_t b : adj[a])
                if (!seen[b]) {
                    seen[b] = true;
                    parent[b] = a;
                    bfs.push(b);
                }
        }
        if (!seen[m_ + ej]) fail(ErrorKind::SolverFailure, "basis lost spanning-tree structure");

        std::vector<std::size_t> path;  // ei ... m+ej
        for (std::size_t a = m_ + ej; a != SIZE_MAX; a = parent[a]) path.push_back(a);
        std::reverse(path.begin(), path.end());

        // Entering arc takes +delta; path arcs alternate starting with -delta
        // at the source end (even positions lose flow).
        double delta = std::numeric_limits<double>::infinity();
        std::size_t leave = SIZE_MAX;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            if (k % 2 != 0) continue;
            const auto [i, j] = arc_of(path[k], path[k + 1]);
            const double f = flow_[i * n_ + j];
            const std::size_t id = i * n_ + j;
            if (f < delta || (f == delta && id < leave)) {
                delta = f;
                leave = id;
            }
        }
        if (leave == SIZE_MAX) fail(ErrorKind::SolverFailure, "pivot cycle has no leaving arc");

        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            const auto [i, j] = arc_of(path[k], path[k + 1]);
            flow_[i * n_ + j] += (k % 2 == 0) ? -delta : delta;
        }
        basic_[leave] = false;
        flow_[leave] = 0.0;
        basic_[ei * n_ + ej] = true;
        flow_[ei * n_ + ej] = delta;
    }

    std::pair<std::size_t, std::size_t> arc_of(std::size_t a, std::size_t b) const {
        return (a < m_) ? std::make_pair(a, b - m_) : std::make_pair(b, a - m_);
    }

    const Matrix& c_;
    const Vector& s_;
    const Vector& d_;
    std::size_t m_, n_;
    std::vector<bool> basic_;
    Vector flow_;
    Vector u_, v_;
    double eps_ = 1e-12;
};

Matrix cost_matrix(const DiscreteDistribution& p, const DiscreteDistribution& q, NormSpec norm) {
    Matrix c(p.size(), q.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            c(i, j) = distance(p.atoms[i], q.atoms[j], norm.kind);
    return c;
}

}  // namespace

TransportResult wasserstein(const DiscreteDistribution& p, const DiscreteDistribution& q,
                            NormSpec norm) {
    validate(p);
    validate(q);
    if (p.dim() != q.dim())
        fail(ErrorKind::DimensionMismatch, "distributions live on different ambient spaces");

    const Matrix cost = cost_matrix(p, q, norm);
    TransportSimplex simplex(cost, p.weights, q.weights);
    simplex.solve();

    TransportResult result;
    result.distance = simplex.objective();
    result.plan.mass = simplex.plan();
    result.source_potential = simplex.source_duals();
    result.dest_potential = simplex.dest_duals();
    check_marginals(result.plan, p.weights, q.weights);
    return result;
}

double wasserstein_1d(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    validate(p);
    validate(q);
    if (p.dim() != 1 || q.dim() != 1)
        fail(ErrorKind::DimensionMismatch, "wasserstein_1d requires scalar atoms");

    std::vector<std::pair<double, double>> events;  // (position, cdf jump of F_p - F_q)
    events.reserve(p.size() + q.size());
    for (std::size_t i = 0; i < p.size(); ++i) events.emplace_back(p.atoms[i][0], p.weights[i]);
    for (std::size_t j = 0; j < q.size(); ++j) events.emplace_back(q.atoms[j][0], -q.weights[j]);
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double total = 0.0, cdf_gap = 0.0, prev = events.front().first;
    for (const auto& [pos, jump] : events) {
        total += std::abs(cdf_gap) * (pos - prev);
        cdf_gap += jump;
        prev = pos;
    }
    return total;
}

double kantorovich_dual_value(const DiscreteDistribution& p, const DiscreteDistribution& q,
                              NormSpec norm, const Vector& potential) {
    validate(p);
    validate(q);
    if (p.dim() != q.dim())
        fail(ErrorKind::DimensionMismatch, "distributions live on different ambient spaces");
    if (potential.size() != p.size() + q.size())
        fail(ErrorKind::DimensionMismatch,
             "potential needs one value per atom of the concatenated support");

    std::vector<const Vector*> support;
    support.reserve(potential.size());
    for (const auto& a : p.atoms) support.push_back(&a);
    for (const auto& a : q.atoms) support.push_back(&a);

    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = i + 1; j < support.size(); ++j) {
            const double gap = std::abs(potential[i] - potential[j]);
            const double dist = distance(*support[i], *support[j], norm.kind);
            if (gap > dist + 1e-9)
                fail(ErrorKind::NotLipschitz,
                     "potential violates the 1-Lipschitz constraint between support points " +
                         std::to_string(i) + " and " + std::to_string(j));
        }

    double value = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) value += potential[i] * p.weights[i];
    for (std::size_t j = 0; j < q.size(); ++j) value -= potential[p.size() + j] * q.weights[j];
    return value;
}

Vector optimal_potential(const DiscreteDistribution& p, const DiscreteDistribution& q,
                         NormSpec norm) {
    const TransportResult r = wasserstein(p, q, norm);
    // Infimal convolution of the destination duals with the ground metric:
    // f(z) = min_j (-v_j + ||z - y_j||). 1-Lipschitz by construction and
    // attains the primal value.
    auto f = [&](const Vector& z) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < q.size(); ++j)
            best = std::min(best, -r.dest_potential[j] + distance(z, q.atoms[j], norm.kind));
        return best;
    };
    Vector potential;
    potential.reserve(p.size() + q.size());
    for (const auto& a : p.atoms) potential.push_back(f(a));
    for (const auto& a : q.atoms) potential.push_back(f(a));
    return potential;
}

DiscreteDistribution mixture(const DiscreteDistribution& p, const DiscreteDistribution& q,
                             double beta) {
    validate(p);
    validate(q);
    if (p.dim() != q.dim())
        fail(ErrorKind::DimensionMismatch, "mixture of distributions on different spaces");
    if (!(beta >= 0.0 && beta <= 1.0)) fail(ErrorKind::InvalidParams, "beta must lie in [0,1]");
    if (beta == 0.0) return p;
    if (beta == 1.0) return q;

    DiscreteDistribution out;
    std::map<Vector, std::size_t> index;
    auto add = [&](const Vector& atom, double w) {
        auto [it, inserted] = index.try_emplace(atom, out.atoms.size());
        if (inserted) {
            out.atoms.push_back(atom);
            out.weights.push_back(0.0);
        }
        out.weights[it->second] += w;
    };
    for (std::size_t i = 0; i < p.size(); ++i) add(p.atoms[i], (1.0 - beta) * p.weights[i]);
    for (std::size_t j = 0; j < q.size(); ++j) add(q.atoms[j], beta * q.weights[j]);
    return out;
}

DiscreteDistribution empirical_distribution(const Dataset& d) {
    validate_dataset(d);
    DiscreteDistribution out;
    std::map<Vector, std::size_t> index;
    const double w = 1.0 / static_cast<double>(d.size());
    for (const Record& r : d.records) {
        Vector z = joint_point(r);
        auto [it, inserted] = index.try_emplace(z, out.atoms.size());
        if (inserted) {
            out.atoms.push_back(std::move(z));
            out.weights.push_back(0.0);
        }
        out.weights[it->second] += w;
    }
    return out;
}

}  // namespace wdro
