#include "wdro/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wdro/rng.hpp"

namespace wdro {

double concentration_rate(const ConcentrationParams& params, std::size_t n) {
    validate(params);
    if (n < 1) fail(ErrorKind::InvalidParams, "sample size n must be >= 1");
    const double log_term = std::log(params.c1 / params.gamma);
    if (!(log_term > 0.0))
        fail(ErrorKind::InvalidParams,
             "c1/gamma must exceed 1 for a non-vacuous concentration rate");
    const double base = log_term / (params.c2 * static_cast<double>(n));
    const double threshold = log_term / params.c2;
    const double exponent = (static_cast<double>(n) >= threshold)
                                ? 1.0 / static_cast<double>(std::max<std::size_t>(params.p, 2))
                                : 1.0 / params.a;
    return std::pow(base, exponent);
}

double ambiguity_radius(const ConcentrationParams& params, std::size_t n, double beta,
                        double w_qp) {
    return ambiguity_radius_with_confidence(params, n, beta, w_qp, beta);
}

double ambiguity_radius_with_confidence(const ConcentrationParams& params, std::size_t n,
                                        double beta, double w_qp, double confidence) {
    if (!(beta > 0.0 && beta < 1.0)) fail(ErrorKind::InvalidParams, "beta must lie in (0,1)");
    if (!(w_qp >= 0.0) || !std::isfinite(w_qp))
        fail(ErrorKind::InvalidParams, "W(Q,P) must be finite and >= 0");
    ConcentrationParams at_level = params;
    at_level.gamma = confidence;
    return concentration_rate(at_level, n) + beta * w_qp;
}

DiscreteDistribution sample_empirical(const DiscreteDistribution& source, std::size_t n,
                                      std::uint64_t seed) {
    validate(source);
    if (n < 1) fail(ErrorKind::InvalidParams, "sample size n must be >= 1");
    Rng rng(seed);

    Vector cdf(source.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        acc += source.weights[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    std::vector<std::size_t> counts(source.size(), 0);
    for (std::size_t t = 0; t < n; ++t) {
        const double u = rng.uniform01();
        const std::size_t k =
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        ++counts[std::min(k, source.size() - 1)];
    }

    DiscreteDistribution out;
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (counts[i] == 0) continue;
        out.atoms.push_back(source.atoms[i]);
        out.weights.push_back(static_cast<double>(counts[i]) / static_cast<double>(n));
    }
    return out;
}

namespace {

double upper_quantile(Vector values, double level) {
    // Conservative order statistic: smallest k-th value with k/N >= level.
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
    k = std::min(std::max<std::size_t>(k, 1), n);
    return values[k - 1];
}

}  // namespace

CalibrationResult calibrate_concentration(const DiscreteDistribution& p,
                                          const std::vector<std::size_t>& sample_sizes,
                                          const std::vector<double>& gammas, std::size_t trials,
                                          std::uint64_t seed, double a, std::size_t dim,
                                          double safety) {
    validate(p);
    if (sample_sizes.empty() || gammas.empty() || trials < 10)
        fail(ErrorKind::InvalidParams, "calibration needs cells and at least 10 trials");
    if (!(safety > 0.0 && safety <= 1.0))
        fail(ErrorKind::InvalidParams, "safety factor must lie in (0,1]");

    CalibrationResult result;
    result.c1 = std::exp(1.0);

    const NormSpec norm{NormKind::L2};
    double c2 = std::numeric_limits<double>::infinity();
    for (std::size_t si = 0; si < sample_sizes.size(); ++si) {
        const std::size_t n = sample_sizes[si];
        Vector distances(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            const DiscreteDistribution emp =
                sample_empirical(p, n, derive_seed(seed, si, t));
            distances[t] = wasserstein(emp, p, norm).distance;
        }
        for (double gamma : gammas) {
            const double q = upper_quantile(distances, 1.0 - gamma);
            result.cell_quantiles.push_back(q);
            if (q <= 0.0) continue;  // distribution was hit exactly; no constraint
            // Invert the rate formula at the quantile; the branch follows
            // from whether the quantile is below 1.
            const double log_term = std::log(result.c1 / gamma);
            const double expo =
                (q <= 1.0) ? static_cast<double>(std::max<std::size_t>(dim, 2)) : a;
            c2 = std::min(c2, log_term / (static_cast<double>(n) * std::pow(q, expo)));
        }
    }
    if (!std::isfinite(c2)) c2 = 1.0;  // every quantile was 0; any rate covers
    result.c2 = safety * c2;
    return result;
}

CoverageCell coverage_cell(const DiscreteDistribution& p, const DiscreteDistribution& q,
                           double beta, const ConcentrationParams& params, double gamma,
                           std::size_t n, std::size_t trials, std::uint64_t seed, NormSpec norm) {
    validate(p);
    validate(q);
    if (!(beta >= 0.0 && beta < 1.0)) fail(ErrorKind::InvalidParams, "beta must lie in [0,1)");
    if (trials < 1) fail(ErrorKind::InvalidParams, "coverage needs at least one trial");

    ConcentrationParams at_level = params;
    at_level.gamma = gamma;
    const double rate = concentration_rate(at_level, n);
    const double w_qp = wasserstein(q, p, norm).distance;

    const DiscreteDistribution contaminated = mixture(p, q, beta);

    CoverageCell cell;
    cell.gamma = gamma;
    cell.n = n;
    cell.trials = trials;
    cell.bound = rate + beta * w_qp;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const DiscreteDistribution emp =
            sample_empirical(contaminated, n, derive_seed(seed, t));
        const double w = wasserstein(emp, p, norm).distance;
        if (w <= cell.bound) ++hits;
    }
    cell.frequency = static_cast<double>(hits) / static_cast<double>(trials);
    cell.pass = cell.frequency >= 1.0 - gamma;
    return cell;
}

}  // namespace wdro
