#pragma once

#include <cstdint>
#include <vector>

#include "wdro/core.hpp"
#include "wdro/transport.hpp"

namespace wdro {

/// Finite-sample concentration rate of the empirical distribution around its
/// source, evaluated at the confidence level params.gamma:
///   (log(c1/gamma) / (c2 n))^{1/max(p,2)}   if n >= log(c1/gamma)/c2,
///   (log(c1/gamma) / (c2 n))^{1/a}          otherwise.
/// Requires c1/gamma > 1 (otherwise the bound is vacuous and InvalidParams is
/// thrown).
double concentration_rate(const ConcentrationParams& params, std::size_t n);

/// Prescribed ambiguity radius: rate at confidence level beta plus
/// beta * W(Q, P). The confidence level is tied to the poison ratio.
double ambiguity_radius(const ConcentrationParams& params, std::size_t n, double beta,
                        double w_qp);

/// Same radius with the confidence level decoupled from the poison ratio;
/// an experimentation extension, not the default prescription.
double ambiguity_radius_with_confidence(const ConcentrationParams& params, std::size_t n,
                                        double beta, double w_qp, double confidence);

/// Draw n i.i.d. samples from a finite distribution and return the empirical
/// distribution over its support (duplicates merged).
DiscreteDistribution sample_empirical(const DiscreteDistribution& source, std::size_t n,
                                      std::uint64_t seed);

/// Calibration of (c1, c2) on clean data: c1 is fixed at e and c2 is chosen
/// small enough that the rate at each (gamma, n) cell dominates the held-out
/// empirical quantile of W(empirical_n, P) with a safety margin.
struct CalibrationResult {
    double c1 = 0.0;
    double c2 = 0.0;
    /// Per-cell empirical (1 - gamma) quantiles of W(empirical_n, P).
    std::vector<double> cell_quantiles;
};

CalibrationResult calibrate_concentration(const DiscreteDistribution& p,
                                          const std::vector<std::size_t>& sample_sizes,
                                          const std::vector<double>& gammas, std::size_t trials,
                                          std::uint64_t seed, double a, std::size_t dim,
                                          double safety = 0.25);

/// One coverage cell: frequency over fresh trials of
/// W(empirical_n, P) <= rate(gamma) + beta * W(Q, P), where samples are drawn
/// from the (1 - beta) P + beta Q mixture.
struct CoverageCell {
    double gamma = 0.0;
    std::size_t n = 0;
    double frequency = 0.0;
    double bound = 0.0;  // rate(gamma) + beta * W(Q, P)
    std::size_t trials = 0;
    bool pass = false;   // frequency >= 1 - gamma
};

CoverageCell coverage_cell(const DiscreteDistribution& p, const DiscreteDistribution& q,
                           double beta, const ConcentrationParams& params, double gamma,
                           std::size_t n, std::size_t trials, std::uint64_t seed, NormSpec norm);

}  // namespace wdro
