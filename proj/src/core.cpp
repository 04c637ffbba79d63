#include "wdro/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wdro {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFiniteValue: return "NonFiniteValue";
        case ErrorKind::EmptyDataset: return "EmptyDataset";
        case ErrorKind::SolverFailure: return "SolverFailure";
        case ErrorKind::NotLipschitz: return "NotLipschitz";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::InvalidLabel: return "InvalidLabel";
        case ErrorKind::DegeneratePair: return "DegeneratePair";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::IncompatibleRegularizer: return "IncompatibleRegularizer";
        case ErrorKind::InfeasibleInstance: return "InfeasibleInstance";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

Vector Matrix::row_sums() const {
    Vector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j);
    return out;
}

Vector Matrix::col_sums() const {
    Vector out(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[j] += (*this)(i, j);
    return out;
}

bool all_finite(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        fail(ErrorKind::DimensionMismatch, "dot: length " + std::to_string(a.size()) +
                                               " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double augmented_dot(const Vector& theta, const Vector& x) {
    if (theta.size() != x.size() + 1)
        fail(ErrorKind::DimensionMismatch,
             "augmented_dot: theta length " + std::to_string(theta.size()) +
                 " does not match feature dim " + std::to_string(x.size()) + " + 1");
    double s = theta.back();
    for (std::size_t i = 0; i < x.size(); ++i) s += theta[i] * x[i];
    return s;
}

NormKind dual_kind(NormKind kind) {
    switch (kind) {
        case NormKind::L1: return NormKind::Linf;
        case NormKind::L2: return NormKind::L2;
        case NormKind::Linf: return NormKind::L1;
    }
    return NormKind::L2;
}

const char* to_string(NormKind kind) {
    switch (kind) {
        case NormKind::L1: return "l1";
        case NormKind::L2: return "l2";
        case NormKind::Linf: return "linf";
    }
    return "l2";
}

NormKind norm_kind_from_string(const std::string& name) {
    if (name == "l1" || name == "L1") return NormKind::L1;
    if (name == "l2" || name == "L2") return NormKind::L2;
    if (name == "linf" || name == "Linf" || name == "LInf") return NormKind::Linf;
    fail(ErrorKind::ConfigError, "unknown norm '" + name + "' (expected l1, l2 or linf)");
}

double norm_value(const Vector& v, NormKind kind) {
    switch (kind) {
        case NormKind::L1: {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s;
        }
        case NormKind::L2: {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        }
        case NormKind::Linf: {
            double s = 0.0;
            for (double x : v) s = std::max(s, std::abs(x));
            return s;
        }
    }
    return 0.0;
}

double dual_norm_value(const Vector& v, NormKind ground) {
    return norm_value(v, dual_kind(ground));
}

Vector dual_norm_subgradient(const Vector& v, NormKind ground) {
    Vector g(v.size(), 0.0);
    switch (dual_kind(ground)) {
        case NormKind::L2: {
            double n = norm_value(v, NormKind::L2);
            if (n > 0.0)
                for (std::size_t i = 0; i < v.size(); ++i) g[i] = v[i] / n;
            break;
        }
        case NormKind::L1: {
            for (std::size_t i = 0; i < v.size(); ++i)
                g[i] = (v[i] > 0.0) ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
            break;
        }
        case NormKind::Linf: {
            std::size_t best = 0;
            double mx = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (std::abs(v[i]) > mx) {
                    mx = std::abs(v[i]);
                    best = i;
                }
            if (mx > 0.0) g[best] = (v[best] > 0.0) ? 1.0 : -1.0;
            break;
        }
    }
    return g;
}

double distance(const Vector& a, const Vector& b, NormKind kind) {
    if (a.size() != b.size())
        fail(ErrorKind::DimensionMismatch, "distance: dimension " + std::to_string(a.size()) +
                                               " vs " + std::to_string(b.size()));
    Vector diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    return norm_value(diff, kind);
}

Vector joint_point(const Record& r) {
    Vector z = r.x;
    z.push_back(r.y);
    return z;
}

void validate_dataset(const Dataset& d) {
    if (d.records.empty()) fail(ErrorKind::EmptyDataset, "dataset has no records");
    const std::size_t p_x = d.records.front().x.size();
    if (p_x < 1) fail(ErrorKind::DimensionMismatch, "records need at least one feature");
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const Record& r = d.records[i];
        if (r.x.size() != p_x)
            fail(ErrorKind::DimensionMismatch,
                 "record " + std::to_string(i) + " has " + std::to_string(r.x.size()) +
                     " features, expected " + std::to_string(p_x));
        if (!all_finite(r.x) || !std::isfinite(r.y))
            fail(ErrorKind::NonFiniteValue, "record " + std::to_string(i) + " contains NaN/inf");
    }
}

DataBounds data_bounds(const Dataset& d, NormSpec norm) {
    validate_dataset(d);
    DataBounds b;
    for (const Record& r : d.records) {
        b.X = std::max(b.X, norm_value(r.x, norm.kind));
        b.Y = std::max(b.Y, std::abs(r.y));
    }
    return b;
}

const char* to_string(ModelFamily f) {
    return f == ModelFamily::Linear ? "linear" : "logistic";
}

const char* to_string(LossKind l) {
    switch (l) {
        case LossKind::Quadratic: return "quadratic";
        case LossKind::Absolute: return "absolute";
        case LossKind::CrossEntropy: return "cross_entropy";
    }
    return "quadratic";
}

void validate_model(const ModelParams& m) {
    if (m.theta.size() < 2)
        fail(ErrorKind::DimensionMismatch, "theta needs at least one feature weight plus intercept");
    if (!all_finite(m.theta)) fail(ErrorKind::NonFiniteValue, "theta contains NaN/inf");
    const bool ok = (m.family == ModelFamily::Logistic)
                        ? (m.loss == LossKind::CrossEntropy)
                        : (m.loss == LossKind::Quadratic || m.loss == LossKind::Absolute);
    if (!ok)
        fail(ErrorKind::IncompatibleRegularizer,
             std::string("model family '") + to_string(m.family) + "' cannot use loss '" +
                 to_string(m.loss) + "'");
}

void validate(const ConcentrationParams& params) {
    if (!(params.c1 > 0.0) || !(params.c2 > 0.0))
        fail(ErrorKind::InvalidParams, "concentration constants must be positive");
    if (!(params.a > 1.0))
        fail(ErrorKind::InvalidParams, "light-tail exponent a must exceed 1");
    if (params.p < 1)
        fail(ErrorKind::InvalidParams, "data dimension p must be >= 1");
    if (params.p == 2)
        fail(ErrorKind::InvalidParams,
             "data dimension p = p_x + p_y = 2 is outside the validity range of the "
             "concentration rate; use p != 2");
    if (!(params.gamma > 0.0 && params.gamma < 1.0))
        fail(ErrorKind::InvalidParams, "gamma must lie in (0,1)");
}

const char* to_string(RegularizerKind kind) {
    switch (kind) {
        case RegularizerKind::TightLinear: return "tight_linear";
        case RegularizerKind::ConservativeLinear: return "conservative_linear";
        case RegularizerKind::AbsoluteLoss: return "absolute_loss";
        case RegularizerKind::Logistic: return "logistic";
        case RegularizerKind::None: return "none";
    }
    return "none";
}

void validate(const RobustConfig& cfg) {
    if (!(cfg.rho >= 0.0) || !std::isfinite(cfg.rho))
        fail(ErrorKind::InvalidParams, "rho must be finite and >= 0");
    if (!(cfg.beta >= 0.0 && cfg.beta < 1.0))
        fail(ErrorKind::InvalidParams, "beta must lie in [0,1)");
    if (cfg.concentration) validate(*cfg.concentration);
    if (cfg.weights &&
        (!(cfg.weights->squared >= 0.0) || !(cfg.weights->plain >= 0.0) ||
         !std::isfinite(cfg.weights->squared) || !std::isfinite(cfg.weights->plain)))
        fail(ErrorKind::InvalidParams, "term weights must be finite and >= 0");
}

}  // namespace wdro
