#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdro {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
    DimensionMismatch,
    NonFiniteValue,
    EmptyDataset,
    SolverFailure,
    NotLipschitz,
    InvalidParams,
    InvalidLabel,
    DegeneratePair,
    InvalidSpec,
    IncompatibleRegularizer,
    InfeasibleInstance,
    ParseError,
    SchemaMismatch,
    ConfigError,
};

const char* to_string(ErrorKind kind);

/// Single exception type used across the library; carries a machine-checkable
/// kind next to the human-readable message.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

// ---------------------------------------------------------------------------
// Numeric primitives
// ---------------------------------------------------------------------------

using Vector = std::vector<double>;

/// Dense row-major matrix. Used for transport plans and the small LP solvers;
/// desk-scale sizes only.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Vector& data() const { return data_; }

    Vector row_sums() const;
    Vector col_sums() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

bool all_finite(const Vector& v);
double dot(const Vector& a, const Vector& b);

/// theta^T [x; 1] with theta of length x.size() + 1 (last entry = intercept).
double augmented_dot(const Vector& theta, const Vector& x);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

enum class NormKind { L1, L2, Linf };

NormKind dual_kind(NormKind kind);
const char* to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

/// Ground norm on data space together with its dual; the dual pairing is
/// fixed (L1 <-> Linf, L2 <-> L2).
struct NormSpec {
    NormKind kind = NormKind::L2;
    NormKind dual() const { return dual_kind(kind); }
};

double norm_value(const Vector& v, NormKind kind);

/// Norm of v under the dual of the given ground norm.
double dual_norm_value(const Vector& v, NormKind ground);

/// Subgradient of v |-> dual norm of v, minimal-norm selection at v = 0 and
/// lowest-index tie break for Linf-type duals.
Vector dual_norm_subgradient(const Vector& v, NormKind ground);

double distance(const Vector& a, const Vector& b, NormKind kind);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// One observation (x, y). All in-scope models have a scalar output.
struct Record {
    Vector x;
    double y = 0.0;
};

/// Joint point (x, y) in R^{p_x + 1}, the space the ground metric lives on.
Vector joint_point(const Record& r);

struct Dataset {
    std::vector<Record> records;

    std::size_t size() const { return records.size(); }
    std::size_t feature_dim() const { return records.empty() ? 0 : records.front().x.size(); }
};

/// Throws DimensionMismatch / NonFiniteValue / EmptyDataset on violation.
void validate_dataset(const Dataset& d);

/// X = max_i ||x_i||, Y = max_i |y_i|.
struct DataBounds {
    double X = 0.0;
    double Y = 0.0;
};

DataBounds data_bounds(const Dataset& d, NormSpec norm);

enum class ModelFamily { Linear, Logistic };
enum class LossKind { Quadratic, Absolute, CrossEntropy };

const char* to_string(ModelFamily f);
const char* to_string(LossKind l);

/// theta has length p_x + 1; the last entry is the intercept. Linear pairs
/// with Quadratic or Absolute, Logistic only with CrossEntropy.
struct ModelParams {
    Vector theta;
    ModelFamily family = ModelFamily::Linear;
    LossKind loss = LossKind::Quadratic;
};

void validate_model(const ModelParams& m);

/// Constants of the finite-sample concentration rate. The bound excludes
/// data dimension p = 2; c1, c2 are caller-supplied (typically calibrated).
struct ConcentrationParams {
    double c1 = 2.718281828459045;
    double c2 = 1.0;
    double a = 2.0;      // light-tail exponent, > 1
    std::size_t p = 1;   // p_x + p_y, != 2
    double gamma = 0.1;  // confidence level in (0,1)
};

void validate(const ConcentrationParams& params);

enum class RegularizerKind { TightLinear, ConservativeLinear, AbsoluteLoss, Logistic, None };

const char* to_string(RegularizerKind kind);

/// Direct per-term weights: squared * ||theta||_*^2 + plain * ||theta||_*.
/// The experiment sweeps label these weights c1 and c2.
struct TermWeights {
    double squared = 0.0;
    double plain = 0.0;
};

struct RobustConfig {
    double rho = 0.0;  // ambiguity radius, >= 0
    double beta = 0.0; // poison ratio / significance, in [0,1)
    RegularizerKind regularizer = RegularizerKind::None;
    std::optional<ConcentrationParams> concentration;
    /// When set, the penalty is weights.squared * ||theta||_*^2 +
    /// weights.plain * ||theta||_* and `regularizer` / `rho` are ignored.
    std::optional<TermWeights> weights;
    /// Use the squared dual-norm penalty variant of the absolute-loss
    /// objective (alternate printed form) instead of rho * ||theta||_*.
    bool absolute_penalty_squared = false;
};

void validate(const RobustConfig& cfg);

// Shared tolerances.
inline constexpr double kWeightSumTol = 1e-12;  // distribution weights sum to 1
inline constexpr double kMarginalTol = 1e-9;    // transport plan marginals

}  // namespace wdro
