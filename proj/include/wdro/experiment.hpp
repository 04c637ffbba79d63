#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdro/attacks.hpp"
#include "wdro/core.hpp"
#include "wdro/data.hpp"
#include "wdro/training.hpp"

namespace wdro {

/// One penalty configuration in the sweep. `squared_weight` and
/// `plain_weight` are the weights behind ||theta||_*^2 and ||theta||_*; the
/// baseline uses 0/0. Alternatively a named regularizer with a radius.
struct RegularizerConfig {
    std::string label;
    bool use_weights = true;
    TermWeights weights;                                      // when use_weights
    RegularizerKind kind = RegularizerKind::None;             // otherwise
    double rho = 0.0;
};

struct SyntheticSpec {
    std::size_t n = 300;
    std::size_t p_x = 11;
    Vector theta_star;  // length p_x + 1; default filled by make_default
    double noise_sd = 0.0;
};

struct ExperimentConfig {
    std::string name = "experiment";
    /// Either a CSV-backed dataset (schema + path) or a synthetic fixture.
    std::optional<DatasetSchema> schema;
    std::string data_path;
    std::optional<SyntheticSpec> synthetic;

    ModelFamily family = ModelFamily::Linear;
    LossKind loss_kind = LossKind::Quadratic;
    NormSpec norm;

    AttackSpec attack_template;        // beta and seed filled per cell
    std::vector<double> beta_grid;     // sorted ascending, first element 0
    std::vector<RegularizerConfig> regularizers;  // includes the baseline
    std::size_t trials = 5;
    std::uint64_t master_seed = 1;
    TrainConfig train;
    bool absolute_penalty_squared = false;
};

void validate(const ExperimentConfig& cfg);

/// Default synthetic-linear config matching the Wine dimensions; used when no
/// dataset file is supplied.
ExperimentConfig make_default_synthetic_config();

struct TrialOutcome {
    std::size_t trial = 0;
    double test_loss = 0.0;
    double theta_dual_norm = 0.0;
    std::size_t iterations = 0;
    std::uint64_t split_seed = 0;
    std::uint64_t attack_seed = 0;
};

struct CurvePoint {
    double beta = 0.0;
    std::string label;
    double mean_test_loss = 0.0;
    std::vector<TrialOutcome> trials;
};

struct ExperimentResult {
    std::vector<CurvePoint> points;
    std::string manifest_json;  // config echo, seeds, checksums, version
};

/// Full sweep: for each (beta, trial) split, poison the training half,
/// standardize, then train every regularizer configuration on the same
/// poisoned data and evaluate on the clean test half. Deterministic for a
/// given master seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Serialization: one JSON object per CurvePoint, newline-delimited, plus a
/// flat CSV (beta,label,trial,test_loss). Parsing the JSONL reproduces the
/// in-memory points exactly.
std::string curve_points_to_jsonl(const std::vector<CurvePoint>& points);
std::vector<CurvePoint> curve_points_from_jsonl(const std::string& jsonl);
std::string curve_points_to_csv(const std::vector<CurvePoint>& points);

/// Writes curves.jsonl, curves.csv and manifest.json under out_dir.
void write_experiment_files(const ExperimentResult& result, const std::string& out_dir);

}  // namespace wdro
