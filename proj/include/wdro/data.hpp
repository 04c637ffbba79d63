#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wdro/core.hpp"

namespace wdro {

enum class ColumnType { Numeric, Categorical };

enum class LabelTransform { Identity, BinarizeAtThreshold, CategoricalToInteger };

struct ColumnSpec {
    std::string name;
    ColumnType type = ColumnType::Numeric;
};

/// Schema for CSV ingestion. Categorical levels map to integers in
/// first-occurrence order; an explicit `label_levels` list pins the label
/// coding independent of file order.
struct DatasetSchema {
    std::string name;
    std::vector<ColumnSpec> features;
    std::string label_column;
    LabelTransform label_transform = LabelTransform::Identity;
    double binarize_threshold = 0.0;           // label > threshold -> 1
    std::vector<std::string> label_levels;     // for CategoricalToInteger
    char delimiter = ',';
    bool has_header = true;
    bool whitespace_delimited = false;         // split on runs of spaces/tabs
    std::string missing_token = "?";
    bool strip_label_dot = false;              // drop a trailing '.' on labels
};

struct LoadReport {
    std::size_t rows_total = 0;
    std::size_t rows_loaded = 0;
    std::size_t rows_dropped_missing = 0;
    std::vector<std::string> warnings;
};

struct LoadedDataset {
    Dataset dataset;
    LoadReport report;
    /// First-occurrence level tables per categorical feature column.
    std::vector<std::vector<std::string>> category_levels;
};

LoadedDataset load_csv(const std::string& path, const DatasetSchema& schema);

/// Seeded shuffle then split: train gets ceil(n/2) records, test the rest.
std::pair<Dataset, Dataset> split_half(const Dataset& d, std::uint64_t seed);

/// Per-feature affine map fitted on the training half (population variance
/// convention). Zero-variance columns map to 0 and are recorded as warnings.
struct StandardizeTransform {
    Vector means;
    Vector sds;  // 0 marks a constant column
    std::vector<std::size_t> constant_columns;

    Dataset apply(const Dataset& d) const;
    Dataset invert(const Dataset& d) const;
};

struct StandardizeResult {
    Dataset train;
    Dataset test;
    StandardizeTransform transform;
};

StandardizeResult standardize(const Dataset& train, const Dataset& test);

/// Synthetic linear fixture: x ~ N(0, I), y = theta_star^T [x; 1] +
/// N(0, noise_sd^2); deterministic per seed.
Dataset synth_linear(std::size_t n, std::size_t p_x, const Vector& theta_star, double noise_sd,
                     std::uint64_t seed);

/// Ready-made schemas for the three benchmark datasets.
DatasetSchema wine_quality_schema();
DatasetSchema boston_housing_schema();
DatasetSchema adult_schema();

/// Expected canonical row counts, used by the download helper to verify files.
std::size_t expected_rows(const std::string& dataset_name);

}  // namespace wdro
