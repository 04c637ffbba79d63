#include "wdro/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wdro/rng.hpp"

namespace wdro {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, const DatasetSchema& schema) {
    std::vector<std::string> out;
    if (schema.whitespace_delimited) {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) out.push_back(tok);
        return out;
    }
    std::string cur;
    for (char c : line) {
        if (c == schema.delimiter) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& tok, std::size_t row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::ParseError,
             "row " + std::to_string(row) + ", column '" + col + "': cannot parse '" + tok + "'");
    }
}

}  // namespace

LoadedDataset load_csv(const std::string& path, const DatasetSchema& schema) {
    if (schema.features.empty() || schema.label_column.empty())
        fail(ErrorKind::SchemaMismatch, "schema needs feature columns and a label column");
    for (const ColumnSpec& c : schema.features)
        if (c.name == schema.label_column)
            fail(ErrorKind::SchemaMismatch, "label column '" + c.name + "' listed among features");

    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, "cannot open '" + path + "'");

    std::vector<std::string> header;
    std::string line;
    std::size_t row = 0;

    if (schema.has_header) {
        if (!std::getline(in, line)) fail(ErrorKind::ParseError, "empty file '" + path + "'");
        ++row;
        header = split_line(line, schema);
        for (auto& h : header) {
            h = trim(h);
            if (h.size() >= 2 && h.front() == '"' && h.back() == '"')
                h = h.substr(1, h.size() - 2);
        }
    } else {
        for (const ColumnSpec& c : schema.features) header.push_back(c.name);
        header.push_back(schema.label_column);
    }

    auto column_index = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            fail(ErrorKind::SchemaMismatch, "column '" + name + "' not found in '" + path + "'");
        return static_cast<std::size_t>(it - header.begin());
    };

    std::vector<std::size_t> feature_idx;
    for (const ColumnSpec& c : schema.features) feature_idx.push_back(column_index(c.name));
    const std::size_t label_idx = column_index(schema.label_column);

    LoadedDataset out;
    out.category_levels.assign(schema.features.size(), {});
    std::vector<std::string> label_levels = schema.label_levels;

    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        ++out.report.rows_total;
        const std::vector<std::string> toks = split_line(line, schema);
        if (toks.size() != header.size())
            fail(ErrorKind::ParseError, "row " + std::to_string(row) + ": expected " +
                                            std::to_string(header.size()) + " columns, got " +
                                            std::to_string(toks.size()));

        bool missing = false;
        for (std::size_t t : feature_idx)
            if (toks[t] == schema.missing_token) missing = true;
        if (toks[label_idx] == schema.missing_token) missing = true;
        if (missing) {
            ++out.report.rows_dropped_missing;
            continue;
        }

        Record rec;
        rec.x.reserve(schema.features.size());
        for (std::size_t f = 0; f < schema.features.size(); ++f) {
            const std::string& tok = toks[feature_idx[f]];
            if (schema.features[f].type == ColumnType::Numeric) {
                rec.x.push_back(parse_number(tok, row, schema.features[f].name));
            } else {
                auto& levels = out.category_levels[f];
                auto it = std::find(levels.begin(), levels.end(), tok);
                if (it == levels.end()) {
                    levels.push_back(tok);
                    it = std::prev(levels.end());
                }
                rec.x.push_back(static_cast<double>(it - levels.begin()));
            }
        }

        std::string label_tok = toks[label_idx];
        if (schema.strip_label_dot && !label_tok.empty() && label_tok.back() == '.')
            label_tok.pop_back();
        switch (schema.label_transform) {
            case LabelTransform::Identity:
                rec.y = parse_number(label_tok, row, schema.label_column);
                break;
            case LabelTransform::BinarizeAtThreshold:
                rec.y = parse_number(label_tok, row, schema.label_column) > schema.binarize_threshold
                            ? 1.0
                            : 0.0;
                break;
            case LabelTransform::CategoricalToInteger: {
                auto it = std::find(label_levels.begin(), label_levels.end(), label_tok);
                if (it == label_levels.end()) {
                    if (!schema.label_levels.empty())
                        fail(ErrorKind::ParseError, "row " + std::to_string(row) +
                                                        ": unexpected label '" + label_tok + "'");
                    label_levels.push_back(label_tok);
                    it = std::prev(label_levels.end());
                }
                rec.y = static_cast<double>(it - label_levels.begin());
                break;
            }
        }
        out.dataset.records.push_back(std::move(rec));
        ++out.report.rows_loaded;
    }

    if (out.report.rows_dropped_missing > 0)
        out.report.warnings.push_back("dropped " + std::to_string(out.report.rows_dropped_missing) +
                                      " rows with missing values");
    validate_dataset(out.dataset);
    return out;
}

std::pair<Dataset, Dataset> split_half(const Dataset& d, std::uint64_t seed) {
    validate_dataset(d);
    const std::size_t n = d.size();
    if (n < 2) fail(ErrorKind::EmptyDataset, "need at least two records to split");
    Rng rng(seed);
    const std::vector<std::size_t> order = rng.permutation(n);
    const std::size_t train_n = (n + 1) / 2;
    Dataset train, test;
    train.records.reserve(train_n);
    test.records.reserve(n - train_n);
    for (std::size_t k = 0; k < n; ++k)
        (k < train_n ? train : test).records.push_back(d.records[order[k]]);
    return {std::move(train), std::move(test)};
}

Dataset StandardizeTransform::apply(const Dataset& d) const {
    Dataset out = d;
    for (Record& r : out.records) {
        if (r.x.size() != means.size())
            fail(ErrorKind::DimensionMismatch, "transform dimension does not match record");
        for (std::size_t j = 0; j < r.x.size(); ++j)
            r.x[j] = sds[j] > 0.0 ? (r.x[j] - means[j]) / sds[j] : 0.0;
    }
    return out;
}

Dataset StandardizeTransform::invert(const Dataset& d) const {
    Dataset out = d;
    for (Record& r : out.records) {
        if (r.x.size() != means.size())
            fail(ErrorKind::DimensionMismatch, "transform dimension does not match record");
        for (std::size_t j = 0; j < r.x.size(); ++j)
            r.x[j] = sds[j] > 0.0 ? r.x[j] * sds[j] + means[j] : means[j];
    }
    return out;
}

StandardizeResult standardize(const Dataset& train, const Dataset& test) {
    validate_dataset(train);
    const std::size_t p = train.feature_dim();
    const double n = static_cast<double>(train.size());

    StandardizeResult out;
    out.transform.means.assign(p, 0.0);
    out.transform.sds.assign(p, 0.0);

    for (const Record& r : train.records)
        for (std::size_t j = 0; j < p; ++j) out.transform.means[j] += r.x[j];
    for (double& m : out.transform.means) m /= n;

    for (const Record& r : train.records)
        for (std::size_t j = 0; j < p; ++j) {
            const double dx = r.x[j] - out.transform.means[j];
            out.transform.sds[j] += dx * dx;
        }
    for (std::size_t j = 0; j < p; ++j) {
        out.transform.sds[j] = std::sqrt(out.transform.sds[j] / n);
        if (out.transform.sds[j] < 1e-15) {
            out.transform.sds[j] = 0.0;
            out.transform.constant_columns.push_back(j);
        }
    }

    out.train = out.transform.apply(train);
    out.test = test.records.empty() ? test : out.transform.apply(test);
    return out;
}

Dataset synth_linear(std::size_t n, std::size_t p_x, const Vector& theta_star, double noise_sd,
                     std::uint64_t seed) {
    if (n < 1) fail(ErrorKind::InvalidParams, "synth_linear needs n >= 1");
    if (theta_star.size() != p_x + 1)
        fail(ErrorKind::DimensionMismatch, "theta_star must have length p_x + 1");
    if (!(noise_sd >= 0.0)) fail(ErrorKind::InvalidParams, "noise_sd must be >= 0");

    Rng rng(seed);
    Dataset d;
    d.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Record r;
        r.x.resize(p_x);
        for (double& xi : r.x) xi = rng.normal();
        r.y = augmented_dot(theta_star, r.x);
        if (noise_sd > 0.0) r.y += rng.normal(0.0, noise_sd);
        d.records.push_back(std::move(r));
    }
    return d;
}

DatasetSchema wine_quality_schema() {
    DatasetSchema s;
    s.name = "wine";
    const char* cols[] = {"fixed acidity",       "volatile acidity", "citric acid",
                          "residual sugar",      "chlorides",        "free sulfur dioxide",
                          "total sulfur dioxide", "density",          "pH",
                          "sulphates",           "alcohol"};
    for (const char* c : cols) s.features.push_back({c, ColumnType::Numeric});
    s.label_column = "quality";
    s.label_transform = LabelTransform::Identity;
    s.delimiter = ';';
    return s;
}

DatasetSchema boston_housing_schema() {
    DatasetSchema s;
    s.name = "boston";
    const char* cols[] = {"CRIM", "ZN",  "INDUS", "CHAS", "NOX", "RM",     "AGE",
                          "DIS",  "RAD", "TAX",   "PTRATIO", "B", "LSTAT"};
    for (const char* c : cols) s.features.push_back({c, ColumnType::Numeric});
    s.label_column = "MEDV";
    s.label_transform = LabelTransform::Identity;
    s.has_header = false;
    s.whitespace_delimited = true;
    return s;
}

DatasetSchema adult_schema() {
    DatasetSchema s;
    s.name = "adult";
    // Canonical column order of the file.
    s.features = {{"age", ColumnType::Numeric},
                  {"workclass", ColumnType::Categorical},
                  {"fnlwgt", ColumnType::Numeric},
                  {"education", ColumnType::Categorical},
                  {"education-num", ColumnType::Numeric},
                  {"marital-status", ColumnType::Categorical},
                  {"occupation", ColumnType::Categorical},
                  {"relationship", ColumnType::Categorical},
                  {"race", ColumnType::Categorical},
                  {"sex", ColumnType::Categorical},
                  {"capital-gain", ColumnType::Numeric},
                  {"capital-loss", ColumnType::Numeric},
                  {"hours-per-week", ColumnType::Numeric},
                  {"native-country", ColumnType::Categorical}};
    s.label_column = "income";
    s.label_transform = LabelTransform::CategoricalToInteger;
    s.label_levels = {"<=50K", ">50K"};
    s.strip_label_dot = true;
    s.has_header = false;
    return s;
}

std::size_t expected_rows(const std::string& dataset_name) {
    if (dataset_name == "wine") return 1599;
    if (dataset_name == "boston") return 506;
    if (dataset_name == "adult") return 48842;
    fail(ErrorKind::ConfigError, "unknown dataset '" + dataset_name + "'");
}

}  // namespace wdro
