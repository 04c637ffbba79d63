#pragma once

#include <cstdint>
#include <vector>

#include "wdro/core.hpp"

namespace wdro {

enum class AttackKind {
    LabelFlipTo,      // set selected labels to `value`
    LabelNegate,      // flip selected binary labels 0 <-> 1
    FeatureGaussian,  // replace selected features with N(0, variance) draws
    Insert,           // append new records drawn from the generator
};

const char* to_string(AttackKind kind);
AttackKind attack_kind_from_string(const std::string& name);

/// Generator for inserted records: features i.i.d. N(0, feature_variance),
/// label fixed at label_value.
struct InsertGenerator {
    double feature_variance = 1.0;
    double label_value = 0.0;
};

struct AttackSpec {
    AttackKind kind = AttackKind::LabelFlipTo;
    double beta = 0.0;        // poison ratio in [0,1)
    std::uint64_t seed = 0;
    double value = 0.0;       // LabelFlipTo target
    double variance = 1.0;    // FeatureGaussian variance
    InsertGenerator insert;
};

void validate(const AttackSpec& spec);

struct PoisonResult {
    Dataset poisoned;
    /// Indices (into `poisoned`) of the altered or inserted records; exactly
    /// floor(beta * n) of them.
    std::vector<std::size_t> poisoned_indices;
};

/// Apply the attack to exactly floor(beta * n) records, selected uniformly
/// without replacement by the seeded generator. Untouched records are
/// bit-identical to the input.
PoisonResult poison(const Dataset& d, const AttackSpec& spec);

}  // namespace wdro
