#include "wdro/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "wdro/rng.hpp"

namespace wdro {

const char* to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::LabelFlipTo: return "label_flip_to";
        case AttackKind::LabelNegate: return "label_negate";
        case AttackKind::FeatureGaussian: return "feature_gaussian";
        case AttackKind::Insert: return "insert";
    }
    return "label_flip_to";
}

AttackKind attack_kind_from_string(const std::string& name) {
    if (name == "label_flip_to") return AttackKind::LabelFlipTo;
    if (name == "label_negate") return AttackKind::LabelNegate;
    if (name == "feature_gaussian") return AttackKind::FeatureGaussian;
    if (name == "insert") return AttackKind::Insert;
    fail(ErrorKind::ConfigError, "unknown attack kind '" + name + "'");
}

void validate(const AttackSpec& spec) {
    if (!(spec.beta >= 0.0 && spec.beta < 1.0))
        fail(ErrorKind::InvalidSpec, "attack beta must lie in [0,1)");
    if (spec.kind == AttackKind::FeatureGaussian && !(spec.variance > 0.0))
        fail(ErrorKind::InvalidSpec, "feature_gaussian needs variance > 0");
    if (spec.kind == AttackKind::Insert && !(spec.insert.feature_variance > 0.0))
        fail(ErrorKind::InvalidSpec, "insert generator needs variance > 0");
    if (spec.kind == AttackKind::LabelFlipTo && !std::isfinite(spec.value))
        fail(ErrorKind::InvalidSpec, "label_flip_to target must be finite");
}

PoisonResult poison(const Dataset& d, const AttackSpec& spec) {
    validate_dataset(d);
    validate(spec);

    const std::size_t n = d.size();
    const std::size_t count = static_cast<std::size_t>(std::floor(spec.beta * static_cast<double>(n)));

    PoisonResult result;
    result.poisoned = d;
    if (count == 0) return result;

    if (spec.kind == AttackKind::LabelNegate) {
        for (const Record& r : d.records)
            if (r.y != 0.0 && r.y != 1.0)
                fail(ErrorKind::InvalidSpec, "label_negate requires labels in {0,1}");
    }

    Rng rng(spec.seed);

    if (spec.kind == AttackKind::Insert) {
        const std::size_t p_x = d.feature_dim();
        const double sd = std::sqrt(spec.insert.feature_variance);
        for (std::size_t k = 0; k < count; ++k) {
            Record r;
            r.x.resize(p_x);
            for (double& xi : r.x) xi = rng.normal(0.0, sd);
            r.y = spec.insert.label_value;
            result.poisoned_indices.push_back(result.poisoned.records.size());
            result.poisoned.records.push_back(std::move(r));
        }
        return result;
    }

    std::vector<std::size_t> selected = rng.sample_without_replacement(n, count);
    std::sort(selected.begin(), selected.end());
    for (std::size_t idx : selected) {
        Record& r = result.poisoned.records[idx];
        switch (spec.kind) {
            case AttackKind::LabelFlipTo:
                r.y = spec.value;
                break;
            case AttackKind::LabelNegate:
                r.y = 1.0 - r.y;
                break;
            case AttackKind::FeatureGaussian: {
                const double sd = std::sqrt(spec.variance);
                for (double& xi : r.x) xi = rng.normal(0.0, sd);
                break;
            }
            case AttackKind::Insert:
                break;  // handled above
        }
    }
    result.poisoned_indices = std::move(selected);
    return result;
}

}  // namespace wdro
