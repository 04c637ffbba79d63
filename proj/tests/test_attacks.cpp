#include <doctest.h>

#include <cmath>

#include "wdro/attacks.hpp"
#include "wdro/data.hpp"

using namespace wdro;

namespace {

Dataset ten_records() {
    Dataset d;
    for (int i = 0; i < 10; ++i)
        d.records.push_back({{static_cast<double>(i), 1.0}, static_cast<double>(i)});
    return d;
}

bool records_equal(const Record& a, const Record& b) { return a.x == b.x && a.y == b.y; }

}  // namespace

TEST_SUITE_BEGIN("attacks");

TEST_CASE("zero ratio leaves the dataset untouched") {
    const Dataset d = ten_records();
    AttackSpec spec;
    spec.kind = AttackKind::LabelFlipTo;
    spec.value = 10.0;
    spec.beta = 0.0;
    const PoisonResult r = poison(d, spec);
    CHECK(r.poisoned_indices.empty());
    REQUIRE(r.poisoned.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK(records_equal(r.poisoned.records[i], d.records[i]));
}

TEST_CASE("label flip hits exactly floor(beta n) records") {
    const Dataset d = ten_records();
    AttackSpec spec;
    spec.kind = AttackKind::LabelFlipTo;
    spec.value = 10.0;
    spec.beta = 0.2;
    spec.seed = 5;
    const PoisonResult r = poison(d, spec);
    REQUIRE(r.poisoned_indices.size() == 2);

    std::size_t flipped = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const bool selected = std::find(r.poisoned_indices.begin(), r.poisoned_indices.end(), i) !=
                              r.poisoned_indices.end();
        if (selected) {
            CHECK(r.poisoned.records[i].y == 10.0);
            CHECK(r.poisoned.records[i].x == d.records[i].x);
            ++flipped;
        } else {
            CHECK(records_equal(r.poisoned.records[i], d.records[i]));
        }
    }
    CHECK(flipped == 2);
}

TEST_CASE("count exactness across ratios") {
    const Dataset d = ten_records();
    for (double beta : {0.0, 0.09, 0.1, 0.25, 0.5, 0.99}) {
        AttackSpec spec;
        spec.kind = AttackKind::FeatureGaussian;
        spec.variance = 4.0;
        spec.beta = beta;
        spec.seed = 7;
        const PoisonResult r = poison(d, spec);
        CHECK(r.poisoned_indices.size() ==
              static_cast<std::size_t>(std::floor(beta * static_cast<double>(d.size()))));
    }
}

TEST_CASE("feature modification replaces features and keeps labels") {
    const Dataset d = ten_records();
    AttackSpec spec;
    spec.kind = AttackKind::FeatureGaussian;
    spec.variance = 100.0;
    spec.beta = 0.3;
    spec.seed = 11;
    const PoisonResult r = poison(d, spec);
    REQUIRE(r.poisoned_indices.size() == 3);
    for (std::size_t idx : r.poisoned_indices) {
        CHECK(r.poisoned.records[idx].y == d.records[idx].y);
        CHECK(r.poisoned.records[idx].x != d.records[idx].x);
    }
}

TEST_CASE("label negate flips binary labels and rejects others") {
    Dataset binary;
    for (int i = 0; i < 6; ++i)
        binary.records.push_back({{static_cast<double>(i)}, i % 2 == 0 ? 0.0 : 1.0});
    AttackSpec spec;
    spec.kind = AttackKind::LabelNegate;
    spec.beta = 0.5;
    spec.seed = 3;
    const PoisonResult r = poison(binary, spec);
    for (std::size_t idx : r.poisoned_indices)
        CHECK(r.poisoned.records[idx].y == 1.0 - binary.records[idx].y);

    const Dataset real_labels = ten_records();
    CHECK_THROWS_AS(poison(real_labels, spec), Error);
    try {
        poison(real_labels, spec);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidSpec);
    }
}

TEST_CASE("insertion appends generated records") {
    const Dataset d = ten_records();
    AttackSpec spec;
    spec.kind = AttackKind::Insert;
    spec.beta = 0.3;
    spec.seed = 13;
    spec.insert.feature_variance = 4.0;
    spec.insert.label_value = -7.0;
    const PoisonResult r = poison(d, spec);
    REQUIRE(r.poisoned.size() == 13);
    REQUIRE(r.poisoned_indices.size() == 3);
    for (std::size_t idx : r.poisoned_indices) {
        CHECK(idx >= 10);
        CHECK(r.poisoned.records[idx].y == -7.0);
    }
    for (std::size_t i = 0; i < 10; ++i) CHECK(records_equal(r.poisoned.records[i], d.records[i]));
}

TEST_CASE("poisoning is deterministic in the seed") {
    const Dataset d = ten_records();
    AttackSpec spec;
    spec.kind = AttackKind::FeatureGaussian;
    spec.variance = 9.0;
    spec.beta = 0.4;
    spec.seed = 17;
    const PoisonResult a = poison(d, spec);
    const PoisonResult b = poison(d, spec);
    CHECK(a.poisoned_indices == b.poisoned_indices);
    for (std::size_t i = 0; i < a.poisoned.size(); ++i)
        CHECK(records_equal(a.poisoned.records[i], b.poisoned.records[i]));
}

TEST_CASE("invalid specs are rejected") {
    AttackSpec spec;
    spec.beta = 1.0;
    CHECK_THROWS_AS(validate(spec), Error);
    spec.beta = 0.2;
    spec.kind = AttackKind::FeatureGaussian;
    spec.variance = 0.0;
    CHECK_THROWS_AS(validate(spec), Error);
}

TEST_SUITE_END();
