#include <doctest.h>

#include <random>

#include "microcell/components.hpp"
#include "testutil.hpp"

using namespace microcell;

TEST_CASE("blank mask labels to the empty set") {
    ComponentSet set = label_components(BinaryMask(16, 16));
    CHECK(set.empty());
    CHECK(mask_from_components(set) == BinaryMask(16, 16));
}

TEST_CASE("corner-touching pixels are separate components") {
    BinaryMask mask = testutil::mask_from_string({
        "X...",
        ".X..",
        "....",
    });
    ComponentSet set = label_components(mask);
    REQUIRE(set.size() == 2);
    CHECK(set.components[0].id == 1);
    CHECK(set.components[1].id == 2);
    CHECK(set.components[0].area_px() == 1);
}

TEST_CASE("component metadata is consistent") {
    BinaryMask mask = testutil::mask_from_string({
        ".XX...",
        ".XX...",
        "....XX",
    });
    ComponentSet set = label_components(mask);
    REQUIRE(set.size() == 2);
    const Component& a = set.components[0];
    CHECK(a.area_px() == 4);
    CHECK(a.min_row == 0);
    CHECK(a.max_row == 1);
    CHECK(a.min_col == 1);
    CHECK(a.max_col == 2);
    CHECK(a.centroid_row == doctest::Approx(0.5));
    CHECK(a.centroid_col == doctest::Approx(1.5));
    const Component& b = set.components[1];
    CHECK(b.min_row == 2);
    CHECK(b.centroid_col == doctest::Approx(4.5));
}

TEST_CASE("labeling matches the flood-fill oracle on random masks") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        BinaryMask mask = testutil::random_mask(64, 64, 0.3, rng);
        int oracle_count = 0;
        const std::vector<int> oracle = testutil::flood_fill_labels(mask, oracle_count);

        ComponentSet set = label_components(mask);
        CHECK(int(set.size()) == oracle_count);
        std::vector<int> labels(mask.bits.size(), 0);
        size_t area_sum = 0;
        for (const auto& comp : set.components) {
            area_sum += comp.pixels.size();
            for (const auto& p : comp.pixels) labels[size_t(p.row) * mask.width + p.col] = comp.id;
        }
        CHECK(labels == oracle);
        CHECK(area_sum == mask.foreground_count());
    }
}

TEST_CASE("label then reconstruct is the identity") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        BinaryMask mask = testutil::random_mask(48, 48, 0.35, rng);
        CHECK(mask_from_components(label_components(mask)) == mask);
    }
}

TEST_CASE("a subset of components reconstructs a subset of the foreground") {
    std::mt19937 rng(4);
    BinaryMask mask = testutil::random_mask(48, 48, 0.3, rng);
    ComponentSet set = label_components(mask);
    REQUIRE(set.size() > 2);
    ComponentSet subset{set.width, set.height,
                        {set.components.begin(), set.components.begin() + set.components.size() / 2}};
    BinaryMask partial = mask_from_components(subset);
    size_t partial_count = 0;
    for (size_t i = 0; i < mask.bits.size(); ++i) {
        if (partial.bits[i]) {
            CHECK(mask.bits[i]);
            ++partial_count;
        }
    }
    CHECK(partial_count < mask.foreground_count());
}
