#include <doctest.h>

#include <cmath>
#include <random>

#include "microcell/analyzer.hpp"
#include "testutil.hpp"

using namespace microcell;

namespace {

ComponentSet blobs(const std::vector<std::tuple<int, int, int, int>>& rects, int w = 64,
                   int h = 64) {
    BinaryMask mask(w, h);
    for (const auto& [r, c, bh, bw] : rects) testutil::fill_rect(mask, r, c, bh, bw);
    return label_components(mask);
}

}  // namespace

TEST_CASE("size filter keeps boundary-equal areas") {
    AnalysisConfig cfg;
    cfg.min_area_px = 30;
    cfg.min_gap_px = 0;

    ComponentSet cells = blobs({{2, 2, 2, 5}, {10, 2, 5, 6}, {20, 2, 6, 6}});  // 10, 30, 36 px
    ComponentSet kept = filter_by_size(cells, cfg);
    REQUIRE(kept.size() == 2);
    CHECK(kept.components[0].area_px() == 30);
    CHECK(kept.components[1].area_px() == 36);

    CHECK(filter_by_size(ComponentSet{64, 64, {}}, cfg).empty());
}

TEST_CASE("size filter can enforce measured dimensions") {
    AnalysisConfig cfg;
    cfg.min_area_px = 1;
    cfg.pixel_size_um = 0.1;
    cfg.min_length_um = 3.0;

    // 40x6 rod (4.0 um) passes, 20x6 rod (2.0 um) does not
    ComponentSet cells = blobs({{2, 2, 6, 40}, {20, 2, 6, 20}});
    ComponentSet kept = filter_by_size(cells, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept.components[0].max_col == 41);
}

TEST_CASE("proximity filter removes both members of a close pair") {
    AnalysisConfig cfg;
    cfg.min_gap_px = 2;

    // 1 px gap: both go
    CHECK(filter_by_proximity(blobs({{2, 2, 3, 3}, {2, 6, 3, 3}}), cfg).empty());
    // 10 px apart: both stay
    CHECK(filter_by_proximity(blobs({{2, 2, 3, 3}, {2, 15, 3, 3}}), cfg).size() == 2);
}

TEST_CASE("proximity removals do not cascade along a chain") {
    AnalysisConfig cfg;
    cfg.min_gap_px = 3;
    // A-B and B-C close, so all three are decided on the original set
    ComponentSet chain = blobs({{2, 2, 3, 3}, {2, 7, 3, 3}, {2, 12, 3, 3}});
    CHECK(component_distance(chain.components[0], chain.components[1]) == doctest::Approx(3.0));
    CHECK(filter_by_proximity(chain, cfg).empty());

    // with a wider gap only the tight pair is dropped
    ComponentSet mixed = blobs({{2, 2, 3, 3}, {2, 7, 3, 3}, {2, 30, 3, 3}});
    ComponentSet kept = filter_by_proximity(mixed, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept.components[0].min_col == 30);
}

TEST_CASE("pairwise distances match the exhaustive pixel oracle") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        BinaryMask mask = testutil::random_mask(40, 40, 0.2, rng);
        ComponentSet set = label_components(mask);
        if (set.size() < 2) continue;
        for (size_t i = 0; i + 1 < std::min<size_t>(set.size(), 5); ++i)
            for (size_t j = i + 1; j < std::min<size_t>(set.size(), 5); ++j) {
                double best = 1e18;
                for (const auto& p : set.components[i].pixels)
                    for (const auto& q : set.components[j].pixels)
                        best = std::min(best, std::hypot(p.row - q.row, p.col - q.col));
                CHECK(component_distance(set.components[i], set.components[j]) ==
                      doctest::Approx(best));
            }
    }
}

TEST_CASE("proximity filter is permutation-invariant and idempotent") {
    std::mt19937 rng(23);
    AnalysisConfig cfg;
    cfg.min_gap_px = 2.5;
    for (int trial = 0; trial < 10; ++trial) {
        BinaryMask mask = testutil::random_mask(48, 48, 0.25, rng);
        ComponentSet set = label_components(mask);

        ComponentSet shuffled = set;
        std::shuffle(shuffled.components.begin(), shuffled.components.end(), rng);
        ComponentSet kept = filter_by_proximity(set, cfg);
        ComponentSet kept_shuffled = filter_by_proximity(shuffled, cfg);
        CHECK(mask_from_components(kept) == mask_from_components(kept_shuffled));

        // idempotent
        CHECK(mask_from_components(filter_by_proximity(kept, cfg)) ==
              mask_from_components(kept));

        // never adds pixels
        const BinaryMask out = mask_from_components(kept);
        for (size_t i = 0; i < mask.bits.size(); ++i)
            if (out.bits[i]) CHECK(mask.bits[i]);
    }
}

TEST_CASE("cluster filter keeps exactly the intersecting clusters") {
    ComponentSet cells = blobs({{10, 10, 6, 20}});
    // inside, one-pixel touch, outside
    ComponentSet clusters = blobs({{12, 12, 2, 2}, {15, 29, 2, 2}, {40, 40, 3, 3}});
    ComponentSet kept = filter_clusters(clusters, cells);
    REQUIRE(kept.size() == 2);
    CHECK(kept.components[0].min_row == 12);
    CHECK(kept.components[1].min_row == 15);

    CHECK(filter_clusters(clusters, ComponentSet{64, 64, {}}).empty());
    CHECK(filter_clusters(blobs({}), cells).empty());

    // filtering twice changes nothing
    CHECK(mask_from_components(filter_clusters(kept, cells)) == mask_from_components(kept));
}

TEST_CASE("cluster assignment counts per intersecting cell") {
    // two cells separated by one background column, one cluster spanning both
    ComponentSet cells = blobs({{10, 10, 6, 10}, {10, 21, 6, 10}});
    REQUIRE(cells.size() == 2);
    ComponentSet straddling = blobs({{12, 18, 2, 6}});
    ClusterAssignment assign = assign_clusters(straddling, cells);
    REQUIRE(assign.clusters_of_cell.size() == 2);
    CHECK(assign.clusters_of_cell[0].size() == 1);
    CHECK(assign.clusters_of_cell[1].size() == 1);
    CHECK(assign.cells_of_cluster[0].size() == 2);

    // one cluster inside one cell
    ComponentSet inner = blobs({{12, 12, 2, 2}});
    assign = assign_clusters(inner, cells);
    CHECK(assign.clusters_of_cell[0].size() == 1);
    CHECK(assign.clusters_of_cell[1].empty());

    // no clusters at all
    assign = assign_clusters(blobs({}), cells);
    for (const auto& v : assign.clusters_of_cell) CHECK(v.empty());
}

TEST_CASE("assignment sums are consistent") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        BinaryMask cell_mask = testutil::random_mask(48, 48, 0.2, rng);
        BinaryMask cluster_mask = testutil::random_mask(48, 48, 0.1, rng);
        ComponentSet cells = label_components(cell_mask);
        ComponentSet clusters = filter_clusters(label_components(cluster_mask), cells);
        ClusterAssignment assign = assign_clusters(clusters, cells);

        size_t by_cells = 0, by_clusters = 0;
        for (const auto& v : assign.clusters_of_cell) by_cells += v.size();
        for (const auto& v : assign.cells_of_cluster) by_clusters += v.size();
        CHECK(by_cells == by_clusters);
        // every filtered cluster touches at least one cell
        for (const auto& v : assign.cells_of_cluster) CHECK(!v.empty());
        // per-cell lists are ascending cluster ids
        for (const auto& v : assign.clusters_of_cell) CHECK(std::is_sorted(v.begin(), v.end()));
    }
}
