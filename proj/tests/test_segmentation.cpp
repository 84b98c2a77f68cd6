#include <doctest.h>

#include <map>

#include "test_support.hpp"
#include "tilelab/rng.hpp"
#include "tilelab/segmentation.hpp"

using namespace tilelab;
using namespace testsupport;

namespace {

// Grays 100..140 keep every cross-color seam above the 0.6 threshold, so
// mask components and grown segments must coincide.
const std::vector<Rgba> kPalette = {
    Rgba{100, 100, 100, 255}, Rgba{110, 110, 110, 255},
    Rgba{120, 120, 120, 255}, Rgba{130, 130, 130, 255},
    Rgba{140, 140, 140, 255}};

struct SyntheticTileset {
    Tileset tileset;
    std::vector<std::vector<bool>> mask;
};

SyntheticTileset random_blob_tileset(Rng& rng, int max_rows, int max_cols,
                                     int tile_size) {
    int rows = 2 + static_cast<int>(rng.below(max_rows - 1));
    int cols = 2 + static_cast<int>(rng.below(max_cols - 1));
    std::vector<std::vector<int>> cells(rows, std::vector<int>(cols, -1));

    int blobs = 1 + static_cast<int>(rng.below(5));
    for (int b = 0; b < blobs; ++b) {
        int color = static_cast<int>(rng.below(kPalette.size()));
        int r = static_cast<int>(rng.below(rows));
        int c = static_cast<int>(rng.below(cols));
        int steps = 1 + static_cast<int>(rng.below(10));
        for (int s = 0; s < steps; ++s) {
            cells[r][c] = color;
            switch (rng.below(4)) {
                case 0: r = std::min(r + 1, rows - 1); break;
                case 1: r = std::max(r - 1, 0); break;
                case 2: c = std::min(c + 1, cols - 1); break;
                default: c = std::max(c - 1, 0); break;
            }
        }
    }

    SyntheticTileset out;
    out.mask.assign(rows, std::vector<bool>(cols, false));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) out.mask[r][c] = cells[r][c] >= 0;
    }
    out.tileset = split_tileset(paint_grid(cells, kPalette, tile_size), tile_size);
    return out;
}

std::vector<std::set<GridCoord>> as_member_sets(
    const std::vector<SegmentRecord>& segments) {
    std::vector<std::set<GridCoord>> sets;
    for (const SegmentRecord& seg : segments) {
        sets.emplace_back(seg.members.begin(), seg.members.end());
    }
    std::sort(sets.begin(), sets.end());
    return sets;
}

}  // namespace

TEST_SUITE("segmentation") {

TEST_CASE("one opaque tile in a transparent sea") {
    std::vector<std::vector<int>> cells = {
        {-1, -1, -1}, {-1, 0, -1}, {-1, -1, -1}};
    Tileset set = split_tileset(paint_grid(cells, kPalette, 8), 8);
    std::vector<SegmentRecord> segments = grow_segments(set, 0.6, 0.10, 4);
    REQUIRE(segments.size() == 1);
    CHECK(segments[0].members == std::vector<GridCoord>{{1, 1}});
    CHECK(segments[0].parent == GridCoord{1, 1});
}

TEST_CASE("fully transparent tileset yields no segments") {
    std::vector<std::vector<int>> cells = {{-1, -1}, {-1, -1}};
    Tileset set = split_tileset(paint_grid(cells, kPalette, 8), 8);
    CHECK(grow_segments(set, 0.6, 0.10, 4).empty());
}

TEST_CASE("two plus-shaped objects are recovered exactly") {
    // Two plus shapes separated by transparency in a 4x7 grid.
    std::vector<std::vector<int>> cells = {
        {-1, 0, -1, -1, -1, 1, -1},
        {0, 0, 0, -1, 1, 1, 1},
        {-1, 0, -1, -1, -1, 1, -1},
        {-1, -1, -1, -1, -1, -1, -1}};
    Tileset set = split_tileset(paint_grid(cells, kPalette, 8), 8);
    std::vector<SegmentRecord> segments = grow_segments(set, 0.6, 0.10, 4);
    REQUIRE(segments.size() == 2);

    std::vector<std::vector<bool>> mask(4, std::vector<bool>(7, false));
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 7; ++c) mask[r][c] = cells[r][c] >= 0;
    }
    auto expected = flood_fill_components(mask);
    std::sort(expected.begin(), expected.end());
    CHECK(as_member_sets(segments) == expected);
}

TEST_CASE("segments partition the non-transparent tiles") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        SyntheticTileset fixture = random_blob_tileset(rng, 8, 8, 8);
        std::vector<SegmentRecord> segments =
            grow_segments(fixture.tileset, 0.6, 0.10, 4);

        std::set<GridCoord> covered;
        for (const SegmentRecord& seg : segments) {
            for (const GridCoord& m : seg.members) {
                REQUIRE(covered.insert(m).second);  // pairwise disjoint
            }
        }
        std::set<GridCoord> eligible;
        for (int r = 0; r < fixture.tileset.rows(); ++r) {
            for (int c = 0; c < fixture.tileset.cols(); ++c) {
                if (opacity_stats(fixture.tileset.tile(r, c)).opaque_fraction >=
                    0.10) {
                    eligible.insert({r, c});
                }
            }
        }
        REQUIRE(covered == eligible);
    }
}

TEST_CASE("grown segments match the flood-fill oracle") {
    Rng rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        SyntheticTileset fixture = random_blob_tileset(rng, 10, 10, 8);
        std::vector<SegmentRecord> segments =
            grow_segments(fixture.tileset, 0.6, 0.10, 4);
        auto expected = flood_fill_components(fixture.mask);
        std::sort(expected.begin(), expected.end());
        REQUIRE(as_member_sets(segments) == expected);
    }
}

TEST_CASE("determinism: identical runs produce identical segments") {
    Rng rng(53);
    SyntheticTileset fixture = random_blob_tileset(rng, 10, 10, 8);
    std::vector<SegmentRecord> a = grow_segments(fixture.tileset, 0.6, 0.10, 4);
    std::vector<SegmentRecord> b = grow_segments(fixture.tileset, 0.6, 0.10, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].parent == b[i].parent);
        CHECK(a[i].members == b[i].members);
    }
}

TEST_CASE("a 256x256-tile single segment completes") {
    // Worklist traversal contract: no call-stack recursion.
    const int n = 256, ts = 2;
    TileImage image(n * ts, n * ts, Rgba{120, 120, 120, 255});
    Tileset set = split_tileset(image, ts);
    std::vector<SegmentRecord> segments = grow_segments(set, 0.6, 0.10, 2);
    REQUIRE(segments.size() == 1);
    CHECK(segments[0].members.size() ==
          static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
}

TEST_CASE("classify: interior opaque tile with transparent neighbors") {
    std::vector<std::vector<int>> cells = {
        {-1, -1, -1}, {-1, 0, -1}, {-1, -1, -1}};
    Tileset set = split_tileset(paint_grid(cells, kPalette, 8), 8);
    std::vector<SegmentRecord> segments = grow_segments(set, 0.6, 0.10, 4);
    REQUIRE(segments.size() == 1);
    CHECK(classify_segment(segments[0], set) == SegmentClass::CompleteTexture);
}

TEST_CASE("classify: sprite touching an opaque dissimilar neighbor is partial") {
    const int ts = 8;
    TileImage image(3 * ts, 3 * ts, Rgba{0, 0, 0, 0});
    // Tile (1,1): right half black opaque (touches its right border).
    for (int y = 0; y < ts; ++y) {
        for (int x = ts / 2; x < ts; ++x) {
            image.at(ts + y, ts + x) = Rgba{0, 0, 0, 255};
        }
    }
    // Tile (1,2): white opaque; seam SSIM vs black is far below 0.6.
    for (int y = 0; y < ts; ++y) {
        for (int x = 0; x < ts; ++x) {
            image.at(ts + y, 2 * ts + x) = Rgba{255, 255, 255, 255};
        }
    }
    Tileset set = split_tileset(image, ts);
    std::vector<SegmentRecord> segments = grow_segments(set, 0.6, 0.10, 4);
    REQUIRE(segments.size() == 2);

    const SegmentRecord* sprite = nullptr;
    for (const SegmentRecord& seg : segments) {
        if (seg.parent == GridCoord{1, 1}) sprite = &seg;
    }
    REQUIRE(sprite != nullptr);
    REQUIRE(sprite->members.size() == 1);
    CHECK(classify_segment(*sprite, set) == SegmentClass::Partial);
}

TEST_CASE("classify: enclosed two-tile sprite with inner margin is complete") {
    const int ts = 8;
    TileImage image(3 * ts, 4 * ts, Rgba{0, 0, 0, 0});
    // Vertical bar spanning tiles (1,1) and (2,1), 2px transparent margin.
    for (int y = ts + 2; y < 3 * ts - 2; ++y) {
        for (int x = ts + 2; x < 2 * ts - 2; ++x) {
            image.at(y, x) = Rgba{90, 60, 20, 255};
        }
    }
    Tileset set = split_tileset(image, ts);
    std::vector<SegmentRecord> segments = grow_segments(set, 0.6, 0.10, 4);
    REQUIRE(segments.size() == 1);
    REQUIRE(segments[0].members ==
            std::vector<GridCoord>{{1, 1}, {2, 1}});
    CHECK(classify_segment(segments[0], set) == SegmentClass::Complete);
}

TEST_CASE("classify: fully opaque texture patch at the grid boundary") {
    // A tileset entirely painted: borders are opaque, segment spans the grid.
    std::vector<std::vector<int>> cells = {{0, 0}, {0, 0}};
    Tileset set = split_tileset(paint_grid(cells, kPalette, 8), 8);
    std::vector<SegmentRecord> segments = grow_segments(set, 0.6, 0.10, 4);
    REQUIRE(segments.size() == 1);
    CHECK(classify_segment(segments[0], set) == SegmentClass::PartialTexture);
}

TEST_CASE("report: usable rate over simple mixes") {
    auto mk = [](SegmentClass cls) {
        SegmentRecord seg;
        seg.parent = {0, 0};
        seg.members = {{0, 0}};
        seg.cls = cls;
        seg.classified = true;
        return seg;
    };
    std::vector<SegmentRecord> two_two = {
        mk(SegmentClass::Complete), mk(SegmentClass::Complete),
        mk(SegmentClass::Partial), mk(SegmentClass::Partial)};
    CHECK(segmentation_report(two_two).usable_rate == doctest::Approx(0.5));

    std::vector<SegmentRecord> only_texture = {mk(SegmentClass::CompleteTexture)};
    CHECK(segmentation_report(only_texture).usable_rate == doctest::Approx(1.0));

    CHECK(segmentation_report({}).total_segments == 0);
    CHECK(segmentation_report({}).usable_rate == 0.0);
}

TEST_CASE("report: published segment mixture") {
    // complete 737, partial 1064, partial_texture 279, complete_texture 17.
    // Under usable = (complete + complete_texture) / total this is 754/2097,
    // about 0.3596.
    auto mk = [](SegmentClass cls) {
        SegmentRecord seg;
        seg.parent = {0, 0};
        seg.members = {{0, 0}};
        seg.cls = cls;
        seg.classified = true;
        return seg;
    };
    std::vector<SegmentRecord> segments;
    for (int i = 0; i < 737; ++i) segments.push_back(mk(SegmentClass::Complete));
    for (int i = 0; i < 1064; ++i) segments.push_back(mk(SegmentClass::Partial));
    for (int i = 0; i < 279; ++i) {
        segments.push_back(mk(SegmentClass::PartialTexture));
    }
    for (int i = 0; i < 17; ++i) {
        segments.push_back(mk(SegmentClass::CompleteTexture));
    }
    SegmentationReport report = segmentation_report(segments);
    CHECK(report.total_segments == 2097);
    CHECK(report.usable_rate == doctest::Approx(754.0 / 2097.0).epsilon(1e-9));
    CHECK(report.usable_rate == doctest::Approx(0.3596).epsilon(1e-3));
}

}  // TEST_SUITE
