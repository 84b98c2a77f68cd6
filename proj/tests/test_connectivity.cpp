#include <doctest.h>

#include "test_support.hpp"
#include "tilelab/connectivity.hpp"
#include "tilelab/rng.hpp"

using namespace tilelab;
using namespace testsupport;

namespace {

Tileset tileset_from(const TileImage& image, int tile_size) {
    return split_tileset(image, tile_size);
}

// Random tile content with contiguous opaque patches.
TileImage random_tileset_image(Rng& rng, int rows, int cols, int ts) {
    TileImage image(cols * ts, rows * ts, Rgba{0, 0, 0, 0});
    for (int r = 0; r < rows * ts; ++r) {
        for (int c = 0; c < cols * ts; ++c) {
            if (rng.below(3) == 0) continue;  // leave transparent
            std::uint8_t v = static_cast<std::uint8_t>(rng.below(256));
            image.at(r, c) = Rgba{v, v, v, 255};
        }
    }
    return image;
}

}  // namespace

TEST_SUITE("connectivity") {

TEST_CASE("direction metadata is consistent") {
    CHECK(to_string(Direction8::TopLeft) == "top_left");
    CHECK(direction_from_string("right_down") == Direction8::RightDown);
    CHECK(direction_side(Direction8::LeftDown) == Side::Left);
    CHECK(direction_first_half(Direction8::TopLeft));
    CHECK_FALSE(direction_first_half(Direction8::RightDown));
    for (Direction8 dir : kAllDirections) {
        CHECK(facing_direction(facing_direction(dir)) == dir);
        CHECK(direction_first_half(facing_direction(dir)) ==
              direction_first_half(dir));
    }
}

TEST_CASE("edge_segment: region definitions on a 32x32 tile") {
    TileImage tile(32, 32);
    for (int r = 0; r < 32; ++r) {
        for (int c = 0; c < 32; ++c) {
            std::uint8_t v = static_cast<std::uint8_t>((r * 37 + c * 11) % 256);
            tile.at(r, c) = Rgba{v, v, v, 255};
        }
    }
    GrayImage gray = to_grayscale(tile);

    // top_left -> rows 0..3, cols 0..15
    BoundaryStrip tl = edge_segment(tile, Direction8::TopLeft, 4);
    REQUIRE(tl.strip_width == 4);
    REQUIRE(tl.length == 16);
    for (int d = 0; d < 4; ++d) {
        for (int i = 0; i < 16; ++i) {
            REQUIRE(tl.at(d, i) == gray.at(d, i));
        }
    }
    // right_down -> cols 28..31, rows 16..31 (read inward from the edge)
    BoundaryStrip rd = edge_segment(tile, Direction8::RightDown, 4);
    for (int d = 0; d < 4; ++d) {
        for (int i = 0; i < 16; ++i) {
            REQUIRE(rd.at(d, i) == gray.at(16 + i, 31 - d));
        }
    }
}

TEST_CASE("edge_segment: bottom_right half-row content") {
    TileImage tile = transparent_tile(32);
    for (int c = 0; c < 32; ++c) tile.at(31, c) = Rgba{255, 0, 0, 255};
    BoundaryStrip br = edge_segment(tile, Direction8::BottomRight, 1);
    REQUIRE(br.length == 16);
    for (int i = 0; i < 16; ++i) REQUIRE(br.at(0, i) == 76);  // red in gray
}

TEST_CASE("edge_segment: odd tile size is rejected") {
    TileImage tile = solid_tile(7, Rgba{0, 0, 0, 255});
    CHECK_THROWS_AS(edge_segment(tile, Direction8::TopLeft, 2),
                    std::invalid_argument);
}

TEST_CASE("infer: fully transparent tile connects nowhere") {
    Tileset set = tileset_from(transparent_tile(32), 32);
    std::vector<ConnectivitySet> result = infer_connectivity(set);
    REQUIRE(result.size() == 1);
    CHECK(result[0].connected.empty());
}

TEST_CASE("infer: identical solid neighbors connect across the seam") {
    TileImage image(64, 32, Rgba{90, 90, 90, 255});
    Tileset set = tileset_from(image, 32);
    std::vector<ConnectivitySet> result = infer_connectivity(set);
    REQUIRE(result.size() == 2);

    const ConnectivitySet& left = result[0];
    const ConnectivitySet& right = result[1];
    CHECK(left.tile == GridCoord{0, 0});
    CHECK(left.connected.contains(Direction8::RightUp));
    CHECK(left.connected.contains(Direction8::RightDown));
    CHECK_FALSE(left.no_neighbor.contains(Direction8::RightUp));
    CHECK(right.connected.contains(Direction8::LeftUp));
    CHECK(right.connected.contains(Direction8::LeftDown));
    // Outer edges keep their transparency-only candidates, flagged.
    CHECK(left.connected.contains(Direction8::LeftUp));
    CHECK(left.no_neighbor.contains(Direction8::LeftUp));
}

TEST_CASE("infer: opaque top-left half-edge with no top neighbor") {
    TileImage tile = transparent_tile(32);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 16; ++c) tile.at(r, c) = Rgba{140, 20, 20, 255};
    }
    Tileset set = tileset_from(tile, 32);
    std::vector<ConnectivitySet> result = infer_connectivity(set);
    REQUIRE(result.size() == 1);
    CHECK(result[0].connected == std::set<Direction8>{Direction8::TopLeft});
    CHECK(result[0].no_neighbor == std::set<Direction8>{Direction8::TopLeft});
}

TEST_CASE("infer: segments restrict the processed tiles") {
    TileImage image(64, 32, Rgba{90, 90, 90, 255});
    Tileset set = tileset_from(image, 32);
    SegmentRecord seg;
    seg.parent = {0, 1};
    seg.members = {{0, 1}};
    std::vector<ConnectivitySet> result =
        infer_connectivity(set, std::vector<SegmentRecord>{seg});
    REQUIRE(result.size() == 1);
    CHECK(result[0].tile == GridCoord{0, 1});
}

TEST_CASE("infer: mutual seam decisions agree when both gates pass") {
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        Tileset set = tileset_from(random_tileset_image(rng, 3, 3, 16), 16);
        ConnectivityParams params;
        std::vector<ConnectivitySet> result = infer_connectivity(set, {}, params);
        std::map<GridCoord, const ConnectivitySet*> by_tile;
        for (const ConnectivitySet& s : result) by_tile[s.tile] = &s;

        for (const ConnectivitySet& s : result) {
            for (Direction8 dir :
                 {Direction8::RightUp, Direction8::RightDown}) {
                GridCoord neighbor{s.tile.row, s.tile.col + 1};
                if (!set.in_grid(neighbor.row, neighbor.col)) continue;
                Direction8 facing = facing_direction(dir);
                bool a_gate = edge_segment_opacity(
                                  set.tile(s.tile.row, s.tile.col), dir, 4) >=
                              params.alpha_fraction_min;
                bool b_gate =
                    edge_segment_opacity(set.tile(neighbor.row, neighbor.col),
                                         facing, 4) >= params.alpha_fraction_min;
                if (!a_gate || !b_gate) continue;
                CHECK(s.connected.contains(dir) ==
                      by_tile.at(neighbor)->connected.contains(facing));
            }
        }
    }
}

TEST_CASE("infer: raising the threshold never adds a connection") {
    Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        Tileset set = tileset_from(random_tileset_image(rng, 3, 3, 16), 16);
        ConnectivityParams loose, strict;
        loose.ssim_threshold = 0.3;
        strict.ssim_threshold = 0.8;
        std::vector<ConnectivitySet> a = infer_connectivity(set, {}, loose);
        std::vector<ConnectivitySet> b = infer_connectivity(set, {}, strict);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (Direction8 dir : b[i].connected) {
                REQUIRE(a[i].connected.contains(dir));
            }
        }
    }
}

TEST_CASE("evaluate: identity gives all ones") {
    ConnectivitySet s;
    s.tile = {0, 0};
    s.connected = {Direction8::TopLeft, Direction8::RightDown};
    std::vector<ConnectivitySet> x = {s};
    ConnectivityEval eval = evaluate_connectivity(x, x);
    CHECK(eval.precision == 1.0);
    CHECK(eval.recall == 1.0);
    CHECK(eval.f1 == 1.0);
    CHECK(eval.exact_match_rate == 1.0);
}

TEST_CASE("evaluate: hand-counted half overlap") {
    ConnectivitySet truth;
    truth.tile = {0, 0};
    truth.connected = {Direction8::TopLeft, Direction8::RightUp};
    ConnectivitySet pred;
    pred.tile = {0, 0};
    pred.connected = {Direction8::RightUp, Direction8::BottomLeft};
    ConnectivityEval eval = evaluate_connectivity({pred}, {truth});
    // TP=1 (right_up), FP=1 (bottom_left), FN=1 (top_left)
    CHECK(eval.precision == doctest::Approx(0.5));
    CHECK(eval.recall == doctest::Approx(0.5));
    CHECK(eval.f1 == doctest::Approx(0.5));
    CHECK(eval.exact_match_rate == 0.0);
}

TEST_CASE("evaluate: empty predictions against non-empty truth") {
    ConnectivitySet t1;
    t1.tile = {0, 0};
    t1.connected = {Direction8::TopLeft};
    ConnectivitySet t2;
    t2.tile = {0, 1};  // truly empty tile
    ConnectivitySet p1;
    p1.tile = {0, 0};
    ConnectivitySet p2;
    p2.tile = {0, 1};
    ConnectivityEval eval = evaluate_connectivity({p1, p2}, {t1, t2});
    CHECK(eval.precision == 0.0);
    CHECK(eval.recall == 0.0);
    CHECK(eval.f1 == 0.0);
    CHECK(eval.exact_match_rate == doctest::Approx(0.5));
}

TEST_CASE("evaluate: mismatched tiles are rejected") {
    ConnectivitySet a;
    a.tile = {0, 0};
    ConnectivitySet b;
    b.tile = {1, 1};
    CHECK_THROWS_AS(evaluate_connectivity({a}, {b}), std::invalid_argument);
}

}  // TEST_SUITE
