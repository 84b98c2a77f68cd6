#include <doctest.h>

#include "test_support.hpp"
#include "tilelab/errors.hpp"
#include "tilelab/image.hpp"
#include "tilelab/png_io.hpp"
#include "tilelab/rng.hpp"
#include "tilelab/tileset.hpp"

using namespace tilelab;
using namespace testsupport;

TEST_SUITE("tile_core") {

TEST_CASE("split: exact division yields a full grid") {
    TileImage image(64, 64, Rgba{10, 20, 30, 255});
    Tileset set = split_tileset(image, 32);
    CHECK(set.rows() == 2);
    CHECK(set.cols() == 2);
    CHECK(set.dropped_pixels() == 0);
    CHECK(set.tile(1, 1).width() == 32);
}

TEST_CASE("split: margins are dropped and counted") {
    TileImage image(70, 64, Rgba{0, 0, 0, 255});
    Tileset set = split_tileset(image, 32);
    CHECK(set.rows() == 2);
    CHECK(set.cols() == 2);
    // 6-pixel column over the full height
    CHECK(set.dropped_pixels() == 6 * 64);
}

TEST_CASE("split: single-tile image equals the input") {
    Rng rng(3);
    TileImage image(32, 32);
    for (Rgba& p : image.pixels()) {
        p = Rgba{static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
    }
    Tileset set = split_tileset(image, 32);
    REQUIRE(set.rows() == 1);
    REQUIRE(set.cols() == 1);
    CHECK(set.tile(0, 0) == image);
}

TEST_CASE("split: image smaller than one tile is rejected") {
    TileImage image(16, 48);
    CHECK_THROWS_AS(split_tileset(image, 32), std::invalid_argument);
}

TEST_CASE("split then reassemble reproduces the cropped source") {
    Rng rng(11);
    TileImage image(70, 37);
    for (Rgba& p : image.pixels()) {
        p = Rgba{static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
    }
    const int ts = 16;
    Tileset set = split_tileset(image, ts);
    for (int r = 0; r < set.rows(); ++r) {
        for (int c = 0; c < set.cols(); ++c) {
            const TileImage& tile = set.tile(r, c);
            for (int y = 0; y < ts; ++y) {
                for (int x = 0; x < ts; ++x) {
                    REQUIRE(tile.at(y, x) == image.at(r * ts + y, c * ts + x));
                }
            }
        }
    }
}

TEST_CASE("opacity: fully transparent and fully opaque tiles") {
    OpacityStats none = opacity_stats(transparent_tile(32));
    CHECK(none.opaque_fraction == 0.0);
    CHECK_FALSE(none.border_opaque);

    OpacityStats full = opacity_stats(solid_tile(32, Rgba{1, 2, 3, 255}));
    CHECK(full.opaque_fraction == 1.0);
    CHECK(full.border_opaque);
}

TEST_CASE("opacity: single interior pixel") {
    TileImage tile = transparent_tile(32);
    tile.at(16, 16) = Rgba{255, 0, 0, 128};
    OpacityStats stats = opacity_stats(tile);
    CHECK(stats.opaque_fraction == doctest::Approx(1.0 / 1024.0));
    CHECK_FALSE(stats.border_opaque);
}

TEST_CASE("opacity: permutation of interior pixels changes nothing") {
    Rng rng(5);
    TileImage tile(16, 16);
    for (Rgba& p : tile.pixels()) {
        p.a = rng.below(4) == 0 ? 0 : 255;
    }
    OpacityStats before = opacity_stats(tile);

    // Shuffle interior pixels only.
    std::vector<Rgba> interior;
    for (int r = 1; r < 15; ++r) {
        for (int c = 1; c < 15; ++c) interior.push_back(tile.at(r, c));
    }
    rng.shuffle(interior);
    std::size_t i = 0;
    for (int r = 1; r < 15; ++r) {
        for (int c = 1; c < 15; ++c) tile.at(r, c) = interior[i++];
    }
    OpacityStats after = opacity_stats(tile);
    CHECK(after.opaque_fraction == before.opaque_fraction);
    CHECK(after.border_opaque == before.border_opaque);
}

TEST_CASE("grayscale: rec.601 weights") {
    TileImage tile(3, 1);
    tile.at(0, 0) = Rgba{255, 255, 255, 255};
    tile.at(0, 1) = Rgba{0, 0, 0, 255};
    tile.at(0, 2) = Rgba{255, 0, 0, 0};  // alpha ignored
    GrayImage gray = to_grayscale(tile);
    CHECK(gray.at(0, 0) == 255);
    CHECK(gray.at(0, 1) == 0);
    CHECK(gray.at(0, 2) == 76);  // round(0.299 * 255) = round(76.245)
}

TEST_CASE("grayscale: invariant under alpha changes") {
    Rng rng(7);
    TileImage tile(8, 8);
    for (Rgba& p : tile.pixels()) {
        p = Rgba{static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
    }
    GrayImage before = to_grayscale(tile);
    for (Rgba& p : tile.pixels()) p.a = static_cast<std::uint8_t>(rng.below(256));
    GrayImage after = to_grayscale(tile);
    CHECK(before.values == after.values);
}

TEST_CASE("bicubic: factor 1 is the identity") {
    Rng rng(13);
    TileImage tile(8, 8);
    for (Rgba& p : tile.pixels()) {
        p = Rgba{static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
    }
    CHECK(upscale_bicubic(tile, 1) == tile);
}

TEST_CASE("bicubic: constant image stays constant") {
    Rgba color{37, 141, 9, 200};
    TileImage out = upscale_bicubic(solid_tile(8, color), 4);
    CHECK(out.width() == 32);
    CHECK(out.height() == 32);
    for (const Rgba& p : out.pixels()) REQUIRE(p == color);
}

TEST_CASE("bicubic: 2x2 checkerboard against the reference implementation") {
    TileImage tile(2, 2);
    tile.at(0, 0) = Rgba{0, 0, 0, 255};
    tile.at(0, 1) = Rgba{255, 255, 255, 255};
    tile.at(1, 0) = Rgba{255, 255, 255, 255};
    tile.at(1, 1) = Rgba{0, 0, 0, 255};

    TileImage out = upscale_bicubic(tile, 2);
    REQUIRE(out.width() == 4);
    REQUIRE(out.height() == 4);

    // Frozen from the reference evaluation (clamped at the corners).
    const int expected[4][4] = {{0, 41, 214, 255},
                                {41, 83, 172, 214},
                                {214, 172, 83, 41},
                                {255, 214, 41, 0}};
    std::vector<std::vector<int>> src = {{0, 255}, {255, 0}};
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            CAPTURE(y);
            CAPTURE(x);
            CHECK(out.at(y, x).r == expected[y][x]);
            CHECK(out.at(y, x).r == ref_bicubic_sample(src, 2, 2, x, y, 2));
        }
    }
}

TEST_CASE("bicubic: output never leaves [0,255] on random tiles") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        TileImage tile(6, 6);
        for (Rgba& p : tile.pixels()) {
            // High-contrast values provoke overshoot.
            std::uint8_t v = rng.below(2) ? 255 : 0;
            p = Rgba{v, v, v, 255};
        }
        TileImage out = upscale_bicubic(tile, 3);
        std::vector<std::vector<int>> src(6, std::vector<int>(6));
        for (int y = 0; y < 6; ++y) {
            for (int x = 0; x < 6; ++x) src[y][x] = tile.at(y, x).r;
        }
        for (int y = 0; y < out.height(); ++y) {
            for (int x = 0; x < out.width(); ++x) {
                REQUIRE(out.at(y, x).r ==
                        ref_bicubic_sample(src, 6, 6, x, y, 3));
            }
        }
    }
}

TEST_CASE("bicubic: factor 0 is rejected") {
    CHECK_THROWS_AS(upscale_bicubic(solid_tile(4, Rgba{0, 0, 0, 255}), 0),
                    std::invalid_argument);
}

TEST_CASE("pad_image surrounds with solid color") {
    TileImage tile = solid_tile(4, Rgba{200, 0, 0, 255});
    TileImage padded = pad_image(tile, 4, Rgba{1, 2, 3, 255});
    CHECK(padded.width() == 12);
    CHECK(padded.height() == 12);
    CHECK(padded.at(0, 0) == Rgba{1, 2, 3, 255});
    CHECK(padded.at(4, 4) == Rgba{200, 0, 0, 255});
}

TEST_CASE("png: round trip preserves RGBA") {
    TempDir dir;
    Rng rng(23);
    TileImage image(40, 24);
    for (Rgba& p : image.pixels()) {
        p = Rgba{static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
    }
    std::string path = dir.str("round_trip.png");
    save_png(image, path);
    CHECK(load_png(path) == image);
}

TEST_CASE("png: unreadable path raises IoError") {
    CHECK_THROWS_AS(load_png("/nonexistent/nowhere.png"), IoError);
}

}  // TEST_SUITE
