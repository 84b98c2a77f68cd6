#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilelab/image.hpp"

namespace tilelab {

enum class Side { Top, Bottom, Left, Right };

std::string to_string(Side side);

// A grayscale boundary strip. Row r holds the pixels at distance r from the
// tile edge, so facing strips of two adjacent tiles pair up positionally:
// row 0 of each strip is the seam. Columns run along the edge in increasing
// pixel coordinates (x for top/bottom, y for left/right).
struct BoundaryStrip {
    Side side = Side::Top;
    int strip_width = 0;  // rows
    int length = 0;       // columns, the tile dimension along the edge
    std::vector<std::uint8_t> values;

    std::uint8_t at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * length + col];
    }
};

struct SsimParams {
    double c1 = 6.5025;        // (0.01 * 255)^2
    double c2 = 58.5225;       // (0.03 * 255)^2
    double dynamic_range = 255.0;

    static SsimParams from_range(double range) {
        SsimParams p;
        p.dynamic_range = range;
        p.c1 = (0.01 * range) * (0.01 * range);
        p.c2 = (0.03 * range) * (0.03 * range);
        return p;
    }
};

BoundaryStrip extract_boundary(const TileImage& tile, Side side, int strip_width);

// Global single-window SSIM over two equal-shaped strips, population
// normalization. Result is in [-1, 1] up to rounding.
double ssim(const BoundaryStrip& b1, const BoundaryStrip& b2,
            const SsimParams& params = {});

enum class Orientation { Horizontal, Vertical };

// SSIM of the facing boundary strips: right edge of `a` vs left edge of `b`
// for horizontal, bottom edge of `a` vs top edge of `b` for vertical.
double adjacency_score(const TileImage& a, const TileImage& b,
                       Orientation orientation, int strip_width = 4,
                       const SsimParams& params = {});

inline bool is_adjacent(double score, double threshold) {
    return score >= threshold;
}

}  // namespace tilelab
