#include "tilelab/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tilelab {

TileImage::TileImage(int width, int height, Rgba fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

OpacityStats opacity_stats(const TileImage& tile) {
    OpacityStats stats;
    std::size_t opaque = 0;
    const int w = tile.width();
    const int h = tile.height();
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (tile.at(r, c).a == 0) continue;
            ++opaque;
            if (r == 0 || r == h - 1 || c == 0 || c == w - 1) {
                stats.border_opaque = true;
            }
        }
    }
    stats.opaque_fraction =
        static_cast<double>(opaque) / (static_cast<double>(w) * h);
    return stats;
}

GrayImage to_grayscale(const TileImage& tile) {
    GrayImage out;
    out.width = tile.width();
    out.height = tile.height();
    out.values.resize(tile.pixels().size());
    for (std::size_t i = 0; i < tile.pixels().size(); ++i) {
        const Rgba& p = tile.pixels()[i];
        double y = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
        out.values[i] = static_cast<std::uint8_t>(std::lround(y));
    }
    return out;
}

namespace {

// Cubic convolution kernel with a = -0.5 (Catmull-Rom family).
double cubic_weight(double x) {
    constexpr double a = -0.5;
    x = std::fabs(x);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

std::uint8_t clamp_channel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

TileImage upscale_bicubic(const TileImage& tile, int factor) {
    if (factor < 1) throw std::invalid_argument("upscale factor must be >= 1");
    if (factor == 1) return tile;

    const int sw = tile.width();
    const int sh = tile.height();
    TileImage out(sw * factor, sh * factor);

    const double inv = 1.0 / factor;
    for (int oy = 0; oy < out.height(); ++oy) {
        // Center-aligned source coordinate, edge pixels clamped.
        double sy = (oy + 0.5) * inv - 0.5;
        int y0 = static_cast<int>(std::floor(sy));
        double ty = sy - y0;
        double wy[4];
        for (int k = 0; k < 4; ++k) wy[k] = cubic_weight(ty - (k - 1));

        for (int ox = 0; ox < out.width(); ++ox) {
            double sx = (ox + 0.5) * inv - 0.5;
            int x0 = static_cast<int>(std::floor(sx));
            double tx = sx - x0;
            double wx[4];
            for (int k = 0; k < 4; ++k) wx[k] = cubic_weight(tx - (k - 1));

            double acc[4] = {0.0, 0.0, 0.0, 0.0};
            for (int ky = 0; ky < 4; ++ky) {
                int py = clamp_index(y0 + ky - 1, sh);
                for (int kx = 0; kx < 4; ++kx) {
                    int px = clamp_index(x0 + kx - 1, sw);
                    const Rgba& s = tile.at(py, px);
                    double w = wy[ky] * wx[kx];
                    acc[0] += w * s.r;
                    acc[1] += w * s.g;
                    acc[2] += w * s.b;
                    acc[3] += w * s.a;
                }
            }
            out.at(oy, ox) = Rgba{clamp_channel(acc[0]), clamp_channel(acc[1]),
                                  clamp_channel(acc[2]), clamp_channel(acc[3])};
        }
    }
    return out;
}

TileImage pad_image(const TileImage& tile, int pad, Rgba color) {
    if (pad < 0) throw std::invalid_argument("pad must be non-negative");
    if (pad == 0) return tile;
    TileImage out(tile.width() + 2 * pad, tile.height() + 2 * pad, color);
    for (int r = 0; r < tile.height(); ++r) {
        for (int c = 0; c < tile.width(); ++c) {
            out.at(r + pad, c + pad) = tile.at(r, c);
        }
    }
    return out;
}

}  // namespace tilelab
