#include "tilelab/similarity.hpp"

#include <stdexcept>

namespace tilelab {

std::string to_string(Side side) {
    switch (side) {
        case Side::Top: return "top";
        case Side::Bottom: return "bottom";
        case Side::Left: return "left";
        case Side::Right: return "right";
    }
    return "?";
}

BoundaryStrip extract_boundary(const TileImage& tile, Side side, int strip_width) {
    const bool horizontal_edge = side == Side::Top || side == Side::Bottom;
    const int depth_limit = horizontal_edge ? tile.height() : tile.width();
    if (strip_width < 1 || strip_width > depth_limit) {
        throw std::invalid_argument("strip_width out of range");
    }

    GrayImage gray = to_grayscale(tile);
    BoundaryStrip strip;
    strip.side = side;
    strip.strip_width = strip_width;
    strip.length = horizontal_edge ? tile.width() : tile.height();
    strip.values.resize(static_cast<std::size_t>(strip_width) * strip.length);

    for (int d = 0; d < strip_width; ++d) {
        for (int i = 0; i < strip.length; ++i) {
            std::uint8_t v = 0;
            switch (side) {
                case Side::Top: v = gray.at(d, i); break;
                case Side::Bottom: v = gray.at(tile.height() - 1 - d, i); break;
                case Side::Left: v = gray.at(i, d); break;
                case Side::Right: v = gray.at(i, tile.width() - 1 - d); break;
            }
            strip.values[static_cast<std::size_t>(d) * strip.length + i] = v;
        }
    }
    return strip;
}

double ssim(const BoundaryStrip& b1, const BoundaryStrip& b2,
            const SsimParams& params) {
    if (b1.strip_width != b2.strip_width || b1.length != b2.length) {
        throw std::invalid_argument("strip dimensions do not match");
    }
    const std::size_t n = b1.values.size();
    if (n == 0) throw std::invalid_argument("empty strip");

    double s1 = 0.0, s2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = b1.values[i];
        double y = b2.values[i];
        s1 += x;
        s2 += y;
        s11 += x * x;
        s22 += y * y;
        s12 += x * y;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const double mu1 = s1 * inv_n;
    const double mu2 = s2 * inv_n;
    const double var1 = s11 * inv_n - mu1 * mu1;
    const double var2 = s22 * inv_n - mu2 * mu2;
    const double cov = s12 * inv_n - mu1 * mu2;

    const double num = (2.0 * mu1 * mu2 + params.c1) * (2.0 * cov + params.c2);
    const double den =
        (mu1 * mu1 + mu2 * mu2 + params.c1) * (var1 + var2 + params.c2);
    return num / den;
}

double adjacency_score(const TileImage& a, const TileImage& b,
                       Orientation orientation, int strip_width,
                       const SsimParams& params) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("tile sizes do not match");
    }
    if (orientation == Orientation::Horizontal) {
        return ssim(extract_boundary(a, Side::Right, strip_width),
                    extract_boundary(b, Side::Left, strip_width), params);
    }
    return ssim(extract_boundary(a, Side::Bottom, strip_width),
                extract_boundary(b, Side::Top, strip_width), params);
}

}  // namespace tilelab
