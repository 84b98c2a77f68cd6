#pragma once

#include <cstdint>
#include <vector>

namespace tilelab {

struct Rgba {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t a = 0;

    bool operator==(const Rgba&) const = default;
};

// Row-major RGBA image, 8 bits per channel.
class TileImage {
  public:
    TileImage() = default;
    TileImage(int width, int height, Rgba fill = Rgba{});

    int width() const { return width_; }
    int height() const { return height_; }

    const Rgba& at(int row, int col) const { return pixels_[index(row, col)]; }
    Rgba& at(int row, int col) { return pixels_[index(row, col)]; }

    const std::vector<Rgba>& pixels() const { return pixels_; }
    std::vector<Rgba>& pixels() { return pixels_; }

    bool operator==(const TileImage&) const = default;

  private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * width_ + col;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Rgba> pixels_;
};

// Single-channel luminance image, values in [0, 255].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;  // row-major

    std::uint8_t at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    std::uint8_t& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }
};

struct OpacityStats {
    double opaque_fraction = 0.0;  // pixels with alpha > 0, as a ratio
    bool border_opaque = false;    // any opaque pixel on the 1-pixel outer border
};

OpacityStats opacity_stats(const TileImage& tile);

// Rec. 601 luminance: round(0.299 R + 0.587 G + 0.114 B); alpha is ignored.
GrayImage to_grayscale(const TileImage& tile);

// Bicubic upscale by an integer factor, kernel a = -0.5, per channel,
// clamped to [0, 255]. factor must be >= 1.
TileImage upscale_bicubic(const TileImage& tile, int factor);

// Surrounds the image with `pad` pixels of solid color on every side.
TileImage pad_image(const TileImage& tile, int pad, Rgba color);

}  // namespace tilelab
