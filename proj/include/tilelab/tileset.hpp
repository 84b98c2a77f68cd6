#pragma once

#include <cstdint>
#include <vector>

#include "tilelab/image.hpp"

namespace tilelab {

// A source image cut into a grid of tile_size x tile_size tiles.
// Pixels right of / below the last full tile are dropped.
class Tileset {
  public:
    Tileset() = default;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int tile_size() const { return tile_size_; }
    std::int64_t dropped_pixels() const { return dropped_pixels_; }

    const TileImage& tile(int row, int col) const {
        return tiles_[static_cast<std::size_t>(row) * cols_ + col];
    }

    bool in_grid(int row, int col) const {
        return row >= 0 && row < rows_ && col >= 0 && col < cols_;
    }

    friend Tileset split_tileset(const TileImage& image, int tile_size);

  private:
    int rows_ = 0;
    int cols_ = 0;
    int tile_size_ = 0;
    std::int64_t dropped_pixels_ = 0;
    std::vector<TileImage> tiles_;  // raster order
};

Tileset split_tileset(const TileImage& image, int tile_size);

}  // namespace tilelab
