#include "tilelab/tileset.hpp"

#include <stdexcept>

namespace tilelab {

Tileset split_tileset(const TileImage& image, int tile_size) {
    if (tile_size <= 0) throw std::invalid_argument("tile_size must be positive");
    if (image.width() < tile_size || image.height() < tile_size) {
        throw std::invalid_argument("image is smaller than one tile");
    }

    Tileset set;
    set.tile_size_ = tile_size;
    set.rows_ = image.height() / tile_size;
    set.cols_ = image.width() / tile_size;
    set.dropped_pixels_ =
        static_cast<std::int64_t>(image.width()) * image.height() -
        static_cast<std::int64_t>(set.rows_) * set.cols_ * tile_size * tile_size;

    set.tiles_.reserve(static_cast<std::size_t>(set.rows_) * set.cols_);
    for (int r = 0; r < set.rows_; ++r) {
        for (int c = 0; c < set.cols_; ++c) {
            TileImage tile(tile_size, tile_size);
            for (int y = 0; y < tile_size; ++y) {
                for (int x = 0; x < tile_size; ++x) {
                    tile.at(y, x) = image.at(r * tile_size + y, c * tile_size + x);
                }
            }
            set.tiles_.push_back(std::move(tile));
        }
    }
    return set;
}

}  // namespace tilelab
