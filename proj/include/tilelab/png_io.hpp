#pragma once

#include <string>

#include "tilelab/image.hpp"

namespace tilelab {

// Loads any libpng-readable PNG, expanded to 8-bit RGBA.
TileImage load_png(const std::string& path);

// Writes 8-bit RGBA.
void save_png(const TileImage& image, const std::string& path);

}  // namespace tilelab
