#pragma once

#include <cstdint>
#include <vector>

namespace tilelab {

struct CaParams {
    double fill_prob = 0.45;
    int iterations = 4;
    int birth = 5;    // walkable cell blocks at >= this many blocked neighbors
    int survive = 4;  // blocked cell stays at >= this many blocked neighbors
    double min_walkable_fraction = 0.25;
    int max_attempts = 16;
};

struct TerrainMap {
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;  // the seed that actually produced the map
    std::vector<bool> blocked;  // row-major; false = walkable

    bool is_blocked(int row, int col) const {
        return blocked[static_cast<std::size_t>(row) * cols + col];
    }
    bool walkable(int row, int col) const { return !is_blocked(row, col); }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < rows && col >= 0 && col < cols;
    }
    std::size_t walkable_count() const;
};

// Seeded random fill evolved by the 8-neighborhood rule (out-of-bounds
// neighbors count as blocked), then repaired by keeping only the largest
// 4-connected walkable component. Retries with seed+1 while the walkable
// fraction stays below the minimum, up to max_attempts.
TerrainMap generate_terrain(int rows, int cols, std::uint64_t seed,
                            const CaParams& params = {});

}  // namespace tilelab
