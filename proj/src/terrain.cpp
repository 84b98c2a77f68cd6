#include "tilelab/terrain.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "tilelab/errors.hpp"
#include "tilelab/rng.hpp"

namespace tilelab {

std::size_t TerrainMap::walkable_count() const {
    std::size_t n = 0;
    for (bool b : blocked) {
        if (!b) ++n;
    }
    return n;
}

namespace {

int blocked_neighbors(const std::vector<bool>& grid, int rows, int cols,
                      int row, int col) {
    int count = 0;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            int nr = row + dr;
            int nc = col + dc;
            if (nr < 0 || nr >= rows || nc < 0 || nc >= cols ||
                grid[static_cast<std::size_t>(nr) * cols + nc]) {
                ++count;
            }
        }
    }
    return count;
}

// Keeps only the largest 4-connected walkable component (first in raster
// order on ties). Returns the number of walkable cells kept.
std::size_t keep_largest_component(std::vector<bool>& blocked, int rows,
                                   int cols) {
    std::vector<int> label(blocked.size(), -1);
    int next_label = 0;
    std::size_t best_size = 0;
    int best_label = -1;

    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < blocked.size(); ++start) {
        if (blocked[start] || label[start] != -1) continue;
        std::size_t size = 0;
        stack.push_back(start);
        label[start] = next_label;
        while (!stack.empty()) {
            std::size_t cur = stack.back();
            stack.pop_back();
            ++size;
            int r = static_cast<int>(cur) / cols;
            int c = static_cast<int>(cur) % cols;
            const int dr[4] = {0, 0, 1, -1};
            const int dc[4] = {1, -1, 0, 0};
            for (int k = 0; k < 4; ++k) {
                int nr = r + dr[k];
                int nc = c + dc[k];
                if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
                std::size_t ni = static_cast<std::size_t>(nr) * cols + nc;
                if (blocked[ni] || label[ni] != -1) continue;
                label[ni] = next_label;
                stack.push_back(ni);
            }
        }
        if (size > best_size) {
            best_size = size;
            best_label = next_label;
        }
        ++next_label;
    }

    for (std::size_t i = 0; i < blocked.size(); ++i) {
        if (!blocked[i] && label[i] != best_label) blocked[i] = true;
    }
    return best_size;
}

}  // namespace

TerrainMap generate_terrain(int rows, int cols, std::uint64_t seed,
                            const CaParams& params) {
    if (rows < 8 || cols < 8) {
        throw std::invalid_argument("terrain must be at least 8x8");
    }

    const std::size_t cell_count = static_cast<std::size_t>(rows) * cols;
    double last_fraction = 0.0;

    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
        std::uint64_t attempt_seed = seed + static_cast<std::uint64_t>(attempt);
        Rng rng(attempt_seed);

        std::vector<bool> blocked(cell_count);
        for (std::size_t i = 0; i < cell_count; ++i) {
            blocked[i] = rng.uniform() < params.fill_prob;
        }

        std::vector<bool> next(cell_count);
        for (int it = 0; it < params.iterations; ++it) {
            for (int r = 0; r < rows; ++r) {
                for (int c = 0; c < cols; ++c) {
                    std::size_t i = static_cast<std::size_t>(r) * cols + c;
                    int n = blocked_neighbors(blocked, rows, cols, r, c);
                    next[i] = blocked[i] ? n >= params.survive : n >= params.birth;
                }
            }
            blocked.swap(next);
        }

        std::size_t kept = keep_largest_component(blocked, rows, cols);
        last_fraction = static_cast<double>(kept) / static_cast<double>(cell_count);
        if (last_fraction >= params.min_walkable_fraction) {
            TerrainMap map;
            map.rows = rows;
            map.cols = cols;
            map.seed = attempt_seed;
            map.blocked = std::move(blocked);
            return map;
        }
    }

    throw GenerationError(
        "terrain generation failed after " + std::to_string(params.max_attempts) +
        " attempts; last walkable fraction " + std::to_string(last_fraction));
}

}  // namespace tilelab
