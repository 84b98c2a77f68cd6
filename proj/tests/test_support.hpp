// Shared fixture builders and independent oracles. The oracles here are
// deliberately written as straight transliterations of the definitions,
// separate from the library code paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tilelab/image.hpp"
#include "tilelab/scenegen.hpp"
#include "tilelab/segmentation.hpp"
#include "tilelab/similarity.hpp"
#include "tilelab/tileset.hpp"

namespace testsupport {

using namespace tilelab;

inline TileImage solid_tile(int size, Rgba color) {
    return TileImage(size, size, color);
}

inline TileImage transparent_tile(int size) {
    return TileImage(size, size, Rgba{0, 0, 0, 0});
}

// Paints a grid of cells (solid color or transparent) into one image.
// mask[r][c] < 0 means transparent; otherwise an index into palette.
inline TileImage paint_grid(const std::vector<std::vector<int>>& mask,
                            const std::vector<Rgba>& palette, int tile_size) {
    int rows = static_cast<int>(mask.size());
    int cols = static_cast<int>(mask[0].size());
    TileImage image(cols * tile_size, rows * tile_size, Rgba{0, 0, 0, 0});
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (mask[r][c] < 0) continue;
            Rgba color = palette[mask[r][c]];
            for (int y = 0; y < tile_size; ++y) {
                for (int x = 0; x < tile_size; ++x) {
                    image.at(r * tile_size + y, c * tile_size + x) = color;
                }
            }
        }
    }
    return image;
}

// Reference SSIM: two-pass centered moments, literal equation form.
inline double ref_ssim(const std::vector<double>& a, const std::vector<double>& b,
                       double c1 = 6.5025, double c2 = 58.5225) {
    const std::size_t n = a.size();
    double mu1 = 0.0, mu2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu1 += a[i];
        mu2 += b[i];
    }
    mu1 /= static_cast<double>(n);
    mu2 /= static_cast<double>(n);
    double var1 = 0.0, var2 = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        var1 += (a[i] - mu1) * (a[i] - mu1);
        var2 += (b[i] - mu2) * (b[i] - mu2);
        cov += (a[i] - mu1) * (b[i] - mu2);
    }
    var1 /= static_cast<double>(n);
    var2 /= static_cast<double>(n);
    cov /= static_cast<double>(n);
    return ((2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)) /
           ((mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2));
}

inline std::vector<double> strip_values(const BoundaryStrip& strip) {
    return std::vector<double>(strip.values.begin(), strip.values.end());
}

// Reference bicubic (a = -0.5), scalar per-pixel evaluation.
inline double ref_cubic_weight(double x) {
    x = std::fabs(x);
    if (x <= 1.0) return 1.5 * x * x * x - 2.5 * x * x + 1.0;
    if (x < 2.0) return -0.5 * x * x * x + 2.5 * x * x - 4.0 * x + 2.0;
    return 0.0;
}

inline int ref_bicubic_sample(const std::vector<std::vector<int>>& src, int sw,
                              int sh, int ox, int oy, int factor) {
    double sx = (ox + 0.5) / factor - 0.5;
    double sy = (oy + 0.5) / factor - 0.5;
    int x0 = static_cast<int>(std::floor(sx));
    int y0 = static_cast<int>(std::floor(sy));
    double acc = 0.0;
    for (int ky = -1; ky <= 2; ++ky) {
        int py = std::min(std::max(y0 + ky, 0), sh - 1);
        for (int kx = -1; kx <= 2; ++kx) {
            int px = std::min(std::max(x0 + kx, 0), sw - 1);
            acc += ref_cubic_weight(sy - (y0 + ky)) *
                   ref_cubic_weight(sx - (x0 + kx)) * src[py][px];
        }
    }
    long v = std::lround(acc);
    return static_cast<int>(std::min(std::max(v, 0L), 255L));
}

// Brute-force 4-connected components of a boolean paint mask.
inline std::vector<std::set<GridCoord>> flood_fill_components(
    const std::vector<std::vector<bool>>& mask) {
    int rows = static_cast<int>(mask.size());
    int cols = static_cast<int>(mask[0].size());
    std::vector<std::vector<bool>> seen(rows, std::vector<bool>(cols, false));
    std::vector<std::set<GridCoord>> components;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (!mask[r][c] || seen[r][c]) continue;
            std::set<GridCoord> comp;
            std::vector<GridCoord> queue{{r, c}};
            seen[r][c] = true;
            while (!queue.empty()) {
                GridCoord cur = queue.back();
                queue.pop_back();
                comp.insert(cur);
                const int dr[4] = {0, 0, 1, -1};
                const int dc[4] = {1, -1, 0, 0};
                for (int k = 0; k < 4; ++k) {
                    int nr = cur.row + dr[k];
                    int nc = cur.col + dc[k];
                    if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
                    if (!mask[nr][nc] || seen[nr][nc]) continue;
                    seen[nr][nc] = true;
                    queue.push_back({nr, nc});
                }
            }
            components.push_back(std::move(comp));
        }
    }
    return components;
}

// Counts 4-connected walkable components of a terrain grid.
inline int count_walkable_components(const TerrainMap& map) {
    std::vector<std::vector<bool>> mask(map.rows,
                                        std::vector<bool>(map.cols, false));
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) mask[r][c] = map.walkable(r, c);
    }
    bool any = false;
    for (const auto& row : mask) {
        for (bool b : row) any = any || b;
    }
    if (!any) return 0;
    return static_cast<int>(flood_fill_components(mask).size());
}

// Independent spatial-relation checker: consumes only the scene matrix.
inline bool check_relation(const SceneMatrix& matrix, const SceneEdge& edge) {
    const PlacedObject* from = nullptr;
    const PlacedObject* to = nullptr;
    for (const PlacedObject& obj : matrix.objects) {
        if (obj.entity == edge.from) from = &obj;
        if (obj.entity == edge.to) to = &obj;
    }
    if (!from || !to) return false;
    int fr = from->anchor.row, fc = from->anchor.col;
    int tr = to->anchor.row, tc = to->anchor.col;
    switch (edge.relation) {
        case SpatialRelation::Above: return fc == tc && fr < tr;
        case SpatialRelation::Below: return fc == tc && fr > tr;
        case SpatialRelation::LeftOf: return fr == tr && fc < tc;
        case SpatialRelation::RightOf: return fr == tr && fc > tc;
        case SpatialRelation::OnTopOf: return fr == tr && fc == tc;
        case SpatialRelation::Contains:
            return tr >= fr && tr < fr + from->footprint_h && tc >= fc &&
                   tc < fc + from->footprint_w;
        case SpatialRelation::Near:
            return std::max(std::abs(fr - tr), std::abs(fc - tc)) <= 2;
    }
    return false;
}

class TempDir {
  public:
    explicit TempDir(const std::string& prefix = "tilelab_test") {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            std::filesystem::path candidate =
                base / (prefix + "_" + std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& name = "") const {
        return name.empty() ? path_.string() : (path_ / name).string();
    }

  private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

}  // namespace testsupport
