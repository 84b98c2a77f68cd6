#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "tilelab/tileset.hpp"

namespace tilelab {

enum class SegmentClass { Complete, Partial, Texture, CompleteTexture, PartialTexture };

std::string to_string(SegmentClass cls);
SegmentClass segment_class_from_string(const std::string& name);

struct GridCoord {
    int row = 0;
    int col = 0;

    bool operator==(const GridCoord&) const = default;
    auto operator<=>(const GridCoord&) const = default;
};

struct BoundingBox {
    int min_row = 0;
    int min_col = 0;
    int max_row = 0;
    int max_col = 0;
};

// A 4-connected group of tiles anchored by the first tile found in raster
// order. Members are stored sorted by (row, col).
struct SegmentRecord {
    GridCoord parent;
    std::vector<GridCoord> members;
    BoundingBox bounding_box;
    SegmentClass cls = SegmentClass::Partial;
    bool classified = false;
};

struct SegmentationReport {
    std::size_t total_segments = 0;
    std::map<SegmentClass, std::size_t> counts;
    double usable_rate = 0.0;  // (complete + complete_texture) / total
};

// Grows segments over non-transparent tiles. A neighbor joins iff it is not
// primarily transparent and the facing-boundary SSIM passes the threshold.
// Traversal uses an explicit worklist, neighbor order right, left, down, up;
// seeds are scanned in raster order. Classes are left unset.
std::vector<SegmentRecord> grow_segments(const Tileset& tileset,
                                         double similarity_threshold = 0.6,
                                         double transparency_threshold = 0.10,
                                         int strip_width = 4);

// Pastes the segment's member tiles into a bounding-box mosaic; cells inside
// the box that are not members stay transparent.
TileImage assemble_segment(const SegmentRecord& segment, const Tileset& tileset);

SegmentClass classify_segment(const SegmentRecord& segment, const Tileset& tileset,
                              double texture_opacity_min = 0.99);

void classify_all(std::vector<SegmentRecord>& segments, const Tileset& tileset,
                  double texture_opacity_min = 0.99);

SegmentationReport segmentation_report(const std::vector<SegmentRecord>& segments);

}  // namespace tilelab
