#include "tilelab/segmentation.hpp"

#include <algorithm>
#include <stdexcept>

#include "tilelab/similarity.hpp"

namespace tilelab {

std::string to_string(SegmentClass cls) {
    switch (cls) {
        case SegmentClass::Complete: return "complete";
        case SegmentClass::Partial: return "partial";
        case SegmentClass::Texture: return "texture";
        case SegmentClass::CompleteTexture: return "complete_texture";
        case SegmentClass::PartialTexture: return "partial_texture";
    }
    return "?";
}

SegmentClass segment_class_from_string(const std::string& name) {
    if (name == "complete") return SegmentClass::Complete;
    if (name == "partial") return SegmentClass::Partial;
    if (name == "texture") return SegmentClass::Texture;
    if (name == "complete_texture") return SegmentClass::CompleteTexture;
    if (name == "partial_texture") return SegmentClass::PartialTexture;
    throw std::invalid_argument("unknown segment class: " + name);
}

std::vector<SegmentRecord> grow_segments(const Tileset& tileset,
                                         double similarity_threshold,
                                         double transparency_threshold,
                                         int strip_width) {
    const int rows = tileset.rows();
    const int cols = tileset.cols();
    if (rows == 0 || cols == 0) throw std::invalid_argument("empty tileset");

    std::vector<double> opaque(static_cast<std::size_t>(rows) * cols, 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            opaque[static_cast<std::size_t>(r) * cols + c] =
                opacity_stats(tileset.tile(r, c)).opaque_fraction;
        }
    }
    auto eligible = [&](int r, int c) {
        return opaque[static_cast<std::size_t>(r) * cols + c] >=
               transparency_threshold;
    };

    std::vector<bool> visited(static_cast<std::size_t>(rows) * cols, false);
    std::vector<SegmentRecord> segments;

    // Neighbor order: right, left, down, up.
    const int dr[4] = {0, 0, 1, -1};
    const int dc[4] = {1, -1, 0, 0};

    for (int sr = 0; sr < rows; ++sr) {
        for (int sc = 0; sc < cols; ++sc) {
            std::size_t seed = static_cast<std::size_t>(sr) * cols + sc;
            if (visited[seed] || !eligible(sr, sc)) continue;

            SegmentRecord seg;
            seg.parent = {sr, sc};
            std::vector<GridCoord> stack{{sr, sc}};
            visited[seed] = true;

            while (!stack.empty()) {
                GridCoord cur = stack.back();
                stack.pop_back();
                seg.members.push_back(cur);

                for (int k = 0; k < 4; ++k) {
                    int nr = cur.row + dr[k];
                    int nc = cur.col + dc[k];
                    if (!tileset.in_grid(nr, nc)) continue;
                    std::size_t ni = static_cast<std::size_t>(nr) * cols + nc;
                    if (visited[ni] || !eligible(nr, nc)) continue;

                    double score;
                    if (dc[k] == 1) {
                        score = adjacency_score(tileset.tile(cur.row, cur.col),
                                                tileset.tile(nr, nc),
                                                Orientation::Horizontal, strip_width);
                    } else if (dc[k] == -1) {
                        score = adjacency_score(tileset.tile(nr, nc),
                                                tileset.tile(cur.row, cur.col),
                                                Orientation::Horizontal, strip_width);
                    } else if (dr[k] == 1) {
                        score = adjacency_score(tileset.tile(cur.row, cur.col),
                                                tileset.tile(nr, nc),
                                                Orientation::Vertical, strip_width);
                    } else {
                        score = adjacency_score(tileset.tile(nr, nc),
                                                tileset.tile(cur.row, cur.col),
                                                Orientation::Vertical, strip_width);
                    }
                    if (!is_adjacent(score, similarity_threshold)) continue;

                    visited[ni] = true;
                    stack.push_back({nr, nc});
                }
            }

            std::sort(seg.members.begin(), seg.members.end());
            seg.bounding_box.min_row = seg.bounding_box.max_row = seg.members[0].row;
            seg.bounding_box.min_col = seg.bounding_box.max_col = seg.members[0].col;
            for (const GridCoord& m : seg.members) {
                seg.bounding_box.min_row = std::min(seg.bounding_box.min_row, m.row);
                seg.bounding_box.max_row = std::max(seg.bounding_box.max_row, m.row);
                seg.bounding_box.min_col = std::min(seg.bounding_box.min_col, m.col);
                seg.bounding_box.max_col = std::max(seg.bounding_box.max_col, m.col);
            }
            segments.push_back(std::move(seg));
        }
    }
    return segments;
}

TileImage assemble_segment(const SegmentRecord& segment, const Tileset& tileset) {
    const int ts = tileset.tile_size();
    const BoundingBox& bb = segment.bounding_box;
    TileImage merged((bb.max_col - bb.min_col + 1) * ts,
                     (bb.max_row - bb.min_row + 1) * ts);
    for (const GridCoord& m : segment.members) {
        const TileImage& tile = tileset.tile(m.row, m.col);
        int oy = (m.row - bb.min_row) * ts;
        int ox = (m.col - bb.min_col) * ts;
        for (int y = 0; y < ts; ++y) {
            for (int x = 0; x < ts; ++x) {
                merged.at(oy + y, ox + x) = tile.at(y, x);
            }
        }
    }
    return merged;
}

namespace {

// True when the 1-pixel facing edges of all tiles just outside the bounding
// box are transparent (and those neighbor rows/columns exist).
bool outside_edges_transparent(const SegmentRecord& segment,
                               const Tileset& tileset) {
    const BoundingBox& bb = segment.bounding_box;
    const int ts = tileset.tile_size();

    auto edge_transparent = [&](int r, int c, Side facing) {
        const TileImage& tile = tileset.tile(r, c);
        for (int i = 0; i < ts; ++i) {
            std::uint8_t a = 0;
            switch (facing) {
                case Side::Top: a = tile.at(0, i).a; break;
                case Side::Bottom: a = tile.at(ts - 1, i).a; break;
                case Side::Left: a = tile.at(i, 0).a; break;
                case Side::Right: a = tile.at(i, ts - 1).a; break;
            }
            if (a > 0) return false;
        }
        return true;
    };

    for (int c = bb.min_col; c <= bb.max_col; ++c) {
        if (!edge_transparent(bb.min_row - 1, c, Side::Bottom)) return false;
        if (!edge_transparent(bb.max_row + 1, c, Side::Top)) return false;
    }
    for (int r = bb.min_row; r <= bb.max_row; ++r) {
        if (!edge_transparent(r, bb.min_col - 1, Side::Right)) return false;
        if (!edge_transparent(r, bb.max_col + 1, Side::Left)) return false;
    }
    return true;
}

}  // namespace

SegmentClass classify_segment(const SegmentRecord& segment, const Tileset& tileset,
                              double texture_opacity_min) {
    for (const GridCoord& m : segment.members) {
        if (!tileset.in_grid(m.row, m.col)) {
            throw std::invalid_argument("segment member outside the grid");
        }
    }

    bool texture = true;
    for (const GridCoord& m : segment.members) {
        if (opacity_stats(tileset.tile(m.row, m.col)).opaque_fraction <
            texture_opacity_min) {
            texture = false;
            break;
        }
    }

    TileImage merged = assemble_segment(segment, tileset);
    bool border_opaque = opacity_stats(merged).border_opaque;

    const BoundingBox& bb = segment.bounding_box;
    bool interior = bb.min_row > 0 && bb.min_col > 0 &&
                    bb.max_row < tileset.rows() - 1 &&
                    bb.max_col < tileset.cols() - 1;
    bool complete = !border_opaque ||
                    (interior && outside_edges_transparent(segment, tileset));

    if (texture) {
        return complete ? SegmentClass::CompleteTexture : SegmentClass::PartialTexture;
    }
    return complete ? SegmentClass::Complete : SegmentClass::Partial;
}

void classify_all(std::vector<SegmentRecord>& segments, const Tileset& tileset,
                  double texture_opacity_min) {
    for (SegmentRecord& seg : segments) {
        seg.cls = classify_segment(seg, tileset, texture_opacity_min);
        seg.classified = true;
    }
}

SegmentationReport segmentation_report(const std::vector<SegmentRecord>& segments) {
    SegmentationReport report;
    report.total_segments = segments.size();
    for (SegmentClass cls :
         {SegmentClass::Complete, SegmentClass::Partial, SegmentClass::Texture,
          SegmentClass::CompleteTexture, SegmentClass::PartialTexture}) {
        report.counts[cls] = 0;
    }
    for (const SegmentRecord& seg : segments) {
        if (!seg.classified) throw std::invalid_argument("unclassified segment");
        ++report.counts[seg.cls];
    }
    if (report.total_segments > 0) {
        report.usable_rate =
            static_cast<double>(report.counts[SegmentClass::Complete] +
                                report.counts[SegmentClass::CompleteTexture]) /
            static_cast<double>(report.total_segments);
    }
    return report;
}

}  // namespace tilelab
