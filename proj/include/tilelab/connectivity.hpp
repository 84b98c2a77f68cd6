#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tilelab/segmentation.hpp"
#include "tilelab/similarity.hpp"
#include "tilelab/tileset.hpp"

namespace tilelab {

// Eight half-edge segments: each side split at the midpoint, the "first"
// half covering the lesser pixel coordinates (top or left).
enum class Direction8 {
    TopLeft = 0,
    TopRight,
    RightUp,
    RightDown,
    BottomRight,
    BottomLeft,
    LeftDown,
    LeftUp,
};

constexpr std::array<Direction8, 8> kAllDirections = {
    Direction8::TopLeft,    Direction8::TopRight,  Direction8::RightUp,
    Direction8::RightDown,  Direction8::BottomRight, Direction8::BottomLeft,
    Direction8::LeftDown,   Direction8::LeftUp,
};

std::string to_string(Direction8 dir);
Direction8 direction_from_string(const std::string& name);

Side direction_side(Direction8 dir);
// True for the half at lesser pixel coordinates along the edge.
bool direction_first_half(Direction8 dir);
// The direction this one faces on the orthogonal neighbor: same half,
// mirrored side (right_up <-> left_up, top_left <-> bottom_left, ...).
Direction8 facing_direction(Direction8 dir);

struct ConnectivitySet {
    GridCoord tile;
    std::set<Direction8> connected;
    // Subset of `connected` kept on transparency evidence alone because no
    // neighbor exists in that direction.
    std::set<Direction8> no_neighbor;
};

struct ConnectivityEval {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double exact_match_rate = 0.0;
};

struct ConnectivityParams {
    double ssim_threshold = 0.6;
    double alpha_fraction_min = 0.5;
    int strip_width = 4;
    SsimParams ssim;
};

// The named half-edge region of a square tile as a grayscale strip,
// strip_width rows by tile_size/2 columns (row 0 at the edge).
BoundaryStrip edge_segment(const TileImage& tile, Direction8 dir,
                           int strip_width = 4);

// Opaque fraction of the half-edge region (RGBA alpha > 0).
double edge_segment_opacity(const TileImage& tile, Direction8 dir,
                            int strip_width = 4);

// Per tile and direction: candidate iff the edge segment is sufficiently
// opaque; with a neighbor present the facing half-edge SSIM must also pass;
// without one the candidate stands and is flagged no_neighbor. When
// `segments` is given, only member tiles are processed.
std::vector<ConnectivitySet> infer_connectivity(
    const Tileset& tileset,
    const std::optional<std::vector<SegmentRecord>>& segments = std::nullopt,
    const ConnectivityParams& params = {});

// Micro-averaged precision/recall/F1 over (tile, direction) pairs plus the
// fraction of tiles whose sets match exactly. Both sides must cover the
// same tiles.
ConnectivityEval evaluate_connectivity(const std::vector<ConnectivitySet>& predicted,
                                       const std::vector<ConnectivitySet>& truth);

}  // namespace tilelab
