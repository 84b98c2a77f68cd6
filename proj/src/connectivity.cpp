#include "tilelab/connectivity.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tilelab {

std::string to_string(Direction8 dir) {
    switch (dir) {
        case Direction8::TopLeft: return "top_left";
        case Direction8::TopRight: return "top_right";
        case Direction8::RightUp: return "right_up";
        case Direction8::RightDown: return "right_down";
        case Direction8::BottomRight: return "bottom_right";
        case Direction8::BottomLeft: return "bottom_left";
        case Direction8::LeftDown: return "left_down";
        case Direction8::LeftUp: return "left_up";
    }
    return "?";
}

Direction8 direction_from_string(const std::string& name) {
    for (Direction8 dir : kAllDirections) {
        if (to_string(dir) == name) return dir;
    }
    throw std::invalid_argument("unknown direction: " + name);
}

Side direction_side(Direction8 dir) {
    switch (dir) {
        case Direction8::TopLeft:
        case Direction8::TopRight: return Side::Top;
        case Direction8::RightUp:
        case Direction8::RightDown: return Side::Right;
        case Direction8::BottomRight:
        case Direction8::BottomLeft: return Side::Bottom;
        case Direction8::LeftDown:
        case Direction8::LeftUp: return Side::Left;
    }
    return Side::Top;
}

bool direction_first_half(Direction8 dir) {
    switch (dir) {
        case Direction8::TopLeft:
        case Direction8::RightUp:
        case Direction8::BottomLeft:
        case Direction8::LeftUp: return true;
        default: return false;
    }
}

Direction8 facing_direction(Direction8 dir) {
    switch (dir) {
        case Direction8::TopLeft: return Direction8::BottomLeft;
        case Direction8::TopRight: return Direction8::BottomRight;
        case Direction8::BottomLeft: return Direction8::TopLeft;
        case Direction8::BottomRight: return Direction8::TopRight;
        case Direction8::RightUp: return Direction8::LeftUp;
        case Direction8::RightDown: return Direction8::LeftDown;
        case Direction8::LeftUp: return Direction8::RightUp;
        case Direction8::LeftDown: return Direction8::RightDown;
    }
    return dir;
}

namespace {

void check_square_even(const TileImage& tile) {
    if (tile.width() != tile.height()) {
        throw std::invalid_argument("tile must be square");
    }
    if (tile.width() % 2 != 0) {
        throw std::invalid_argument("tile size must be even");
    }
}

}  // namespace

BoundaryStrip edge_segment(const TileImage& tile, Direction8 dir,
                           int strip_width) {
    check_square_even(tile);
    BoundaryStrip full = extract_boundary(tile, direction_side(dir), strip_width);
    const int half = full.length / 2;
    const int offset = direction_first_half(dir) ? 0 : half;

    BoundaryStrip out;
    out.side = full.side;
    out.strip_width = strip_width;
    out.length = half;
    out.values.resize(static_cast<std::size_t>(strip_width) * half);
    for (int d = 0; d < strip_width; ++d) {
        for (int i = 0; i < half; ++i) {
            out.values[static_cast<std::size_t>(d) * half + i] =
                full.at(d, offset + i);
        }
    }
    return out;
}

double edge_segment_opacity(const TileImage& tile, Direction8 dir,
                            int strip_width) {
    check_square_even(tile);
    const int size = tile.width();
    const int half = size / 2;
    const Side side = direction_side(dir);
    const int offset = direction_first_half(dir) ? 0 : half;

    std::size_t opaque = 0;
    for (int d = 0; d < strip_width; ++d) {
        for (int i = 0; i < half; ++i) {
            std::uint8_t a = 0;
            switch (side) {
                case Side::Top: a = tile.at(d, offset + i).a; break;
                case Side::Bottom: a = tile.at(size - 1 - d, offset + i).a; break;
                case Side::Left: a = tile.at(offset + i, d).a; break;
                case Side::Right: a = tile.at(offset + i, size - 1 - d).a; break;
            }
            if (a > 0) ++opaque;
        }
    }
    return static_cast<double>(opaque) /
           (static_cast<double>(strip_width) * half);
}

std::vector<ConnectivitySet> infer_connectivity(
    const Tileset& tileset,
    const std::optional<std::vector<SegmentRecord>>& segments,
    const ConnectivityParams& params) {
    std::vector<GridCoord> scope;
    if (segments) {
        for (const SegmentRecord& seg : *segments) {
            scope.insert(scope.end(), seg.members.begin(), seg.members.end());
        }
        std::sort(scope.begin(), scope.end());
    } else {
        for (int r = 0; r < tileset.rows(); ++r) {
            for (int c = 0; c < tileset.cols(); ++c) scope.push_back({r, c});
        }
    }

    std::vector<ConnectivitySet> result;
    result.reserve(scope.size());
    for (const GridCoord& coord : scope) {
        ConnectivitySet set;
        set.tile = coord;
        const TileImage& tile = tileset.tile(coord.row, coord.col);

        for (Direction8 dir : kAllDirections) {
            if (edge_segment_opacity(tile, dir, params.strip_width) <
                params.alpha_fraction_min) {
                continue;
            }
            int nr = coord.row;
            int nc = coord.col;
            switch (direction_side(dir)) {
                case Side::Top: --nr; break;
                case Side::Bottom: ++nr; break;
                case Side::Left: --nc; break;
                case Side::Right: ++nc; break;
            }
            if (!tileset.in_grid(nr, nc)) {
                set.connected.insert(dir);
                set.no_neighbor.insert(dir);
                continue;
            }
            double score = ssim(
                edge_segment(tile, dir, params.strip_width),
                edge_segment(tileset.tile(nr, nc), facing_direction(dir),
                             params.strip_width),
                params.ssim);
            if (score >= params.ssim_threshold) set.connected.insert(dir);
        }
        result.push_back(std::move(set));
    }
    return result;
}

ConnectivityEval evaluate_connectivity(const std::vector<ConnectivitySet>& predicted,
                                       const std::vector<ConnectivitySet>& truth) {
    std::map<GridCoord, const ConnectivitySet*> truth_by_tile;
    for (const ConnectivitySet& t : truth) truth_by_tile[t.tile] = &t;
    if (truth_by_tile.size() != predicted.size()) {
        throw std::invalid_argument("predicted and truth tiles do not match");
    }

    std::size_t tp = 0, fp = 0, fn = 0, exact = 0;
    for (const ConnectivitySet& p : predicted) {
        auto it = truth_by_tile.find(p.tile);
        if (it == truth_by_tile.end()) {
            throw std::invalid_argument("predicted tile missing from truth");
        }
        const std::set<Direction8>& t = it->second->connected;
        for (Direction8 dir : kAllDirections) {
            bool in_p = p.connected.contains(dir);
            bool in_t = t.contains(dir);
            if (in_p && in_t) ++tp;
            else if (in_p) ++fp;
            else if (in_t) ++fn;
        }
        if (p.connected == t) ++exact;
    }

    ConnectivityEval eval;
    eval.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    eval.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    eval.f1 = (eval.precision + eval.recall) > 0
                  ? 2.0 * eval.precision * eval.recall /
                        (eval.precision + eval.recall)
                  : 0.0;
    eval.exact_match_rate =
        predicted.empty() ? 0.0
                          : static_cast<double>(exact) / predicted.size();
    return eval;
}

}  // namespace tilelab
