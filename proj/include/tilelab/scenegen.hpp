#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tilelab/image.hpp"
#include "tilelab/segmentation.hpp"
#include "tilelab/semantics.hpp"
#include "tilelab/terrain.hpp"

namespace tilelab {

struct Predicate {
    std::string subject;
    std::string relation;  // raw relation phrase as written
    std::string object;
    int frame = 0;
};

enum class SpatialRelation { Above, Below, LeftOf, RightOf, OnTopOf, Contains, Near };

std::string to_string(SpatialRelation rel);
SpatialRelation spatial_relation_from_string(const std::string& name);

// Alias phrase (normalized, space-separated tokens) -> canonical relation.
using RelationLexicon = std::map<std::string, SpatialRelation>;

// Covers the canonical relation names plus the narrative phrasings the
// scene pipeline is exercised with (sits atop, stands near, walks along,
// hide behind, lead to, glows with, filters through, ...).
RelationLexicon default_relation_aliases();

// JSON object {alias: canonical_name}; entries extend/override `base`.
RelationLexicon load_relation_aliases(const std::string& json_path,
                                      RelationLexicon base = default_relation_aliases());

SpatialRelation canonicalize_relation(const std::string& raw,
                                      const RelationLexicon& lexicon);

// One predicate per line: `subject_phrase relation_phrase object_phrase`,
// the relation being the longest lexicon alias found in the line. Frames
// are delimited by `# frame N` header lines; blank lines are skipped.
std::vector<Predicate> parse_predicates(const std::string& text,
                                        const RelationLexicon& lexicon);

std::vector<Predicate> load_predicates_file(const std::string& path,
                                            const RelationLexicon& lexicon);

// Entity-name keyword (normalized) -> affordance used to filter index queries.
using AffordanceHints = std::map<std::string, Affordance>;

AffordanceHints load_affordance_hints(const std::string& json_path);

struct SceneNode {
    std::string name;          // normalized entity name (node identity)
    std::string display_name;  // as written in the predicates
    std::optional<Affordance> affordance_hint;
    std::optional<std::string> matched_tile;  // tile_ref of the top index hit
    double placement_confidence = 0.0;
    bool unmatched = false;
};

struct SceneEdge {
    std::string from;
    std::string to;
    SpatialRelation relation = SpatialRelation::Near;

    bool operator==(const SceneEdge&) const = default;
};

struct SceneGraph {
    int frame = 0;
    std::vector<SceneNode> nodes;  // first-appearance order
    std::vector<SceneEdge> edges;  // deduplicated, predicate order

    const SceneNode* find_node(const std::string& name) const;
};

struct PrecedesEdge {
    int from_frame = 0;
    int to_frame = 0;
    std::string entity;
};

struct MergedGraph {
    std::vector<SceneGraph> frames;
    std::vector<PrecedesEdge> precedes;  // consecutive frames only
};

// One node per distinct normalized entity; matched_tile is the top-1 index
// hit (affordance-filtered when a hint applies); one edge per predicate.
SceneGraph build_scene_graph(const std::vector<Predicate>& predicates,
                             const SemanticIndex& index,
                             const EmbeddingProvider& embedder,
                             const RelationLexicon& lexicon,
                             const AffordanceHints& hints = {});

MergedGraph merge_graphs(const std::vector<SceneGraph>& frames);

struct PlacedObject {
    std::string entity;
    std::string tile_id;
    GridCoord anchor;
    int footprint_h = 1;
    int footprint_w = 1;
    double confidence = 0.0;
};

struct SceneMatrix {
    int rows = 0;
    int cols = 0;
    int tile_size = 32;
    std::vector<int> terrain;  // row-major; indexes terrain_tiles
    std::vector<std::string> terrain_tiles = {"terrain:blocked",
                                              "terrain:walkable"};
    std::vector<PlacedObject> objects;
    std::vector<SceneEdge> satisfied_edges;
    std::vector<SceneEdge> dropped_edges;
    std::vector<std::string> warnings;

    int terrain_at(int row, int col) const {
        return terrain[static_cast<std::size_t>(row) * cols + col];
    }
};

struct PlacementOptions {
    // Footprint in grid cells per tile_ref; anything absent is 1x1.
    std::map<std::string, std::pair<int, int>> footprints;
    // Tile id used for nodes without a match; absent, such nodes are
    // skipped with a warning.
    std::optional<std::string> placeholder_tile;
    int tile_size = 32;
};

// Rule-based placement: nodes ordered by descending degree then name, the
// first anchored at the centroid-most walkable cell, each next node scanned
// outward from its constraint-ideal cell until every relation to already
// placed nodes holds. Unsatisfiable constraints are dropped one at a time,
// lowest confidence first.
SceneMatrix place_objects(const SceneGraph& graph, const TerrainMap& terrain,
                          const PlacementOptions& options = {});

// Terrain tiles blitted per cell, object sprites alpha-composited centered
// on their footprint region. Every referenced tile id must resolve.
TileImage render_scene(const SceneMatrix& matrix,
                       const std::map<std::string, TileImage>& assets);

}  // namespace tilelab
