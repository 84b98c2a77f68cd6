#include "tilelab/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tilelab/errors.hpp"

namespace tilelab {

std::string to_string(SpatialRelation rel) {
    switch (rel) {
        case SpatialRelation::Above: return "above";
        case SpatialRelation::Below: return "below";
        case SpatialRelation::LeftOf: return "left_of";
        case SpatialRelation::RightOf: return "right_of";
        case SpatialRelation::OnTopOf: return "on_top_of";
        case SpatialRelation::Contains: return "contains";
        case SpatialRelation::Near: return "near";
    }
    return "?";
}

SpatialRelation spatial_relation_from_string(const std::string& name) {
    for (SpatialRelation rel :
         {SpatialRelation::Above, SpatialRelation::Below, SpatialRelation::LeftOf,
          SpatialRelation::RightOf, SpatialRelation::OnTopOf,
          SpatialRelation::Contains, SpatialRelation::Near}) {
        if (to_string(rel) == name) return rel;
    }
    throw std::invalid_argument("unknown spatial relation: " + name);
}

namespace {

std::string normalize_phrase(const std::string& text) {
    std::vector<std::string> tokens = tokenize(text);
    std::string out;
    for (const std::string& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

RelationLexicon default_relation_aliases() {
    return {
        {"above", SpatialRelation::Above},
        {"below", SpatialRelation::Below},
        {"left of", SpatialRelation::LeftOf},
        {"to the left of", SpatialRelation::LeftOf},
        {"right of", SpatialRelation::RightOf},
        {"to the right of", SpatialRelation::RightOf},
        {"on top of", SpatialRelation::OnTopOf},
        {"sits atop", SpatialRelation::OnTopOf},
        {"walks along", SpatialRelation::OnTopOf},
        {"contains", SpatialRelation::Contains},
        {"near", SpatialRelation::Near},
        {"stands near", SpatialRelation::Near},
        {"stands before", SpatialRelation::Near},
        {"hide behind", SpatialRelation::Near},
        {"hides behind", SpatialRelation::Near},
        {"lead to", SpatialRelation::Near},
        {"leads to", SpatialRelation::Near},
        {"glows with", SpatialRelation::Near},
        {"filters through", SpatialRelation::Near},
    };
}

RelationLexicon load_relation_aliases(const std::string& json_path,
                                      RelationLexicon base) {
    std::ifstream in(json_path);
    if (!in) throw IoError("cannot open relation lexicon: " + json_path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("relation lexicon must be a JSON object: " + json_path);
    }
    for (const auto& [alias, canonical] : j.items()) {
        base[normalize_phrase(alias)] =
            spatial_relation_from_string(canonical.get<std::string>());
    }
    return base;
}

SpatialRelation canonicalize_relation(const std::string& raw,
                                      const RelationLexicon& lexicon) {
    auto it = lexicon.find(normalize_phrase(raw));
    if (it == lexicon.end()) {
        throw ParseError("unknown relation: \"" + raw + "\"");
    }
    return it->second;
}

namespace {

std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> words;
    std::istringstream in(line);
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

std::string join(const std::vector<std::string>& words, std::size_t begin,
                 std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) out.push_back(' ');
        out += words[i];
    }
    return out;
}

}  // namespace

std::vector<Predicate> parse_predicates(const std::string& text,
                                        const RelationLexicon& lexicon) {
    // Aliases as token sequences, longest first.
    std::vector<std::pair<std::vector<std::string>, std::string>> aliases;
    for (const auto& [alias, rel] : lexicon) {
        (void)rel;
        aliases.push_back({tokenize(alias), alias});
    }
    std::sort(aliases.begin(), aliases.end(),
              [](const auto& a, const auto& b) {
                  if (a.first.size() != b.first.size()) {
                      return a.first.size() > b.first.size();
                  }
                  return a.second < b.second;
              });

    std::vector<Predicate> predicates;
    int frame = 0;
    int line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> words = split_words(line);
        if (words.empty()) continue;

        if (words[0] == "#") {
            // `# frame N` header
            if (words.size() >= 3 && words[1] == "frame") {
                try {
                    frame = std::stoi(words[2]);
                } catch (const std::exception&) {
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": bad frame header: " + line);
                }
                if (frame < 0) {
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": frame index must be >= 0");
                }
                continue;
            }
            continue;  // other comments ignored
        }

        std::vector<std::string> lowered;
        lowered.reserve(words.size());
        for (const std::string& w : words) {
            std::vector<std::string> toks = tokenize(w);
            lowered.push_back(toks.empty() ? std::string() : toks[0]);
        }

        // Longest alias occurrence; earliest position on equal length.
        std::size_t best_pos = 0, best_len = 0;
        std::string best_alias;
        for (const auto& [alias_tokens, alias_text] : aliases) {
            if (best_len > 0 && alias_tokens.size() < best_len) break;
            for (std::size_t pos = 0;
                 pos + alias_tokens.size() <= lowered.size(); ++pos) {
                bool match = true;
                for (std::size_t k = 0; k < alias_tokens.size(); ++k) {
                    if (lowered[pos + k] != alias_tokens[k]) {
                        match = false;
                        break;
                    }
                }
                if (!match) continue;
                if (alias_tokens.size() > best_len ||
                    (alias_tokens.size() == best_len && pos < best_pos)) {
                    best_len = alias_tokens.size();
                    best_pos = pos;
                    best_alias = alias_text;
                }
                break;  // earliest occurrence of this alias found
            }
        }
        if (best_len == 0) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": no known relation in: " + line);
        }

        Predicate p;
        p.subject = join(words, 0, best_pos);
        p.relation = join(words, best_pos, best_pos + best_len);
        p.object = join(words, best_pos + best_len, words.size());
        p.frame = frame;
        if (normalize_phrase(p.subject).empty()) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": empty subject in: " + line);
        }
        if (normalize_phrase(p.object).empty()) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": empty object in: " + line);
        }
        predicates.push_back(std::move(p));
    }
    return predicates;
}

std::vector<Predicate> load_predicates_file(const std::string& path,
                                            const RelationLexicon& lexicon) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open predicates file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    // JSON array form: [{subject, relation, object, frame}]
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) throw ParseError("bad JSON predicates: " + path);
        std::vector<Predicate> predicates;
        for (const auto& item : j) {
            Predicate p;
            p.subject = item.at("subject").get<std::string>();
            p.relation = item.at("relation").get<std::string>();
            p.object = item.at("object").get<std::string>();
            p.frame = item.value("frame", 0);
            predicates.push_back(std::move(p));
        }
        return predicates;
    }
    return parse_predicates(text, lexicon);
}

AffordanceHints load_affordance_hints(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw IoError("cannot open affordance hints: " + json_path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("affordance hints must be a JSON object: " + json_path);
    }
    AffordanceHints hints;
    for (const auto& [keyword, name] : j.items()) {
        hints[normalize_phrase(keyword)] =
            affordance_from_string(name.get<std::string>());
    }
    return hints;
}

const SceneNode* SceneGraph::find_node(const std::string& name) const {
    for (const SceneNode& node : nodes) {
        if (node.name == name) return &node;
    }
    return nullptr;
}

namespace {

std::optional<Affordance> derive_hint(const std::string& normalized_name,
                                      const AffordanceHints& hints) {
    std::vector<std::string> name_tokens = tokenize(normalized_name);
    std::optional<Affordance> best;
    std::size_t best_len = 0;
    for (const auto& [keyword, affordance] : hints) {
        std::vector<std::string> kw = tokenize(keyword);
        if (kw.empty() || kw.size() < best_len) continue;
        for (std::size_t pos = 0; pos + kw.size() <= name_tokens.size(); ++pos) {
            bool match = true;
            for (std::size_t k = 0; k < kw.size(); ++k) {
                if (name_tokens[pos + k] != kw[k]) {
                    match = false;
                    break;
                }
            }
            if (match && kw.size() > best_len) {
                best_len = kw.size();
                best = affordance;
                break;
            }
        }
    }
    return best;
}

}  // namespace

SceneGraph build_scene_graph(const std::vector<Predicate>& predicates,
                             const SemanticIndex& index,
                             const EmbeddingProvider& embedder,
                             const RelationLexicon& lexicon,
                             const AffordanceHints& hints) {
    if (index.size() == 0) throw std::invalid_argument("empty semantic index");

    SceneGraph graph;
    if (!predicates.empty()) graph.frame = predicates[0].frame;

    auto ensure_node = [&](const std::string& display) -> std::string {
        std::string name = normalize_label(display);
        if (!graph.find_node(name)) {
            SceneNode node;
            node.name = name;
            node.display_name = display;
            node.affordance_hint = derive_hint(name, hints);

            std::optional<EmbeddingVector> vec = embedder.embed(name);
            std::vector<SemanticIndex::Hit> hits;
            if (vec) {
                std::optional<std::set<Affordance>> filter;
                if (node.affordance_hint) filter = {{*node.affordance_hint}};
                hits = index.query(*vec, 1, filter);
            }
            if (hits.empty()) {
                node.unmatched = true;
            } else {
                node.matched_tile = hits[0].record->tile_ref;
                node.placement_confidence = hits[0].score;
            }
            graph.nodes.push_back(std::move(node));
        }
        return name;
    };

    for (const Predicate& p : predicates) {
        if (p.frame != graph.frame) {
            throw std::invalid_argument(
                "build_scene_graph expects predicates of a single frame");
        }
        SceneEdge edge;
        edge.from = ensure_node(p.subject);
        edge.to = ensure_node(p.object);
        edge.relation = canonicalize_relation(p.relation, lexicon);
        if (std::find(graph.edges.begin(), graph.edges.end(), edge) ==
            graph.edges.end()) {
            graph.edges.push_back(edge);
        }
    }
    return graph;
}

MergedGraph merge_graphs(const std::vector<SceneGraph>& frames) {
    MergedGraph merged;
    merged.frames = frames;
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
        for (const SceneNode& node : frames[i].nodes) {
            if (frames[i + 1].find_node(node.name)) {
                merged.precedes.push_back(
                    {frames[i].frame, frames[i + 1].frame, node.name});
            }
        }
    }
    return merged;
}

namespace {

struct Placement {
    GridCoord anchor;
    int fh = 1;
    int fw = 1;
};

bool footprint_contains(const Placement& p, const GridCoord& cell) {
    return cell.row >= p.anchor.row && cell.row < p.anchor.row + p.fh &&
           cell.col >= p.anchor.col && cell.col < p.anchor.col + p.fw;
}

bool footprints_overlap(const Placement& a, const Placement& b) {
    return a.anchor.row < b.anchor.row + b.fh && b.anchor.row < a.anchor.row + a.fh &&
           a.anchor.col < b.anchor.col + b.fw && b.anchor.col < a.anchor.col + a.fw;
}

// X is the node being placed; `placed` the existing endpoint. `x_is_subject`
// tells which side of the relation X is on.
bool relation_holds(const GridCoord& x, const Placement& x_place,
                    const Placement& placed, SpatialRelation rel,
                    bool x_is_subject) {
    const GridCoord& p = placed.anchor;
    switch (rel) {
        case SpatialRelation::Above:
            return x_is_subject ? (x.col == p.col && x.row < p.row)
                                : (x.col == p.col && x.row > p.row);
        case SpatialRelation::Below:
            return x_is_subject ? (x.col == p.col && x.row > p.row)
                                : (x.col == p.col && x.row < p.row);
        case SpatialRelation::LeftOf:
            return x_is_subject ? (x.row == p.row && x.col < p.col)
                                : (x.row == p.row && x.col > p.col);
        case SpatialRelation::RightOf:
            return x_is_subject ? (x.row == p.row && x.col > p.col)
                                : (x.row == p.row && x.col < p.col);
        case SpatialRelation::OnTopOf:
            return x == p;
        case SpatialRelation::Contains:
            // Subject is the container.
            return x_is_subject ? footprint_contains(x_place, p)
                                : footprint_contains(placed, x);
        case SpatialRelation::Near: {
            int dr = std::abs(x.row - p.row);
            int dc = std::abs(x.col - p.col);
            return std::max(dr, dc) <= 2;
        }
    }
    return false;
}

GridCoord ideal_cell(const Placement& placed, SpatialRelation rel,
                     bool x_is_subject) {
    GridCoord p = placed.anchor;
    switch (rel) {
        case SpatialRelation::Above:
            return {x_is_subject ? p.row - 1 : p.row + 1, p.col};
        case SpatialRelation::Below:
            return {x_is_subject ? p.row + 1 : p.row - 1, p.col};
        case SpatialRelation::LeftOf:
            return {p.row, x_is_subject ? p.col - 1 : p.col + 1};
        case SpatialRelation::RightOf:
            return {p.row, x_is_subject ? p.col + 1 : p.col - 1};
        default:
            return p;
    }
}

}  // namespace

SceneMatrix place_objects(const SceneGraph& graph, const TerrainMap& terrain,
                          const PlacementOptions& options) {
    SceneMatrix matrix;
    matrix.rows = terrain.rows;
    matrix.cols = terrain.cols;
    matrix.tile_size = options.tile_size;
    matrix.terrain.resize(static_cast<std::size_t>(terrain.rows) * terrain.cols);
    for (int r = 0; r < terrain.rows; ++r) {
        for (int c = 0; c < terrain.cols; ++c) {
            matrix.terrain[static_cast<std::size_t>(r) * terrain.cols + c] =
                terrain.walkable(r, c) ? 1 : 0;
        }
    }

    if (terrain.walkable_count() == 0) {
        throw PlacementError("no walkable cell available");
    }

    // Centroid-most walkable cell.
    double sum_r = 0.0, sum_c = 0.0;
    for (int r = 0; r < terrain.rows; ++r) {
        for (int c = 0; c < terrain.cols; ++c) {
            if (terrain.walkable(r, c)) {
                sum_r += r;
                sum_c += c;
            }
        }
    }
    const double n_walk = static_cast<double>(terrain.walkable_count());
    const double cen_r = sum_r / n_walk;
    const double cen_c = sum_c / n_walk;
    GridCoord centroid_cell{0, 0};
    double best_d = 1e300;
    for (int r = 0; r < terrain.rows; ++r) {
        for (int c = 0; c < terrain.cols; ++c) {
            if (!terrain.walkable(r, c)) continue;
            double d = (r - cen_r) * (r - cen_r) + (c - cen_c) * (c - cen_c);
            if (d < best_d) {
                best_d = d;
                centroid_cell = {r, c};
            }
        }
    }

    // Node order: descending degree, then name.
    std::map<std::string, int> degree;
    for (const SceneEdge& e : graph.edges) {
        ++degree[e.from];
        ++degree[e.to];
    }
    std::vector<const SceneNode*> order;
    for (const SceneNode& node : graph.nodes) order.push_back(&node);
    std::sort(order.begin(), order.end(),
              [&](const SceneNode* a, const SceneNode* b) {
                  int da = degree.count(a->name) ? degree[a->name] : 0;
                  int db = degree.count(b->name) ? degree[b->name] : 0;
                  if (da != db) return da > db;
                  return a->name < b->name;
              });

    std::map<std::string, Placement> placements;
    std::set<std::size_t> dropped;  // indexes into graph.edges

    auto node_tile = [&](const SceneNode& node) -> std::optional<std::string> {
        if (node.matched_tile) return node.matched_tile;
        return options.placeholder_tile;
    };

    auto footprint_of = [&](const std::string& tile_id) -> std::pair<int, int> {
        auto it = options.footprints.find(tile_id);
        return it == options.footprints.end() ? std::pair<int, int>{1, 1}
                                              : it->second;
    };

    auto edge_confidence = [&](const SceneEdge& e) {
        double cf = 1.0, ct = 1.0;
        if (const SceneNode* n = graph.find_node(e.from)) {
            cf = n->placement_confidence;
        }
        if (const SceneNode* n = graph.find_node(e.to)) {
            ct = n->placement_confidence;
        }
        return std::min(cf, ct);
    };

    for (const SceneNode* node : order) {
        std::optional<std::string> tile = node_tile(*node);
        if (!tile) {
            matrix.warnings.push_back("skipped unmatched entity: " + node->name);
            for (std::size_t i = 0; i < graph.edges.size(); ++i) {
                const SceneEdge& e = graph.edges[i];
                if (e.from == node->name || e.to == node->name) {
                    dropped.insert(i);
                }
            }
            continue;
        }
        auto [fh, fw] = footprint_of(*tile);
        Placement place;
        place.fh = fh;
        place.fw = fw;

        // Constraints against already placed nodes.
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < graph.edges.size(); ++i) {
            if (dropped.contains(i)) continue;
            const SceneEdge& e = graph.edges[i];
            bool from_me = e.from == node->name && placements.contains(e.to);
            bool to_me = e.to == node->name && placements.contains(e.from);
            if (from_me || to_me) active.push_back(i);
        }

        auto cell_free = [&](const GridCoord& anchor,
                             const std::vector<std::size_t>& constraints) {
            Placement candidate{anchor, fh, fw};
            if (anchor.row < 0 || anchor.col < 0 ||
                anchor.row + fh > terrain.rows || anchor.col + fw > terrain.cols) {
                return false;
            }
            for (int r = anchor.row; r < anchor.row + fh; ++r) {
                for (int c = anchor.col; c < anchor.col + fw; ++c) {
                    if (!terrain.walkable(r, c)) return false;
                }
            }
            for (const auto& [name, existing] : placements) {
                if (!footprints_overlap(candidate, existing)) continue;
                // Overlap allowed only with an on_top_of / contains partner.
                bool allowed = false;
                for (std::size_t i : constraints) {
                    const SceneEdge& e = graph.edges[i];
                    if (e.relation != SpatialRelation::OnTopOf &&
                        e.relation != SpatialRelation::Contains) {
                        continue;
                    }
                    const std::string& other =
                        e.from == node->name ? e.to : e.from;
                    if (other == name) {
                        allowed = true;
                        break;
                    }
                }
                if (!allowed) return false;
            }
            return true;
        };

        auto satisfies_all = [&](const GridCoord& anchor,
                                 const std::vector<std::size_t>& constraints) {
            Placement candidate{anchor, fh, fw};
            for (std::size_t i : constraints) {
                const SceneEdge& e = graph.edges[i];
                bool x_is_subject = e.from == node->name;
                const Placement& other =
                    placements.at(x_is_subject ? e.to : e.from);
                if (!relation_holds(anchor, candidate, other, e.relation,
                                    x_is_subject)) {
                    return false;
                }
            }
            return true;
        };

        std::optional<GridCoord> chosen;
        while (true) {
            // Constraint-ideal cell: mean of per-constraint ideals.
            GridCoord ideal = centroid_cell;
            if (!active.empty()) {
                double ir = 0.0, ic = 0.0;
                for (std::size_t i : active) {
                    const SceneEdge& e = graph.edges[i];
                    bool x_is_subject = e.from == node->name;
                    GridCoord g = ideal_cell(
                        placements.at(x_is_subject ? e.to : e.from), e.relation,
                        x_is_subject);
                    ir += g.row;
                    ic += g.col;
                }
                ideal = {static_cast<int>(std::lround(ir / active.size())),
                         static_cast<int>(std::lround(ic / active.size()))};
            }

            int max_ring = std::max(terrain.rows, terrain.cols);
            for (int d = 0; d <= max_ring && !chosen; ++d) {
                for (int r = ideal.row - d; r <= ideal.row + d && !chosen; ++r) {
                    for (int c = ideal.col - d; c <= ideal.col + d; ++c) {
                        if (std::max(std::abs(r - ideal.row),
                                     std::abs(c - ideal.col)) != d) {
                            continue;
                        }
                        GridCoord cell{r, c};
                        if (!cell_free(cell, active)) continue;
                        if (!satisfies_all(cell, active)) continue;
                        chosen = cell;
                        break;
                    }
                }
            }
            if (chosen || active.empty()) break;

            // Relax: drop the lowest-confidence constraint.
            std::size_t victim = active[0];
            double victim_conf = edge_confidence(graph.edges[victim]);
            for (std::size_t i : active) {
                double conf = edge_confidence(graph.edges[i]);
                if (conf < victim_conf) {
                    victim = i;
                    victim_conf = conf;
                }
            }
            dropped.insert(victim);
            active.erase(std::remove(active.begin(), active.end(), victim),
                         active.end());
            const SceneEdge& e = graph.edges[victim];
            matrix.warnings.push_back(
                "dropped unsatisfiable relation: " + e.from + " " +
                to_string(e.relation) + " " + e.to);
        }
        if (!chosen) {
            throw PlacementError("no walkable cell available for " + node->name);
        }

        place.anchor = *chosen;
        placements[node->name] = place;

        PlacedObject obj;
        obj.entity = node->name;
        obj.tile_id = *tile;
        obj.anchor = *chosen;
        obj.footprint_h = fh;
        obj.footprint_w = fw;
        obj.confidence = node->placement_confidence;
        matrix.objects.push_back(std::move(obj));
    }

    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        (dropped.contains(i) ? matrix.dropped_edges : matrix.satisfied_edges)
            .push_back(graph.edges[i]);
    }
    return matrix;
}

namespace {

Rgba alpha_over(const Rgba& src, const Rgba& dst) {
    if (src.a == 255) return src;
    if (src.a == 0) return dst;
    double sa = src.a / 255.0;
    double da = dst.a / 255.0;
    double fa = sa + da * (1.0 - sa);
    if (fa <= 0.0) return Rgba{0, 0, 0, 0};
    auto mix = [&](std::uint8_t s, std::uint8_t d) {
        double v = (s * sa + d * da * (1.0 - sa)) / fa;
        return static_cast<std::uint8_t>(std::lround(v));
    };
    return Rgba{mix(src.r, dst.r), mix(src.g, dst.g), mix(src.b, dst.b),
                static_cast<std::uint8_t>(std::lround(fa * 255.0))};
}

}  // namespace

TileImage render_scene(const SceneMatrix& matrix,
                       const std::map<std::string, TileImage>& assets) {
    const int ts = matrix.tile_size;
    TileImage out(matrix.cols * ts, matrix.rows * ts);

    auto asset_for = [&](const std::string& id) -> const TileImage& {
        auto it = assets.find(id);
        if (it == assets.end()) throw RenderError("missing tile asset: " + id);
        return it->second;
    };

    for (int r = 0; r < matrix.rows; ++r) {
        for (int c = 0; c < matrix.cols; ++c) {
            const std::string& id =
                matrix.terrain_tiles.at(matrix.terrain_at(r, c));
            const TileImage& tile = asset_for(id);
            if (tile.width() != ts || tile.height() != ts) {
                throw RenderError("terrain asset " + id + " is not " +
                                  std::to_string(ts) + "px");
            }
            for (int y = 0; y < ts; ++y) {
                for (int x = 0; x < ts; ++x) {
                    out.at(r * ts + y, c * ts + x) = tile.at(y, x);
                }
            }
        }
    }

    for (const PlacedObject& obj : matrix.objects) {
        const TileImage& sprite = asset_for(obj.tile_id);
        // Centered over the footprint region, native size.
        int region_h = obj.footprint_h * ts;
        int region_w = obj.footprint_w * ts;
        int oy = obj.anchor.row * ts + (region_h - sprite.height()) / 2;
        int ox = obj.anchor.col * ts + (region_w - sprite.width()) / 2;
        for (int y = 0; y < sprite.height(); ++y) {
            int py = oy + y;
            if (py < 0 || py >= out.height()) continue;
            for (int x = 0; x < sprite.width(); ++x) {
                int px = ox + x;
                if (px < 0 || px >= out.width()) continue;
                out.at(py, px) = alpha_over(sprite.at(y, x), out.at(py, px));
            }
        }
    }
    return out;
}

}  // namespace tilelab
