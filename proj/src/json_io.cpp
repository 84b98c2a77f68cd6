#include "tilelab/json_io.hpp"

#include <fstream>
#include <sstream>

#include "tilelab/errors.hpp"

namespace tilelab::jsonio {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

ordered_json load_json_file(const std::string& path) {
    ordered_json j = ordered_json::parse(read_text(path), nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON: " + path);
    return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

ordered_json tileset_meta_json(const Tileset& tileset,
                               const std::string& source_path) {
    return ordered_json{{"source_path", source_path},
                        {"tile_size", tileset.tile_size()},
                        {"rows", tileset.rows()},
                        {"cols", tileset.cols()},
                        {"dropped_pixels", tileset.dropped_pixels()}};
}

std::vector<AdjacencyRecord> score_all_adjacencies(const Tileset& tileset,
                                                   double threshold,
                                                   int strip_width) {
    std::vector<AdjacencyRecord> records;
    for (int r = 0; r < tileset.rows(); ++r) {
        for (int c = 0; c < tileset.cols(); ++c) {
            if (c + 1 < tileset.cols()) {
                AdjacencyRecord rec;
                rec.a = {r, c};
                rec.b = {r, c + 1};
                rec.orientation = Orientation::Horizontal;
                rec.score = adjacency_score(tileset.tile(r, c),
                                            tileset.tile(r, c + 1),
                                            Orientation::Horizontal, strip_width);
                rec.adjacent = is_adjacent(rec.score, threshold);
                records.push_back(rec);
            }
            if (r + 1 < tileset.rows()) {
                AdjacencyRecord rec;
                rec.a = {r, c};
                rec.b = {r + 1, c};
                rec.orientation = Orientation::Vertical;
                rec.score = adjacency_score(tileset.tile(r, c),
                                            tileset.tile(r + 1, c),
                                            Orientation::Vertical, strip_width);
                rec.adjacent = is_adjacent(rec.score, threshold);
                records.push_back(rec);
            }
        }
    }
    return records;
}

ordered_json adjacency_json(const std::vector<AdjacencyRecord>& records) {
    ordered_json arr = ordered_json::array();
    for (const AdjacencyRecord& rec : records) {
        arr.push_back(ordered_json{
            {"a", {rec.a.row, rec.a.col}},
            {"b", {rec.b.row, rec.b.col}},
            {"orientation",
             rec.orientation == Orientation::Horizontal ? "horizontal"
                                                        : "vertical"},
            {"score", rec.score},
            {"adjacent", rec.adjacent}});
    }
    return arr;
}

ordered_json segments_json(const std::vector<SegmentRecord>& segments) {
    ordered_json arr = ordered_json::array();
    for (const SegmentRecord& seg : segments) {
        ordered_json members = ordered_json::array();
        for (const GridCoord& m : seg.members) {
            members.push_back({m.row, m.col});
        }
        arr.push_back(ordered_json{
            {"parent", {seg.parent.row, seg.parent.col}},
            {"members", members},
            {"bbox",
             {seg.bounding_box.min_row, seg.bounding_box.min_col,
              seg.bounding_box.max_row, seg.bounding_box.max_col}},
            {"class", seg.classified ? to_string(seg.cls) : "unclassified"}});
    }
    return arr;
}

std::vector<SegmentRecord> segments_from_json(const ordered_json& j) {
    if (!j.is_array()) throw ParseError("segments JSON must be an array");
    std::vector<SegmentRecord> segments;
    for (const auto& item : j) {
        SegmentRecord seg;
        seg.parent = {item.at("parent").at(0).get<int>(),
                      item.at("parent").at(1).get<int>()};
        for (const auto& m : item.at("members")) {
            seg.members.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
        }
        const auto& bb = item.at("bbox");
        seg.bounding_box = {bb.at(0).get<int>(), bb.at(1).get<int>(),
                            bb.at(2).get<int>(), bb.at(3).get<int>()};
        std::string cls = item.at("class").get<std::string>();
        if (cls != "unclassified") {
            seg.cls = segment_class_from_string(cls);
            seg.classified = true;
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

ordered_json report_json(const SegmentationReport& report) {
    ordered_json counts;
    for (SegmentClass cls :
         {SegmentClass::Complete, SegmentClass::Partial, SegmentClass::Texture,
          SegmentClass::CompleteTexture, SegmentClass::PartialTexture}) {
        auto it = report.counts.find(cls);
        counts[to_string(cls)] = it == report.counts.end() ? 0 : it->second;
    }
    return ordered_json{{"total_segments", report.total_segments},
                        {"counts", counts},
                        {"usable_rate", report.usable_rate}};
}

void apply_class_overrides(std::vector<SegmentRecord>& segments,
                           const ordered_json& overrides) {
    if (!overrides.is_array()) {
        throw ParseError("overrides must be a JSON array");
    }
    for (const auto& item : overrides) {
        GridCoord parent{item.at("parent").at(0).get<int>(),
                         item.at("parent").at(1).get<int>()};
        SegmentClass cls =
            segment_class_from_string(item.at("class").get<std::string>());
        bool found = false;
        for (SegmentRecord& seg : segments) {
            if (seg.parent == parent) {
                seg.cls = cls;
                seg.classified = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw ParseError("override parent [" + std::to_string(parent.row) +
                             "," + std::to_string(parent.col) +
                             "] matches no segment");
        }
    }
}

ordered_json connectivity_json(const std::vector<ConnectivitySet>& sets) {
    ordered_json arr = ordered_json::array();
    for (const ConnectivitySet& set : sets) {
        ordered_json connected = ordered_json::array();
        ordered_json no_neighbor = ordered_json::array();
        for (Direction8 dir : kAllDirections) {
            if (set.connected.contains(dir)) connected.push_back(to_string(dir));
            if (set.no_neighbor.contains(dir)) {
                no_neighbor.push_back(to_string(dir));
            }
        }
        arr.push_back(ordered_json{{"tile", {set.tile.row, set.tile.col}},
                                   {"connected", connected},
                                   {"no_neighbor", no_neighbor}});
    }
    return arr;
}

std::vector<ConnectivitySet> connectivity_from_json(const ordered_json& j) {
    if (!j.is_array()) throw ParseError("connectivity JSON must be an array");
    std::vector<ConnectivitySet> sets;
    for (const auto& item : j) {
        ConnectivitySet set;
        set.tile = {item.at("tile").at(0).get<int>(),
                    item.at("tile").at(1).get<int>()};
        for (const auto& name : item.at("connected")) {
            set.connected.insert(direction_from_string(name.get<std::string>()));
        }
        if (item.contains("no_neighbor")) {
            for (const auto& name : item.at("no_neighbor")) {
                set.no_neighbor.insert(
                    direction_from_string(name.get<std::string>()));
            }
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

ordered_json connectivity_eval_json(const ConnectivityEval& eval) {
    return ordered_json{{"precision", eval.precision},
                        {"recall", eval.recall},
                        {"f1", eval.f1},
                        {"exact_match_rate", eval.exact_match_rate}};
}

ordered_json records_json(const std::vector<SemanticRecord>& records) {
    ordered_json arr = ordered_json::array();
    for (const SemanticRecord& rec : records) {
        ordered_json affordances = ordered_json::array();
        for (Affordance a : rec.affordances) affordances.push_back(to_string(a));
        arr.push_back(ordered_json{{"tile_ref", rec.tile_ref},
                                   {"detailed_name", rec.detailed_name},
                                   {"group_label", rec.group_label},
                                   {"supercategory", rec.supercategory},
                                   {"affordances", affordances},
                                   {"provenance", to_string(rec.provenance)}});
    }
    return arr;
}

std::vector<SemanticRecord> records_from_json(const ordered_json& j) {
    if (!j.is_array()) throw ParseError("records JSON must be an array");
    std::vector<SemanticRecord> records;
    for (const auto& item : j) {
        SemanticRecord rec;
        rec.tile_ref = item.at("tile_ref").get<std::string>();
        rec.detailed_name = item.value("detailed_name", std::string());
        rec.group_label = item.at("group_label").get<std::string>();
        rec.supercategory = item.value("supercategory", std::string());
        for (const auto& name : item.at("affordances")) {
            rec.affordances.insert(
                affordance_from_string(name.get<std::string>()));
        }
        rec.provenance =
            provenance_from_string(item.value("provenance", "annotator"));
        records.push_back(std::move(rec));
    }
    return records;
}

void write_embeddings_jsonl(
    const std::string& path,
    const std::vector<std::pair<std::string, EmbeddingVector>>& entries) {
    std::string out;
    for (const auto& [key, vec] : entries) {
        ordered_json line{{"key", key}, {"vector", vec.values}};
        out += line.dump();
        out += "\n";
    }
    write_text(path, out);
}

ordered_json model_json(const AffordanceModel& model) {
    ordered_json labels = ordered_json::array();
    for (Affordance a : kAllAffordances) labels.push_back(to_string(a));
    return ordered_json{{"input_dim", model.input_dim},
                        {"hidden_size", model.hidden_size},
                        {"w1", model.w1},
                        {"b1", model.b1},
                        {"w2", model.w2},
                        {"b2", model.b2},
                        {"label_order", labels}};
}

AffordanceModel model_from_json(const ordered_json& j) {
    AffordanceModel model;
    model.input_dim = j.at("input_dim").get<std::size_t>();
    model.hidden_size = j.at("hidden_size").get<std::size_t>();
    model.w1 = j.at("w1").get<std::vector<double>>();
    model.b1 = j.at("b1").get<std::vector<double>>();
    model.w2 = j.at("w2").get<std::vector<double>>();
    model.b2 = j.at("b2").get<std::vector<double>>();
    if (model.w1.size() != model.hidden_size * model.input_dim ||
        model.b1.size() != model.hidden_size ||
        model.w2.size() != kAffordanceCount * model.hidden_size ||
        model.b2.size() != kAffordanceCount) {
        throw ParseError("model parameter shapes are inconsistent");
    }
    return model;
}

std::vector<DatasetEntry> load_affordance_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);
    std::vector<DatasetEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": invalid JSON line");
        }
        DatasetEntry entry;
        entry.key = j.at("key").get<std::string>();
        entry.vector =
            EmbeddingVector(j.at("vector").get<std::vector<double>>());
        if (j.contains("labels")) {
            for (const auto& name : j.at("labels")) {
                entry.labels.insert(
                    affordance_from_string(name.get<std::string>()));
            }
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<TrainingExample> to_training_examples(
    const std::vector<DatasetEntry>& entries) {
    std::vector<TrainingExample> examples;
    examples.reserve(entries.size());
    for (const DatasetEntry& entry : entries) {
        examples.push_back(
            {entry.vector, MultiHotTarget::from_labels(entry.labels)});
    }
    return examples;
}

ordered_json metrics_json(const LabelMetrics& metrics) {
    ordered_json per_label;
    for (std::size_t j = 0; j < kAffordanceCount; ++j) {
        const PerLabelMetrics& m = metrics.per_label[j];
        per_label[to_string(static_cast<Affordance>(j))] =
            ordered_json{{"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support}};
    }
    return ordered_json{{"per_label", per_label},
                        {"micro_precision", metrics.micro_precision},
                        {"micro_recall", metrics.micro_recall},
                        {"micro_f1", metrics.micro_f1},
                        {"macro_f1", metrics.macro_f1}};
}

std::string pr_scatter_csv(const LabelMetrics& metrics) {
    std::string out = "label,precision,recall\n";
    for (std::size_t j = 0; j < kAffordanceCount; ++j) {
        ordered_json p = metrics.per_label[j].precision;
        ordered_json r = metrics.per_label[j].recall;
        out += "\"" + to_string(static_cast<Affordance>(j)) + "\"," + p.dump() +
               "," + r.dump() + "\n";
    }
    return out;
}

ordered_json match_counts_json(const MatchCounts& counts) {
    ordered_json levels;
    for (MatchLevel level : kAllMatchLevels) {
        ordered_json fields;
        for (LabelField field : kAllLabelFields) {
            std::size_t li = static_cast<std::size_t>(level);
            std::size_t fi = static_cast<std::size_t>(field);
            fields[to_string(field)] =
                ordered_json{{"matched", counts.matched[li][fi]},
                             {"unavailable", counts.unavailable[li][fi]},
                             {"percent", counts.percent(level, field)}};
        }
        levels[to_string(level)] = fields;
    }
    return ordered_json{{"total", counts.total}, {"levels", levels}};
}

namespace {

ordered_json edge_json(const SceneEdge& edge) {
    return ordered_json{{"from", edge.from},
                        {"to", edge.to},
                        {"relation", to_string(edge.relation)}};
}

}  // namespace

ordered_json scene_graph_json(const SceneGraph& graph) {
    ordered_json nodes = ordered_json::array();
    for (const SceneNode& node : graph.nodes) {
        ordered_json n{{"name", node.name},
                       {"display_name", node.display_name}};
        n["affordance_hint"] = node.affordance_hint
                                   ? ordered_json(to_string(*node.affordance_hint))
                                   : ordered_json(nullptr);
        n["matched_tile"] = node.matched_tile ? ordered_json(*node.matched_tile)
                                              : ordered_json(nullptr);
        n["placement_confidence"] = node.placement_confidence;
        n["unmatched"] = node.unmatched;
        nodes.push_back(std::move(n));
    }
    ordered_json edges = ordered_json::array();
    for (const SceneEdge& edge : graph.edges) edges.push_back(edge_json(edge));
    return ordered_json{
        {"frame", graph.frame}, {"nodes", nodes}, {"edges", edges}};
}

ordered_json merged_graph_json(const MergedGraph& merged) {
    ordered_json frames = ordered_json::array();
    for (const SceneGraph& graph : merged.frames) {
        frames.push_back(scene_graph_json(graph));
    }
    ordered_json precedes = ordered_json::array();
    for (const PrecedesEdge& edge : merged.precedes) {
        precedes.push_back(ordered_json{{"from_frame", edge.from_frame},
                                        {"to_frame", edge.to_frame},
                                        {"entity", edge.entity},
                                        {"relation", "precedes"}});
    }
    return ordered_json{{"frames", frames}, {"precedes", precedes}};
}

ordered_json scene_json(const SceneMatrix& matrix, int frame) {
    ordered_json terrain_rows = ordered_json::array();
    for (int r = 0; r < matrix.rows; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < matrix.cols; ++c) row.push_back(matrix.terrain_at(r, c));
        terrain_rows.push_back(std::move(row));
    }
    ordered_json objects = ordered_json::array();
    for (const PlacedObject& obj : matrix.objects) {
        objects.push_back(
            ordered_json{{"entity", obj.entity},
                         {"tile_id", obj.tile_id},
                         {"anchor", {obj.anchor.row, obj.anchor.col}},
                         {"footprint", {obj.footprint_h, obj.footprint_w}},
                         {"confidence", obj.confidence}});
    }
    ordered_json satisfied = ordered_json::array();
    for (const SceneEdge& e : matrix.satisfied_edges) satisfied.push_back(edge_json(e));
    ordered_json droppedj = ordered_json::array();
    for (const SceneEdge& e : matrix.dropped_edges) droppedj.push_back(edge_json(e));

    return ordered_json{{"frame", frame},
                        {"rows", matrix.rows},
                        {"cols", matrix.cols},
                        {"tile_size", matrix.tile_size},
                        {"terrain_tiles", matrix.terrain_tiles},
                        {"terrain", terrain_rows},
                        {"objects", objects},
                        {"satisfied_edges", satisfied},
                        {"dropped_edges", droppedj},
                        {"warnings", matrix.warnings}};
}

std::string terrain_csv(const SceneMatrix& matrix) {
    std::string out;
    for (int r = 0; r < matrix.rows; ++r) {
        for (int c = 0; c < matrix.cols; ++c) {
            if (c > 0) out.push_back(',');
            out += std::to_string(matrix.terrain_at(r, c));
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace tilelab::jsonio
