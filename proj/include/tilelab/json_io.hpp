#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tilelab/affordance.hpp"
#include "tilelab/connectivity.hpp"
#include "tilelab/scenegen.hpp"
#include "tilelab/segmentation.hpp"
#include "tilelab/semantics.hpp"
#include "tilelab/tileset.hpp"

// Canonical JSON forms for every file artifact. Key order is fixed so that
// reruns produce byte-identical output.
namespace tilelab::jsonio {

using ordered_json = nlohmann::ordered_json;

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);
ordered_json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const ordered_json& j);

ordered_json tileset_meta_json(const Tileset& tileset,
                               const std::string& source_path);

struct AdjacencyRecord {
    GridCoord a;
    GridCoord b;
    Orientation orientation = Orientation::Horizontal;
    double score = 0.0;
    bool adjacent = false;
};

std::vector<AdjacencyRecord> score_all_adjacencies(const Tileset& tileset,
                                                   double threshold,
                                                   int strip_width);
ordered_json adjacency_json(const std::vector<AdjacencyRecord>& records);

ordered_json segments_json(const std::vector<SegmentRecord>& segments);
std::vector<SegmentRecord> segments_from_json(const ordered_json& j);
ordered_json report_json(const SegmentationReport& report);

// Override file: [{"parent": [r, c], "class": "complete"}].
void apply_class_overrides(std::vector<SegmentRecord>& segments,
                           const ordered_json& overrides);

ordered_json connectivity_json(const std::vector<ConnectivitySet>& sets);
std::vector<ConnectivitySet> connectivity_from_json(const ordered_json& j);
ordered_json connectivity_eval_json(const ConnectivityEval& eval);

ordered_json records_json(const std::vector<SemanticRecord>& records);
std::vector<SemanticRecord> records_from_json(const ordered_json& j);

void write_embeddings_jsonl(const std::string& path,
                            const std::vector<std::pair<std::string, EmbeddingVector>>& entries);

ordered_json model_json(const AffordanceModel& model);
AffordanceModel model_from_json(const ordered_json& j);

struct DatasetEntry {
    std::string key;
    EmbeddingVector vector;
    std::set<Affordance> labels;
};

// JSONL of {"key", "vector", "labels"?} lines.
std::vector<DatasetEntry> load_affordance_dataset(const std::string& path);
std::vector<TrainingExample> to_training_examples(
    const std::vector<DatasetEntry>& entries);

ordered_json metrics_json(const LabelMetrics& metrics);
std::string pr_scatter_csv(const LabelMetrics& metrics);

ordered_json match_counts_json(const MatchCounts& counts);

ordered_json scene_graph_json(const SceneGraph& graph);
ordered_json merged_graph_json(const MergedGraph& merged);
ordered_json scene_json(const SceneMatrix& matrix, int frame);
std::string terrain_csv(const SceneMatrix& matrix);

}  // namespace tilelab::jsonio
