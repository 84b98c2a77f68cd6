#include "tilelab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tilelab/errors.hpp"
#include "tilelab/json_io.hpp"
#include "tilelab/png_io.hpp"

namespace fs = std::filesystem;

namespace tilelab {

using jsonio::ordered_json;

void PipelineConfig::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (tile_size <= 0) throw std::invalid_argument("tile_size must be positive");
    if (ssim_threshold < -1.0 || ssim_threshold > 1.0) {
        throw std::invalid_argument("ssim_threshold must be in [-1, 1]");
    }
    if (!in_unit(transparency_threshold)) {
        throw std::invalid_argument("transparency_threshold must be in [0, 1]");
    }
    if (strip_width < 1) throw std::invalid_argument("strip_width must be >= 1");
    if (!in_unit(alpha_fraction_min)) {
        throw std::invalid_argument("alpha_fraction_min must be in [0, 1]");
    }
    if (semantic_sim_threshold < -1.0 || semantic_sim_threshold > 1.0) {
        throw std::invalid_argument("semantic_sim_threshold must be in [-1, 1]");
    }
    if (!in_unit(affordance_threshold)) {
        throw std::invalid_argument("affordance_threshold must be in [0, 1]");
    }
    if (!in_unit(ca.fill_prob)) {
        throw std::invalid_argument("ca.fill_prob must be in [0, 1]");
    }
    if (ca.iterations < 0 || ca.birth < 0 || ca.survive < 0 ||
        ca.max_attempts < 1) {
        throw std::invalid_argument("bad cellular-automata parameters");
    }
}

ordered_json config_json(const PipelineConfig& config) {
    return ordered_json{
        {"tile_size", config.tile_size},
        {"ssim_threshold", config.ssim_threshold},
        {"transparency_threshold", config.transparency_threshold},
        {"strip_width", config.strip_width},
        {"alpha_fraction_min", config.alpha_fraction_min},
        {"semantic_sim_threshold", config.semantic_sim_threshold},
        {"affordance_threshold", config.affordance_threshold},
        {"ca",
         {{"fill_prob", config.ca.fill_prob},
          {"iterations", config.ca.iterations},
          {"birth", config.ca.birth},
          {"survive", config.ca.survive},
          {"min_walkable_fraction", config.ca.min_walkable_fraction},
          {"max_attempts", config.ca.max_attempts}}},
        {"seed", config.seed}};
}

PipelineConfig config_from_json(const ordered_json& j) {
    PipelineConfig config;
    config.tile_size = j.value("tile_size", config.tile_size);
    config.ssim_threshold = j.value("ssim_threshold", config.ssim_threshold);
    config.transparency_threshold =
        j.value("transparency_threshold", config.transparency_threshold);
    config.strip_width = j.value("strip_width", config.strip_width);
    config.alpha_fraction_min =
        j.value("alpha_fraction_min", config.alpha_fraction_min);
    config.semantic_sim_threshold =
        j.value("semantic_sim_threshold", config.semantic_sim_threshold);
    config.affordance_threshold =
        j.value("affordance_threshold", config.affordance_threshold);
    if (j.contains("ca")) {
        const auto& ca = j.at("ca");
        config.ca.fill_prob = ca.value("fill_prob", config.ca.fill_prob);
        config.ca.iterations = ca.value("iterations", config.ca.iterations);
        config.ca.birth = ca.value("birth", config.ca.birth);
        config.ca.survive = ca.value("survive", config.ca.survive);
        config.ca.min_walkable_fraction =
            ca.value("min_walkable_fraction", config.ca.min_walkable_fraction);
        config.ca.max_attempts = ca.value("max_attempts", config.ca.max_attempts);
    }
    config.seed = j.value("seed", config.seed);
    config.validate();
    return config;
}

PipelineConfig load_config(const std::string& path) {
    return config_from_json(jsonio::load_json_file(path));
}

std::string config_hash(const PipelineConfig& config) {
    std::string dump = config_json(config).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

namespace {

// Removes everything written so far when a stage fails.
struct ArtifactTracker {
    fs::path dir;
    std::vector<std::string> names;

    std::string path_for(const std::string& name) {
        names.push_back(name);
        return (dir / name).string();
    }

    void remove_all() {
        for (const std::string& name : names) {
            std::error_code ec;
            fs::remove(dir / name, ec);
        }
    }
};

[[noreturn]] void stage_fail(ArtifactTracker& tracker, const std::string& stage,
                             const std::exception& cause) {
    tracker.remove_all();
    throw DomainError("pipeline stage '" + stage + "' failed: " + cause.what());
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::string& tileset_path,
                            const std::string& out_dir,
                            const std::optional<std::string>& records_path,
                            const std::optional<std::string>& embeddings_path,
                            const std::optional<std::string>& overrides_path) {
    config.validate();
    fs::create_directories(out_dir);
    ArtifactTracker tracker{out_dir, {}};

    TileImage image;
    try {
        image = load_png(tileset_path);
    } catch (const std::exception& e) {
        tracker.remove_all();
        throw IoError("pipeline stage 'load' failed: " + std::string(e.what()));
    }

    Tileset tileset;
    try {
        tileset = split_tileset(image, config.tile_size);
        jsonio::write_json_file(tracker.path_for("tileset.json"),
                                jsonio::tileset_meta_json(tileset, tileset_path));
    } catch (const std::exception& e) {
        stage_fail(tracker, "split", e);
    }

    try {
        auto records = jsonio::score_all_adjacencies(
            tileset, config.ssim_threshold, config.strip_width);
        jsonio::write_json_file(tracker.path_for("adjacency.json"),
                                jsonio::adjacency_json(records));
    } catch (const std::exception& e) {
        stage_fail(tracker, "adjacency", e);
    }

    try {
        std::vector<SegmentRecord> segments =
            grow_segments(tileset, config.ssim_threshold,
                          config.transparency_threshold, config.strip_width);
        classify_all(segments, tileset);
        if (overrides_path) {
            jsonio::apply_class_overrides(
                segments, jsonio::load_json_file(*overrides_path));
        }
        jsonio::write_json_file(tracker.path_for("segments.json"),
                                jsonio::segments_json(segments));
        jsonio::write_json_file(tracker.path_for("report.json"),
                                jsonio::report_json(segmentation_report(segments)));
    } catch (const std::exception& e) {
        stage_fail(tracker, "segment", e);
    }

    try {
        ConnectivityParams params;
        params.ssim_threshold = config.ssim_threshold;
        params.alpha_fraction_min = config.alpha_fraction_min;
        params.strip_width = config.strip_width;
        std::vector<ConnectivitySet> sets =
            infer_connectivity(tileset, std::nullopt, params);
        jsonio::write_json_file(tracker.path_for("connectivity.json"),
                                jsonio::connectivity_json(sets));
    } catch (const std::exception& e) {
        stage_fail(tracker, "connectivity", e);
    }

    if (records_path && embeddings_path) {
        try {
            std::vector<SemanticRecord> records = jsonio::records_from_json(
                jsonio::load_json_file(*records_path));
            FileEmbeddingProvider provider(*embeddings_path);
            SemanticIndex index = SemanticIndex::build(records, provider);
            jsonio::write_json_file(tracker.path_for("records.json"),
                                    jsonio::records_json(index.records()));
            std::vector<std::pair<std::string, EmbeddingVector>> entries;
            for (std::size_t i = 0; i < index.size(); ++i) {
                entries.push_back(
                    {index.records()[i].tile_ref, index.vectors()[i]});
            }
            jsonio::write_embeddings_jsonl(tracker.path_for("embeddings.jsonl"),
                                           entries);
        } catch (const std::exception& e) {
            stage_fail(tracker, "index", e);
        }
    }

    try {
        ordered_json artifacts = ordered_json::array();
        for (const std::string& name : tracker.names) artifacts.push_back(name);
        auto now = std::chrono::system_clock::now().time_since_epoch();
        ordered_json manifest{
            {"tool_version", kToolVersion},
            {"config_hash", config_hash(config)},
            {"config", config_json(config)},
            {"artifacts", artifacts},
            {"generated_at",
             std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
        std::vector<std::string> artifact_names = tracker.names;
        jsonio::write_json_file(tracker.path_for("manifest.json"), manifest);
        return PipelineResult{out_dir, artifact_names};
    } catch (const std::exception& e) {
        stage_fail(tracker, "manifest", e);
    }
}

namespace {

struct Validator {
    fs::path dir;
    ValidationReport report;
    int grid_rows = -1;
    int grid_cols = -1;
    std::size_t segment_count = 0;

    void add(const std::string& file, const std::string& message) {
        report.violations.push_back({file, message});
    }

    bool exists(const std::string& name) const {
        return fs::exists(dir / name);
    }

    std::optional<ordered_json> load(const std::string& name) {
        try {
            return jsonio::load_json_file((dir / name).string());
        } catch (const std::exception& e) {
            add(name, e.what());
            return std::nullopt;
        }
    }
};

void check_tileset(Validator& v) {
    if (!v.exists("tileset.json")) return;
    auto j = v.load("tileset.json");
    if (!j) return;
    try {
        int rows = j->at("rows").get<int>();
        int cols = j->at("cols").get<int>();
        int tile_size = j->at("tile_size").get<int>();
        auto dropped = j->at("dropped_pixels").get<std::int64_t>();
        if (rows <= 0 || cols <= 0) v.add("tileset.json", "non-positive grid");
        if (tile_size <= 0) v.add("tileset.json", "non-positive tile_size");
        if (dropped < 0) v.add("tileset.json", "negative dropped_pixels");
        v.grid_rows = rows;
        v.grid_cols = cols;
    } catch (const std::exception& e) {
        v.add("tileset.json", e.what());
    }
}

void check_segments(Validator& v) {
    if (!v.exists("segments.json")) return;
    auto j = v.load("segments.json");
    if (!j) return;
    std::vector<SegmentRecord> segments;
    try {
        segments = jsonio::segments_from_json(*j);
    } catch (const std::exception& e) {
        v.add("segments.json", e.what());
        return;
    }
    v.segment_count = segments.size();
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const SegmentRecord& seg = segments[i];
        std::string where = "segment " + std::to_string(i);
        if (seg.members.empty()) {
            v.add("segments.json", where + ": no members");
            continue;
        }
        if (std::find(seg.members.begin(), seg.members.end(), seg.parent) ==
            seg.members.end()) {
            v.add("segments.json", where + ": parent not in members");
        }
        if (v.grid_rows > 0) {
            for (const GridCoord& m : seg.members) {
                if (m.row < 0 || m.row >= v.grid_rows || m.col < 0 ||
                    m.col >= v.grid_cols) {
                    v.add("segments.json", where + ": member outside grid");
                    break;
                }
            }
        }
        // 4-connectivity of the member set.
        std::set<GridCoord> member_set(seg.members.begin(), seg.members.end());
        std::set<GridCoord> seen;
        std::vector<GridCoord> stack{seg.members[0]};
        seen.insert(seg.members[0]);
        while (!stack.empty()) {
            GridCoord cur = stack.back();
            stack.pop_back();
            for (auto [dr, dc] :
                 {std::pair{0, 1}, {0, -1}, {1, 0}, {-1, 0}}) {
                GridCoord next{cur.row + dr, cur.col + dc};
                if (member_set.contains(next) && !seen.contains(next)) {
                    seen.insert(next);
                    stack.push_back(next);
                }
            }
        }
        if (seen.size() != member_set.size()) {
            v.add("segments.json", where + ": members not 4-connected");
        }
    }
}

void check_report(Validator& v) {
    if (!v.exists("report.json")) return;
    auto j = v.load("report.json");
    if (!j) return;
    try {
        std::size_t total = j->at("total_segments").get<std::size_t>();
        std::size_t sum = 0;
        std::size_t usable = 0;
        for (const auto& [name, count] : j->at("counts").items()) {
            sum += count.get<std::size_t>();
            if (name == "complete" || name == "complete_texture") {
                usable += count.get<std::size_t>();
            }
        }
        if (sum != total) {
            v.add("report.json", "counts do not sum to total_segments");
        }
        double rate = j->at("usable_rate").get<double>();
        double expected =
            total > 0 ? static_cast<double>(usable) / static_cast<double>(total)
                      : 0.0;
        if (std::fabs(rate - expected) > 1e-9) {
            v.add("report.json", "usable_rate does not match counts");
        }
    } catch (const std::exception& e) {
        v.add("report.json", e.what());
    }
}

void check_connectivity(Validator& v) {
    if (!v.exists("connectivity.json")) return;
    auto j = v.load("connectivity.json");
    if (!j) return;
    try {
        std::vector<ConnectivitySet> sets = jsonio::connectivity_from_json(*j);
        std::set<GridCoord> seen;
        for (const ConnectivitySet& set : sets) {
            if (!seen.insert(set.tile).second) {
                v.add("connectivity.json", "duplicate tile entry");
            }
            if (v.grid_rows > 0 &&
                (set.tile.row < 0 || set.tile.row >= v.grid_rows ||
                 set.tile.col < 0 || set.tile.col >= v.grid_cols)) {
                v.add("connectivity.json", "tile outside grid");
            }
        }
    } catch (const std::exception& e) {
        v.add("connectivity.json", e.what());
    }
}

void check_adjacency(Validator& v) {
    if (!v.exists("adjacency.json")) return;
    auto j = v.load("adjacency.json");
    if (!j) return;
    try {
        for (const auto& item : *j) {
            double score = item.at("score").get<double>();
            if (score < -1.0 - 1e-9 || score > 1.0 + 1e-9) {
                v.add("adjacency.json", "score outside [-1, 1]");
            }
        }
    } catch (const std::exception& e) {
        v.add("adjacency.json", e.what());
    }
}

void check_records(Validator& v) {
    if (!v.exists("records.json")) return;
    auto j = v.load("records.json");
    if (!j) return;
    std::vector<SemanticRecord> records;
    try {
        records = jsonio::records_from_json(*j);
    } catch (const std::exception& e) {
        v.add("records.json", e.what());
        return;
    }
    std::set<std::string> refs;
    for (const SemanticRecord& rec : records) {
        if (!refs.insert(rec.tile_ref).second) {
            v.add("records.json", "duplicate tile_ref: " + rec.tile_ref);
        }
        if (rec.affordances.empty()) {
            v.add("records.json", rec.tile_ref + ": no affordances");
        }
        try {
            if (normalize_label(rec.group_label) != rec.group_label) {
                v.add("records.json",
                      rec.tile_ref + ": group_label not canonical");
            }
        } catch (const std::exception&) {
            v.add("records.json", rec.tile_ref + ": empty group_label");
        }
        // tile_ref resolution: tile:r,c / seg:N / a path relative to dir.
        if (rec.tile_ref.rfind("tile:", 0) == 0) {
            int r = -1, c = -1;
            if (std::sscanf(rec.tile_ref.c_str(), "tile:%d,%d", &r, &c) != 2 ||
                (v.grid_rows > 0 &&
                 (r < 0 || r >= v.grid_rows || c < 0 || c >= v.grid_cols))) {
                v.add("records.json",
                      rec.tile_ref + ": unresolvable tile reference");
            }
        } else if (rec.tile_ref.rfind("seg:", 0) == 0) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(rec.tile_ref.substr(4));
            } catch (const std::exception&) {
                idx = static_cast<std::size_t>(-1);
            }
            if (idx >= v.segment_count) {
                v.add("records.json",
                      rec.tile_ref + ": segment index out of range");
            }
        } else if (!fs::exists(v.dir / rec.tile_ref)) {
            v.add("records.json", rec.tile_ref + ": missing tile file");
        }
    }
}

void check_embeddings(Validator& v) {
    if (!v.exists("embeddings.jsonl")) return;
    std::string content;
    try {
        content = jsonio::read_text((v.dir / "embeddings.jsonl").string());
    } catch (const std::exception& e) {
        v.add("embeddings.jsonl", e.what());
        return;
    }
    std::size_t dim = 0;
    std::size_t line_no = 0;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("key") || !j.contains("vector")) {
            v.add("embeddings.jsonl",
                  "line " + std::to_string(line_no) + ": bad entry");
            continue;
        }
        std::size_t d = j.at("vector").size();
        if (d == 0) {
            v.add("embeddings.jsonl",
                  "line " + std::to_string(line_no) + ": empty vector");
        } else if (dim == 0) {
            dim = d;
        } else if (d != dim) {
            v.add("embeddings.jsonl", "line " + std::to_string(line_no) +
                                          ": dimension " + std::to_string(d) +
                                          " != " + std::to_string(dim));
        }
    }
}

void check_model(Validator& v) {
    if (!v.exists("model.json")) return;
    auto j = v.load("model.json");
    if (!j) return;
    try {
        AffordanceModel model = jsonio::model_from_json(*j);
        for (const std::vector<double>* params :
             {&model.w1, &model.b1, &model.w2, &model.b2}) {
            for (double p : *params) {
                if (!std::isfinite(p)) {
                    v.add("model.json", "non-finite parameter");
                    return;
                }
            }
        }
    } catch (const std::exception& e) {
        v.add("model.json", e.what());
    }
}

void check_manifest(Validator& v) {
    if (!v.exists("manifest.json")) return;
    auto j = v.load("manifest.json");
    if (!j) return;
    try {
        for (const auto& name : j->at("artifacts")) {
            if (!v.exists(name.get<std::string>())) {
                v.add("manifest.json",
                      "listed artifact missing: " + name.get<std::string>());
            }
        }
    } catch (const std::exception& e) {
        v.add("manifest.json", e.what());
    }
}

}  // namespace

ValidationReport validate_annotations(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("not a directory: " + dir);
    }
    Validator v{dir, {}, -1, -1, 0};
    check_tileset(v);
    check_segments(v);
    check_report(v);
    check_connectivity(v);
    check_adjacency(v);
    check_records(v);
    check_embeddings(v);
    check_model(v);
    check_manifest(v);
    return v.report;
}

ordered_json validation_json(const ValidationReport& report) {
    ordered_json violations = ordered_json::array();
    for (const Violation& violation : report.violations) {
        violations.push_back(ordered_json{{"file", violation.file},
                                          {"message", violation.message}});
    }
    return ordered_json{{"ok", report.ok()}, {"violations", violations}};
}

}  // namespace tilelab
