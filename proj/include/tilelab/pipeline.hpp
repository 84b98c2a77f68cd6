#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tilelab/terrain.hpp"

namespace tilelab {

inline constexpr const char* kToolVersion = "0.1.0";

struct PipelineConfig {
    int tile_size = 32;
    double ssim_threshold = 0.6;
    double transparency_threshold = 0.10;
    int strip_width = 4;
    double alpha_fraction_min = 0.5;
    double semantic_sim_threshold = 0.3;
    double affordance_threshold = 0.5;
    CaParams ca;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument on bad ranges
};

nlohmann::ordered_json config_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::ordered_json& j);
PipelineConfig load_config(const std::string& path);

// FNV-1a over the canonical serialized config, as a hex string.
std::string config_hash(const PipelineConfig& config);

struct PipelineResult {
    std::string out_dir;
    std::vector<std::string> artifacts;  // file names relative to out_dir
};

// split -> adjacency -> segment/classify -> connectivity, plus an optional
// index-build stage when records/embeddings are supplied. Every artifact is
// written under out_dir; on failure partial artifacts are removed and the
// error names the stage.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::string& tileset_path,
                            const std::string& out_dir,
                            const std::optional<std::string>& records_path = std::nullopt,
                            const std::optional<std::string>& embeddings_path = std::nullopt,
                            const std::optional<std::string>& overrides_path = std::nullopt);

struct Violation {
    std::string file;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Schema-validates the JSON artifacts in a pipeline output directory and
// cross-checks referential integrity (members inside the grid, resolvable
// tile_refs, uniform embedding dimensions, consistent model shapes).
ValidationReport validate_annotations(const std::string& dir);

nlohmann::ordered_json validation_json(const ValidationReport& report);

}  // namespace tilelab
