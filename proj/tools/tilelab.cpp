// tilelab: tileset analysis and narrative scene synthesis CLI.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tilelab/connectivity.hpp"
#include "tilelab/errors.hpp"
#include "tilelab/json_io.hpp"
#include "tilelab/pipeline.hpp"
#include "tilelab/png_io.hpp"
#include "tilelab/scenegen.hpp"
#include "tilelab/semantics.hpp"

namespace fs = std::filesystem;
using namespace tilelab;
using jsonio::ordered_json;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;

    PipelineConfig config() const {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.seed = *seed;
        return cfg;
    }
};

Rgba parse_color(const std::string& hex) {
    std::string h = hex;
    if (!h.empty() && h[0] == '#') h = h.substr(1);
    if (h.size() != 6 && h.size() != 8) {
        throw std::invalid_argument("color must be RRGGBB or RRGGBBAA hex");
    }
    auto byte = [&](std::size_t i) {
        return static_cast<std::uint8_t>(
            std::stoul(h.substr(i, 2), nullptr, 16));
    };
    Rgba c{byte(0), byte(2), byte(4), 255};
    if (h.size() == 8) c.a = byte(6);
    return c;
}

// Deterministic placeholder tile for ids without an asset entry.
TileImage placeholder_tile(const std::string& id, int tile_size) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : id) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    Rgba color{static_cast<std::uint8_t>(64 + (h & 0x7F)),
               static_cast<std::uint8_t>(64 + ((h >> 8) & 0x7F)),
               static_cast<std::uint8_t>(64 + ((h >> 16) & 0x7F)), 255};
    TileImage tile(tile_size, tile_size, color);
    // Darkened border so placeholders read as distinct tiles.
    Rgba edge{static_cast<std::uint8_t>(color.r / 2),
              static_cast<std::uint8_t>(color.g / 2),
              static_cast<std::uint8_t>(color.b / 2), 255};
    for (int i = 0; i < tile_size; ++i) {
        tile.at(0, i) = edge;
        tile.at(tile_size - 1, i) = edge;
        tile.at(i, 0) = edge;
        tile.at(i, tile_size - 1) = edge;
    }
    return tile;
}

class ChainProvider : public EmbeddingProvider {
  public:
    void add(const EmbeddingProvider* provider) { chain_.push_back(provider); }

    std::optional<EmbeddingVector> embed(const std::string& text) const override {
        for (const EmbeddingProvider* provider : chain_) {
            std::optional<EmbeddingVector> vec = provider->embed(text);
            if (vec) return vec;
        }
        return std::nullopt;
    }

  private:
    std::vector<const EmbeddingProvider*> chain_;
};

SemanticIndex load_index(const std::string& dir, FileEmbeddingProvider& provider) {
    provider = FileEmbeddingProvider((fs::path(dir) / "embeddings.jsonl").string());
    std::vector<SemanticRecord> records = jsonio::records_from_json(
        jsonio::load_json_file((fs::path(dir) / "records.json").string()));
    return SemanticIndex::build(records, provider);
}

int cmd_split(const GlobalOptions& global, const std::string& image_path,
              const std::string& out_dir, int tile_size_flag, int pad,
              const std::string& pad_color, bool write_tiles) {
    PipelineConfig cfg = global.config();
    int tile_size = tile_size_flag > 0 ? tile_size_flag : cfg.tile_size;

    TileImage image = load_png(image_path);
    Tileset tileset = split_tileset(image, tile_size);
    fs::create_directories(out_dir);
    jsonio::write_json_file((fs::path(out_dir) / "tileset.json").string(),
                            jsonio::tileset_meta_json(tileset, image_path));
    if (write_tiles) {
        fs::path tiles_dir = fs::path(out_dir) / "tiles";
        fs::create_directories(tiles_dir);
        Rgba color = pad_color.empty() ? Rgba{0, 0, 0, 255}
                                       : parse_color(pad_color);
        for (int r = 0; r < tileset.rows(); ++r) {
            for (int c = 0; c < tileset.cols(); ++c) {
                TileImage tile = tileset.tile(r, c);
                if (pad > 0) tile = pad_image(tile, pad, color);
                char name[64];
                std::snprintf(name, sizeof(name), "r%03d_c%03d.png", r, c);
                save_png(tile, (tiles_dir / name).string());
            }
        }
    }
    std::cout << jsonio::tileset_meta_json(tileset, image_path).dump(2) << "\n";
    return 0;
}

int cmd_adjacency(const GlobalOptions& global, const std::string& image_path,
                  const std::string& out_path, double threshold_flag,
                  int strip_width_flag, int tile_size_flag) {
    PipelineConfig cfg = global.config();
    if (threshold_flag >= -1.0) cfg.ssim_threshold = threshold_flag;
    if (strip_width_flag > 0) cfg.strip_width = strip_width_flag;
    if (tile_size_flag > 0) cfg.tile_size = tile_size_flag;

    Tileset tileset = split_tileset(load_png(image_path), cfg.tile_size);
    ordered_json j = jsonio::adjacency_json(jsonio::score_all_adjacencies(
        tileset, cfg.ssim_threshold, cfg.strip_width));
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        jsonio::write_json_file(out_path, j);
    }
    return 0;
}

int cmd_segment(const GlobalOptions& global, const std::string& image_path,
                const std::string& out_dir, const std::string& overrides_path,
                int tile_size_flag) {
    PipelineConfig cfg = global.config();
    if (tile_size_flag > 0) cfg.tile_size = tile_size_flag;

    Tileset tileset = split_tileset(load_png(image_path), cfg.tile_size);
    std::vector<SegmentRecord> segments =
        grow_segments(tileset, cfg.ssim_threshold, cfg.transparency_threshold,
                      cfg.strip_width);
    classify_all(segments, tileset);
    if (!overrides_path.empty()) {
        jsonio::apply_class_overrides(segments,
                                      jsonio::load_json_file(overrides_path));
    }
    fs::create_directories(out_dir);
    jsonio::write_json_file((fs::path(out_dir) / "segments.json").string(),
                            jsonio::segments_json(segments));
    ordered_json report = jsonio::report_json(segmentation_report(segments));
    jsonio::write_json_file((fs::path(out_dir) / "report.json").string(), report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_connectivity(const GlobalOptions& global, const std::string& image_path,
                     const std::string& out_path, int tile_size_flag) {
    PipelineConfig cfg = global.config();
    if (tile_size_flag > 0) cfg.tile_size = tile_size_flag;

    Tileset tileset = split_tileset(load_png(image_path), cfg.tile_size);
    ConnectivityParams params;
    params.ssim_threshold = cfg.ssim_threshold;
    params.alpha_fraction_min = cfg.alpha_fraction_min;
    params.strip_width = cfg.strip_width;
    ordered_json j =
        jsonio::connectivity_json(infer_connectivity(tileset, std::nullopt, params));
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        jsonio::write_json_file(out_path, j);
    }
    return 0;
}

int cmd_eval_connectivity(const std::string& pred_path,
                          const std::string& truth_path) {
    std::vector<ConnectivitySet> pred =
        jsonio::connectivity_from_json(jsonio::load_json_file(pred_path));
    std::vector<ConnectivitySet> truth =
        jsonio::connectivity_from_json(jsonio::load_json_file(truth_path));
    std::cout << jsonio::connectivity_eval_json(
                     evaluate_connectivity(pred, truth))
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_index_build(const std::string& records_path,
                    const std::string& embeddings_path,
                    const std::string& out_dir) {
    std::vector<SemanticRecord> records =
        jsonio::records_from_json(jsonio::load_json_file(records_path));
    FileEmbeddingProvider provider(embeddings_path);
    SemanticIndex index = SemanticIndex::build(records, provider);

    fs::create_directories(out_dir);
    jsonio::write_json_file((fs::path(out_dir) / "records.json").string(),
                            jsonio::records_json(index.records()));
    std::vector<std::pair<std::string, EmbeddingVector>> entries;
    for (std::size_t i = 0; i < index.size(); ++i) {
        entries.push_back({index.records()[i].tile_ref, index.vectors()[i]});
    }
    jsonio::write_embeddings_jsonl(
        (fs::path(out_dir) / "embeddings.jsonl").string(), entries);
    std::cout << ordered_json{{"entries", index.size()},
                              {"dimension", index.dimension()}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_index_query(const std::string& index_dir, const std::string& text,
                    std::size_t k, const std::vector<std::string>& affordances,
                    const std::string& query_embeddings_path) {
    FileEmbeddingProvider index_provider;
    SemanticIndex index = load_index(index_dir, index_provider);

    FileEmbeddingProvider query_provider;
    ChainProvider chain;
    if (!query_embeddings_path.empty()) {
        query_provider = FileEmbeddingProvider(query_embeddings_path);
        chain.add(&query_provider);
    }
    chain.add(&index_provider);

    std::optional<EmbeddingVector> vec = chain.embed(text);
    if (!vec) {
        throw IoError("no embedding available for query text: \"" + text +
                      "\" (provide --embeddings)");
    }
    std::optional<std::set<Affordance>> filter;
    if (!affordances.empty()) {
        filter.emplace();
        for (const std::string& name : affordances) {
            filter->insert(affordance_from_string(name));
        }
    }
    ordered_json hits = ordered_json::array();
    for (const SemanticIndex::Hit& hit : index.query(*vec, k, filter)) {
        hits.push_back(ordered_json{{"tile_ref", hit.record->tile_ref},
                                    {"group_label", hit.record->group_label},
                                    {"score", hit.score}});
    }
    std::cout << hits.dump(2) << "\n";
    return 0;
}

int cmd_match_captions(const GlobalOptions& global,
                       const std::string& captions_path,
                       const std::string& records_path,
                       const std::string& synonyms_path,
                       const std::string& embeddings_path,
                       double threshold_flag, const std::string& out_path) {
    PipelineConfig cfg = global.config();
    double threshold =
        threshold_flag >= -1.0 ? threshold_flag : cfg.semantic_sim_threshold;

    std::vector<SemanticRecord> records =
        jsonio::records_from_json(jsonio::load_json_file(records_path));
    std::map<std::string, const SemanticRecord*> by_ref;
    for (const SemanticRecord& rec : records) by_ref[rec.tile_ref] = &rec;

    SynonymLexicon synonyms;
    if (!synonyms_path.empty()) synonyms = load_synonyms(synonyms_path);

    FileEmbeddingProvider provider;
    const EmbeddingProvider* embedder = nullptr;
    if (!embeddings_path.empty()) {
        provider = FileEmbeddingProvider(embeddings_path);
        embedder = &provider;
    }

    std::vector<CaptionMatch> results;
    std::string content = jsonio::read_text(captions_path);
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ParseError(captions_path + ":" + std::to_string(line_no) +
                             ": invalid JSON line");
        }
        std::string ref = j.at("tile_ref").get<std::string>();
        auto it = by_ref.find(ref);
        if (it == by_ref.end()) {
            throw ParseError(captions_path + ":" + std::to_string(line_no) +
                             ": tile_ref not in records: " + ref);
        }
        results.push_back(match_caption(j.at("caption").get<std::string>(),
                                        *it->second, synonyms, embedder,
                                        threshold));
    }

    ordered_json counts = jsonio::match_counts_json(aggregate_matches(results));
    if (!out_path.empty()) jsonio::write_json_file(out_path, counts);
    std::cout << counts.dump(2) << "\n";
    return 0;
}

int cmd_affordance_train(const GlobalOptions& global, const std::string& data_path,
                         const std::string& out_path, double lr,
                         std::size_t epochs, std::size_t batch,
                         std::size_t hidden, double val_fraction,
                         double momentum, const std::string& history_path) {
    PipelineConfig cfg = global.config();

    TrainConfig train_cfg;
    train_cfg.learning_rate = lr;
    train_cfg.epochs = epochs;
    train_cfg.batch_size = batch;
    train_cfg.hidden_size = hidden;
    train_cfg.val_fraction = val_fraction;
    train_cfg.momentum = momentum;
    train_cfg.seed = cfg.seed;

    std::vector<TrainingExample> dataset =
        jsonio::to_training_examples(jsonio::load_affordance_dataset(data_path));
    TrainResult result = train(dataset, train_cfg);
    jsonio::write_json_file(out_path, jsonio::model_json(result.model));

    if (!history_path.empty()) {
        jsonio::write_json_file(history_path,
                                ordered_json{{"train_loss", result.train_loss},
                                             {"val_loss", result.val_loss}});
    }
    ordered_json summary{
        {"examples", dataset.size()},
        {"epochs", epochs},
        {"final_train_loss",
         result.train_loss.empty() ? ordered_json(nullptr)
                                   : ordered_json(result.train_loss.back())},
        {"final_val_loss", result.val_loss.empty()
                               ? ordered_json(nullptr)
                               : ordered_json(result.val_loss.back())}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_affordance_predict(const GlobalOptions& global,
                           const std::string& model_path,
                           const std::string& data_path, double threshold_flag) {
    PipelineConfig cfg = global.config();
    double threshold =
        threshold_flag >= 0.0 ? threshold_flag : cfg.affordance_threshold;

    AffordanceModel model =
        jsonio::model_from_json(jsonio::load_json_file(model_path));
    for (const jsonio::DatasetEntry& entry :
         jsonio::load_affordance_dataset(data_path)) {
        ordered_json labels = ordered_json::array();
        for (Affordance a : predict(model, entry.vector, threshold)) {
            labels.push_back(to_string(a));
        }
        std::cout << ordered_json{{"key", entry.key}, {"labels", labels}}.dump()
                  << "\n";
    }
    return 0;
}

int cmd_affordance_eval(const GlobalOptions& global, const std::string& model_path,
                        const std::string& data_path, double threshold_flag,
                        const std::string& scatter_path) {
    PipelineConfig cfg = global.config();
    double threshold =
        threshold_flag >= 0.0 ? threshold_flag : cfg.affordance_threshold;

    AffordanceModel model =
        jsonio::model_from_json(jsonio::load_json_file(model_path));
    std::vector<TrainingExample> test_set =
        jsonio::to_training_examples(jsonio::load_affordance_dataset(data_path));
    LabelMetrics metrics = evaluate(model, test_set, threshold);
    if (!scatter_path.empty()) {
        jsonio::write_text(scatter_path, jsonio::pr_scatter_csv(metrics));
    }
    std::cout << jsonio::metrics_json(metrics).dump(2) << "\n";
    return 0;
}

int cmd_terrain(const GlobalOptions& global, int rows, int cols,
                const std::string& out_path, double fill_prob, int iterations,
                int birth, int survive) {
    PipelineConfig cfg = global.config();
    CaParams params = cfg.ca;
    if (fill_prob >= 0.0) params.fill_prob = fill_prob;
    if (iterations >= 0) params.iterations = iterations;
    if (birth >= 0) params.birth = birth;
    if (survive >= 0) params.survive = survive;

    TerrainMap map = generate_terrain(rows, cols, cfg.seed, params);
    std::string csv;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c > 0) csv.push_back(',');
            csv += map.walkable(r, c) ? '1' : '0';
        }
        csv.push_back('\n');
    }
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        jsonio::write_text(out_path, csv);
    }
    std::cerr << ordered_json{{"rows", rows},
                              {"cols", cols},
                              {"seed", map.seed},
                              {"walkable_fraction",
                               static_cast<double>(map.walkable_count()) /
                                   (static_cast<double>(rows) * cols)}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_scene(const GlobalOptions& global, const std::string& predicates_path,
              const std::string& index_dir, const std::string& out_dir,
              int rows, int cols, const std::string& relations_path,
              const std::string& hints_path, const std::string& embeddings_path,
              const std::string& assets_path) {
    PipelineConfig cfg = global.config();

    RelationLexicon lexicon = default_relation_aliases();
    if (!relations_path.empty()) {
        lexicon = load_relation_aliases(relations_path, std::move(lexicon));
    }
    AffordanceHints hints;
    if (!hints_path.empty()) hints = load_affordance_hints(hints_path);

    FileEmbeddingProvider index_provider;
    SemanticIndex index = load_index(index_dir, index_provider);

    FileEmbeddingProvider query_provider;
    ChainProvider chain;
    if (!embeddings_path.empty()) {
        query_provider = FileEmbeddingProvider(embeddings_path);
        chain.add(&query_provider);
    }
    chain.add(&index_provider);

    std::vector<Predicate> predicates =
        load_predicates_file(predicates_path, lexicon);
    std::map<int, std::vector<Predicate>> by_frame;
    for (const Predicate& p : predicates) by_frame[p.frame].push_back(p);
    if (by_frame.empty()) throw ParseError("no predicates found");

    // Assets: explicit map or deterministic placeholders.
    std::map<std::string, TileImage> assets;
    bool explicit_assets = !assets_path.empty();
    if (explicit_assets) {
        ordered_json j = jsonio::load_json_file(assets_path);
        fs::path base = fs::path(assets_path).parent_path();
        for (const auto& [id, rel] : j.items()) {
            assets[id] = load_png((base / rel.get<std::string>()).string());
        }
    }

    fs::create_directories(out_dir);
    std::vector<SceneGraph> graphs;
    for (const auto& [frame, preds] : by_frame) {
        graphs.push_back(build_scene_graph(preds, index, chain, lexicon, hints));
    }
    MergedGraph merged = merge_graphs(graphs);
    jsonio::write_json_file((fs::path(out_dir) / "graph.json").string(),
                            jsonio::merged_graph_json(merged));

    for (const SceneGraph& graph : graphs) {
        TerrainMap terrain = generate_terrain(
            rows, cols, cfg.seed + static_cast<std::uint64_t>(graph.frame),
            cfg.ca);

        PlacementOptions options;
        options.tile_size = cfg.tile_size;
        if (explicit_assets) {
            for (const auto& [id, img] : assets) {
                options.footprints[id] = {
                    (img.height() + cfg.tile_size - 1) / cfg.tile_size,
                    (img.width() + cfg.tile_size - 1) / cfg.tile_size};
            }
        }
        SceneMatrix matrix = place_objects(graph, terrain, options);
        for (const std::string& warning : matrix.warnings) {
            std::cerr << "frame " << graph.frame << ": " << warning << "\n";
        }

        fs::path frame_dir =
            fs::path(out_dir) / ("frame_" + std::to_string(graph.frame));
        fs::create_directories(frame_dir);
        jsonio::write_json_file((frame_dir / "scene.json").string(),
                                jsonio::scene_json(matrix, graph.frame));
        jsonio::write_text((frame_dir / "terrain.csv").string(),
                           jsonio::terrain_csv(matrix));

        if (!explicit_assets) {
            assets["terrain:walkable"] =
                TileImage(cfg.tile_size, cfg.tile_size, Rgba{96, 160, 72, 255});
            assets["terrain:blocked"] =
                TileImage(cfg.tile_size, cfg.tile_size, Rgba{52, 56, 64, 255});
            for (const PlacedObject& obj : matrix.objects) {
                if (!assets.contains(obj.tile_id)) {
                    assets[obj.tile_id] =
                        placeholder_tile(obj.tile_id, cfg.tile_size);
                }
            }
        }
        save_png(render_scene(matrix, assets),
                 (frame_dir / "scene.png").string());
    }
    std::cout << ordered_json{{"frames", graphs.size()},
                              {"out_dir", out_dir}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_pipeline(const GlobalOptions& global, const std::string& image_path,
                 const std::string& out_dir, const std::string& records_path,
                 const std::string& embeddings_path,
                 const std::string& overrides_path) {
    PipelineConfig cfg = global.config();
    auto opt = [](const std::string& s) {
        return s.empty() ? std::nullopt : std::optional<std::string>(s);
    };
    PipelineResult result =
        run_pipeline(cfg, image_path, out_dir, opt(records_path),
                     opt(embeddings_path), opt(overrides_path));
    ordered_json artifacts = ordered_json::array();
    for (const std::string& name : result.artifacts) artifacts.push_back(name);
    std::cout << ordered_json{{"out_dir", result.out_dir},
                              {"artifacts", artifacts}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_validate(const std::string& dir) {
    ValidationReport report = validate_annotations(dir);
    std::cout << validation_json(report).dump(2) << "\n";
    return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tilelab: pixel-art tileset analysis and scene synthesis"};
    app.require_subcommand(1);

    GlobalOptions global;
    std::uint64_t seed_flag = 0;
    app.add_option("--config", global.config_path, "pipeline config JSON file");
    auto* seed_opt =
        app.add_option("--seed", seed_flag, "seed for all randomized steps");

    std::string image_path, out_path, out_dir = "out";
    std::string overrides_path, records_path, embeddings_path;
    std::string pred_path, truth_path;
    std::string captions_path, synonyms_path;
    std::string index_dir, query_text;
    std::string model_path, data_path, scatter_path, history_path;
    std::string predicates_path, relations_path, hints_path, assets_path;
    std::string pad_color;
    std::vector<std::string> affordance_filter;
    int tile_size_flag = 0, strip_width_flag = 0, pad = 0;
    int rows = 24, cols = 24;
    int ca_iterations = -1, ca_birth = -1, ca_survive = -1;
    double threshold_flag = -2.0, fill_prob = -1.0;
    double lr = 0.05, val_fraction = 0.15, momentum = 0.0;
    std::size_t epochs = 200, batch = 16, hidden = 128, top_k = 5;
    bool write_tiles = false;

    CLI::App* split = app.add_subcommand("split", "split a tileset image");
    split->add_option("--image", image_path, "input PNG")->required();
    split->add_option("--out", out_dir, "output directory");
    split->add_option("--tile-size", tile_size_flag, "tile size in pixels");
    split->add_flag("--tiles", write_tiles, "also write per-tile PNGs");
    split->add_option("--pad", pad, "padding in pixels around written tiles");
    split->add_option("--pad-color", pad_color, "padding color, RRGGBB[AA] hex");

    CLI::App* adjacency = app.add_subcommand("adjacency", "score neighbor seams");
    adjacency->add_option("--image", image_path, "input PNG")->required();
    adjacency->add_option("--out", out_path, "output JSON (stdout if omitted)");
    adjacency->add_option("--threshold", threshold_flag, "SSIM threshold");
    adjacency->add_option("--strip-width", strip_width_flag, "boundary width");
    adjacency->add_option("--tile-size", tile_size_flag, "tile size in pixels");

    CLI::App* segment = app.add_subcommand("segment", "grow and classify segments");
    segment->add_option("--image", image_path, "input PNG")->required();
    segment->add_option("--out", out_dir, "output directory");
    segment->add_option("--overrides", overrides_path, "manual class overrides");
    segment->add_option("--tile-size", tile_size_flag, "tile size in pixels");

    CLI::App* connectivity =
        app.add_subcommand("connectivity", "infer directional connectivity");
    connectivity->add_option("--image", image_path, "input PNG")->required();
    connectivity->add_option("--out", out_path, "output JSON (stdout if omitted)");
    connectivity->add_option("--tile-size", tile_size_flag, "tile size in pixels");

    CLI::App* eval_conn = app.add_subcommand(
        "eval-connectivity", "compare predicted connectivity against truth");
    eval_conn->add_option("--pred", pred_path, "predicted JSON")->required();
    eval_conn->add_option("--truth", truth_path, "ground-truth JSON")->required();

    CLI::App* index = app.add_subcommand("index", "semantic index");
    index->require_subcommand(1);
    CLI::App* index_build = index->add_subcommand("build", "build an index");
    index_build->add_option("--records", records_path, "records JSON")->required();
    index_build->add_option("--embeddings", embeddings_path, "embeddings JSONL")
        ->required();
    index_build->add_option("--out", out_dir, "output directory");
    CLI::App* index_query = index->add_subcommand("query", "query an index");
    index_query->add_option("--index", index_dir, "index directory")->required();
    index_query->add_option("--text", query_text, "query text")->required();
    index_query->add_option("--k", top_k, "results to return");
    index_query->add_option("--affordance", affordance_filter,
                            "affordance filter (repeatable)");
    index_query->add_option("--embeddings", embeddings_path,
                            "extra embeddings JSONL for query texts");

    CLI::App* match = app.add_subcommand("match-captions",
                                         "caption-label match statistics");
    match->add_option("--captions", captions_path, "captions JSONL")->required();
    match->add_option("--records", records_path, "records JSON")->required();
    match->add_option("--synonyms", synonyms_path, "synonym lexicon JSON");
    match->add_option("--embeddings", embeddings_path, "embeddings JSONL");
    match->add_option("--threshold", threshold_flag, "semantic threshold");
    match->add_option("--out", out_path, "also write counts JSON here");

    CLI::App* affordance = app.add_subcommand("affordance", "affordance classifier");
    affordance->require_subcommand(1);
    CLI::App* aff_train = affordance->add_subcommand("train", "train a model");
    aff_train->add_option("--data", data_path, "dataset JSONL")->required();
    aff_train->add_option("--out", out_path, "model JSON")->required();
    aff_train->add_option("--lr", lr, "learning rate");
    aff_train->add_option("--epochs", epochs, "training epochs");
    aff_train->add_option("--batch", batch, "mini-batch size");
    aff_train->add_option("--hidden", hidden, "hidden layer width");
    aff_train->add_option("--val-fraction", val_fraction, "validation fraction");
    aff_train->add_option("--momentum", momentum, "momentum coefficient");
    aff_train->add_option("--history", history_path, "write loss history JSON");
    CLI::App* aff_predict = affordance->add_subcommand("predict", "predict labels");
    aff_predict->add_option("--model", model_path, "model JSON")->required();
    aff_predict->add_option("--data", data_path, "dataset JSONL")->required();
    aff_predict->add_option("--threshold", threshold_flag, "decision threshold");
    CLI::App* aff_eval = affordance->add_subcommand("eval", "evaluate a model");
    aff_eval->add_option("--model", model_path, "model JSON")->required();
    aff_eval->add_option("--data", data_path, "dataset JSONL")->required();
    aff_eval->add_option("--threshold", threshold_flag, "decision threshold");
    aff_eval->add_option("--scatter", scatter_path, "precision/recall CSV");

    CLI::App* terrain = app.add_subcommand("terrain", "generate CA terrain");
    terrain->add_option("--rows", rows, "grid rows");
    terrain->add_option("--cols", cols, "grid cols");
    terrain->add_option("--out", out_path, "output CSV (stdout if omitted)");
    terrain->add_option("--fill-prob", fill_prob, "initial blocked probability");
    terrain->add_option("--iterations", ca_iterations, "CA iterations");
    terrain->add_option("--birth", ca_birth, "birth threshold");
    terrain->add_option("--survive", ca_survive, "survive threshold");

    CLI::App* scene = app.add_subcommand("scene", "narrative predicates to scenes");
    scene->add_option("--predicates", predicates_path, "predicates file")
        ->required();
    scene->add_option("--index", index_dir, "semantic index directory")
        ->required();
    scene->add_option("--out", out_dir, "output directory");
    scene->add_option("--rows", rows, "terrain rows");
    scene->add_option("--cols", cols, "terrain cols");
    scene->add_option("--relations", relations_path, "relation alias JSON");
    scene->add_option("--hints", hints_path, "affordance hint JSON");
    scene->add_option("--embeddings", embeddings_path,
                      "embeddings JSONL for entity names");
    scene->add_option("--assets", assets_path, "tile asset map JSON");

    CLI::App* pipeline = app.add_subcommand("pipeline", "run the full pipeline");
    pipeline->add_option("--image", image_path, "input PNG")->required();
    pipeline->add_option("--out", out_dir, "artifact directory");
    pipeline->add_option("--records", records_path, "records JSON for the index");
    pipeline->add_option("--embeddings", embeddings_path,
                         "embeddings JSONL for the index");
    pipeline->add_option("--overrides", overrides_path, "segment class overrides");

    CLI::App* validate = app.add_subcommand("validate", "validate artifacts");
    validate->add_option("--dir", out_dir, "artifact directory")->required();

    try {
        app.parse(argc, argv);
        if (seed_opt->count() > 0) global.seed = seed_flag;

        if (app.got_subcommand(split)) {
            return cmd_split(global, image_path, out_dir, tile_size_flag, pad,
                             pad_color, write_tiles);
        }
        if (app.got_subcommand(adjacency)) {
            return cmd_adjacency(global, image_path, out_path, threshold_flag,
                                 strip_width_flag, tile_size_flag);
        }
        if (app.got_subcommand(segment)) {
            return cmd_segment(global, image_path, out_dir, overrides_path,
                               tile_size_flag);
        }
        if (app.got_subcommand(connectivity)) {
            return cmd_connectivity(global, image_path, out_path, tile_size_flag);
        }
        if (app.got_subcommand(eval_conn)) {
            return cmd_eval_connectivity(pred_path, truth_path);
        }
        if (app.got_subcommand(index)) {
            if (index->got_subcommand(index_build)) {
                return cmd_index_build(records_path, embeddings_path, out_dir);
            }
            return cmd_index_query(index_dir, query_text, top_k,
                                   affordance_filter, embeddings_path);
        }
        if (app.got_subcommand(match)) {
            return cmd_match_captions(global, captions_path, records_path,
                                      synonyms_path, embeddings_path,
                                      threshold_flag, out_path);
        }
        if (app.got_subcommand(affordance)) {
            if (affordance->got_subcommand(aff_train)) {
                return cmd_affordance_train(global, data_path, out_path, lr,
                                            epochs, batch, hidden, val_fraction,
                                            momentum, history_path);
            }
            if (affordance->got_subcommand(aff_predict)) {
                return cmd_affordance_predict(global, model_path, data_path,
                                              threshold_flag);
            }
            return cmd_affordance_eval(global, model_path, data_path,
                                       threshold_flag, scatter_path);
        }
        if (app.got_subcommand(terrain)) {
            return cmd_terrain(global, rows, cols, out_path, fill_prob,
                               ca_iterations, ca_birth, ca_survive);
        }
        if (app.got_subcommand(scene)) {
            return cmd_scene(global, predicates_path, index_dir, out_dir, rows,
                             cols, relations_path, hints_path, embeddings_path,
                             assets_path);
        }
        if (app.got_subcommand(pipeline)) {
            return cmd_pipeline(global, image_path, out_dir, records_path,
                                embeddings_path, overrides_path);
        }
        if (app.got_subcommand(validate)) {
            return cmd_validate(out_dir);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
