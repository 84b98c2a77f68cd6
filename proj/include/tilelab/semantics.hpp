#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tilelab/embedding.hpp"

namespace tilelab {

enum class Affordance {
    Characters = 0,
    EnvironmentalObject,
    InteractiveObject,
    ItemsAndCollectibles,
    Terrain,
};

constexpr std::array<Affordance, 5> kAllAffordances = {
    Affordance::Characters, Affordance::EnvironmentalObject,
    Affordance::InteractiveObject, Affordance::ItemsAndCollectibles,
    Affordance::Terrain,
};

std::string to_string(Affordance a);
Affordance affordance_from_string(const std::string& name);

enum class Provenance { Author, Annotator, Model };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& name);

// Four-level label for one tile plus where the label came from.
struct SemanticRecord {
    std::string tile_ref;
    std::string detailed_name;
    std::string group_label;  // canonical (lowercase, trimmed, singular)
    std::string supercategory;
    std::set<Affordance> affordances;
    Provenance provenance = Provenance::Annotator;
};

// Lowercases, maps separators/punctuation to spaces, collapses whitespace,
// and singularizes the trailing token by rule table (ies -> y, +es, +s).
std::string normalize_label(const std::string& raw);

// Lowercase alphanumeric tokens, split on everything else.
std::vector<std::string> tokenize(const std::string& text);

class SemanticIndex {
  public:
    struct Hit {
        const SemanticRecord* record = nullptr;
        double score = 0.0;
    };

    void add(SemanticRecord record, EmbeddingVector vector);

    // Looks up each record's vector by tile_ref.
    static SemanticIndex build(const std::vector<SemanticRecord>& records,
                               const EmbeddingProvider& provider);

    std::size_t size() const { return records_.size(); }
    std::size_t dimension() const { return dimension_; }
    const std::vector<SemanticRecord>& records() const { return records_; }
    const std::vector<EmbeddingVector>& vectors() const { return vectors_; }

    // Top-k by cosine score among entries whose affordances intersect the
    // filter; exhaustive scan, ties broken by tile_ref.
    std::vector<Hit> query(const EmbeddingVector& query_vec, std::size_t k,
                           const std::optional<std::set<Affordance>>& filter =
                               std::nullopt) const;

  private:
    std::vector<SemanticRecord> records_;
    std::vector<EmbeddingVector> vectors_;
    std::size_t dimension_ = 0;
};

// term -> synonyms, keyed by normalized label text.
using SynonymLexicon = std::map<std::string, std::vector<std::string>>;

SynonymLexicon load_synonyms(const std::string& json_path);

enum class MatchLevel { Direct = 0, Synonym, Semantic };
enum class LabelField { Group = 0, Supercategory, Affordance };
enum class MatchState { No, Yes, Unavailable };

constexpr std::array<MatchLevel, 3> kAllMatchLevels = {
    MatchLevel::Direct, MatchLevel::Synonym, MatchLevel::Semantic};
constexpr std::array<LabelField, 3> kAllLabelFields = {
    LabelField::Group, LabelField::Supercategory, LabelField::Affordance};

std::string to_string(MatchLevel level);
std::string to_string(LabelField field);

struct CaptionMatch {
    std::array<std::array<MatchState, 3>, 3> state{};  // [level][field]

    MatchState at(MatchLevel level, LabelField field) const {
        return state[static_cast<std::size_t>(level)]
                    [static_cast<std::size_t>(field)];
    }
    MatchState& at(MatchLevel level, LabelField field) {
        return state[static_cast<std::size_t>(level)]
                    [static_cast<std::size_t>(field)];
    }
};

// Direct: whole-token equality between caption and label tokens.
// Synonym: the same test after expanding labels through the lexicon
// (the label itself is always in the expanded set).
// Semantic: cosine(caption, label) >= threshold; reported Unavailable when
// an embedding is missing.
CaptionMatch match_caption(const std::string& caption, const SemanticRecord& record,
                           const SynonymLexicon& synonyms,
                           const EmbeddingProvider* embedder,
                           double sim_threshold = 0.3);

struct MatchCounts {
    std::size_t total = 0;
    std::array<std::array<std::size_t, 3>, 3> matched{};      // [level][field]
    std::array<std::array<std::size_t, 3>, 3> unavailable{};  // [level][field]

    double percent(MatchLevel level, LabelField field) const {
        if (total == 0) return 0.0;
        return 100.0 *
               static_cast<double>(matched[static_cast<std::size_t>(level)]
                                          [static_cast<std::size_t>(field)]) /
               static_cast<double>(total);
    }
};

MatchCounts aggregate_matches(const std::vector<CaptionMatch>& results);

}  // namespace tilelab
