#include "tilelab/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tilelab/errors.hpp"

namespace tilelab {

std::string to_string(Affordance a) {
    switch (a) {
        case Affordance::Characters: return "Characters";
        case Affordance::EnvironmentalObject: return "Environmental Object";
        case Affordance::InteractiveObject: return "Interactive Object";
        case Affordance::ItemsAndCollectibles: return "Items and Collectibles";
        case Affordance::Terrain: return "Terrain";
    }
    return "?";
}

Affordance affordance_from_string(const std::string& name) {
    for (Affordance a : kAllAffordances) {
        if (to_string(a) == name) return a;
    }
    throw std::invalid_argument("unknown affordance: " + name);
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Author: return "author";
        case Provenance::Annotator: return "annotator";
        case Provenance::Model: return "model";
    }
    return "?";
}

Provenance provenance_from_string(const std::string& name) {
    if (name == "author") return Provenance::Author;
    if (name == "annotator") return Provenance::Annotator;
    if (name == "model") return Provenance::Model;
    throw std::invalid_argument("unknown provenance: " + name);
}

namespace {

std::string singularize_token(std::string t) {
    auto ends_with = [&](const char* suffix) {
        std::string_view s(suffix);
        return t.size() >= s.size() &&
               t.compare(t.size() - s.size(), s.size(), s) == 0;
    };
    if (t.size() > 3 && ends_with("ies")) {
        t.replace(t.size() - 3, 3, "y");
        return t;
    }
    if (ends_with("sses") || ends_with("xes") || ends_with("zzes") ||
        ends_with("ches") || ends_with("shes")) {
        t.erase(t.size() - 2);
        return t;
    }
    if (t.size() > 1 && t.back() == 's' && t[t.size() - 2] != 's') {
        t.pop_back();
    }
    return t;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(ch))));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::string normalize_label(const std::string& raw) {
    std::vector<std::string> tokens = tokenize(raw);
    if (tokens.empty()) {
        throw std::invalid_argument("label is empty after normalization: \"" +
                                    raw + "\"");
    }
    tokens.back() = singularize_token(tokens.back());
    std::string out;
    for (const std::string& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    if (out.empty()) {
        throw std::invalid_argument("label is empty after normalization");
    }
    return out;
}

void SemanticIndex::add(SemanticRecord record, EmbeddingVector vector) {
    if (vector.norm == 0.0) {
        throw std::invalid_argument("zero embedding for " + record.tile_ref);
    }
    if (!records_.empty() && vector.dimension() != dimension_) {
        throw std::invalid_argument("embedding dimension mismatch for " +
                                    record.tile_ref);
    }
    for (const SemanticRecord& existing : records_) {
        if (existing.tile_ref == record.tile_ref) {
            throw std::invalid_argument("duplicate tile_ref: " + record.tile_ref);
        }
    }
    dimension_ = vector.dimension();
    records_.push_back(std::move(record));
    vectors_.push_back(std::move(vector));
}

SemanticIndex SemanticIndex::build(const std::vector<SemanticRecord>& records,
                                   const EmbeddingProvider& provider) {
    SemanticIndex index;
    for (const SemanticRecord& record : records) {
        std::optional<EmbeddingVector> vec = provider.embed(record.tile_ref);
        if (!vec) {
            throw std::invalid_argument("no embedding for tile_ref: " +
                                        record.tile_ref);
        }
        index.add(record, std::move(*vec));
    }
    return index;
}

std::vector<SemanticIndex::Hit> SemanticIndex::query(
    const EmbeddingVector& query_vec, std::size_t k,
    const std::optional<std::set<Affordance>>& filter) const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (records_.empty()) return {};

    std::vector<Hit> hits;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (filter) {
            bool intersects = false;
            for (Affordance a : records_[i].affordances) {
                if (filter->contains(a)) {
                    intersects = true;
                    break;
                }
            }
            if (!intersects) continue;
        }
        hits.push_back({&records_[i], cosine_similarity(query_vec, vectors_[i])});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.record->tile_ref < b.record->tile_ref;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

SynonymLexicon load_synonyms(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw IoError("cannot open synonym lexicon: " + json_path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("synonym lexicon must be a JSON object: " + json_path);
    }
    SynonymLexicon lex;
    for (const auto& [term, syns] : j.items()) {
        lex[normalize_label(term)] = syns.get<std::vector<std::string>>();
    }
    return lex;
}

std::string to_string(MatchLevel level) {
    switch (level) {
        case MatchLevel::Direct: return "direct";
        case MatchLevel::Synonym: return "synonym";
        case MatchLevel::Semantic: return "semantic";
    }
    return "?";
}

std::string to_string(LabelField field) {
    switch (field) {
        case LabelField::Group: return "group";
        case LabelField::Supercategory: return "supercategory";
        case LabelField::Affordance: return "affordance";
    }
    return "?";
}

namespace {

bool contains_phrase(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= haystack.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < phrase.size(); ++j) {
            if (haystack[i + j] != phrase[j]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

bool direct_match(const std::vector<std::string>& caption_tokens,
                  const std::vector<std::string>& label_tokens) {
    for (const std::string& lt : label_tokens) {
        for (const std::string& ct : caption_tokens) {
            if (lt == ct) return true;
        }
    }
    return false;
}

bool synonym_match(const std::vector<std::string>& caption_tokens,
                   const std::string& label, const SynonymLexicon& synonyms) {
    std::vector<std::string> candidates;
    candidates.push_back(label);
    for (const std::string& token : tokenize(label)) candidates.push_back(token);

    std::vector<std::string> lookups = candidates;
    for (const std::string& key : lookups) {
        auto it = synonyms.find(key);
        if (it == synonyms.end()) continue;
        for (const std::string& syn : it->second) candidates.push_back(syn);
    }
    for (const std::string& cand : candidates) {
        if (contains_phrase(caption_tokens, tokenize(cand))) return true;
    }
    return false;
}

MatchState semantic_match(const std::optional<EmbeddingVector>& caption_vec,
                          const std::vector<std::string>& labels,
                          const EmbeddingProvider* embedder, double threshold) {
    if (!embedder || !caption_vec) return MatchState::Unavailable;
    bool any_missing = false;
    for (const std::string& label : labels) {
        std::optional<EmbeddingVector> lv = embedder->embed(label);
        if (!lv) {
            any_missing = true;
            continue;
        }
        if (cosine_similarity(*caption_vec, *lv) >= threshold) {
            return MatchState::Yes;
        }
    }
    return any_missing ? MatchState::Unavailable : MatchState::No;
}

}  // namespace

CaptionMatch match_caption(const std::string& caption, const SemanticRecord& record,
                           const SynonymLexicon& synonyms,
                           const EmbeddingProvider* embedder,
                           double sim_threshold) {
    CaptionMatch result;
    const std::vector<std::string> caption_tokens = tokenize(caption);

    std::array<std::vector<std::string>, 3> field_labels;
    field_labels[0] = {record.group_label};
    field_labels[1] = {record.supercategory};
    for (Affordance a : record.affordances) {
        field_labels[2].push_back(to_string(a));
    }

    for (LabelField field : kAllLabelFields) {
        const auto& labels = field_labels[static_cast<std::size_t>(field)];

        bool direct = false;
        bool synonym = false;
        for (const std::string& label : labels) {
            direct = direct || direct_match(caption_tokens, tokenize(label));
            synonym = synonym || synonym_match(caption_tokens, label, synonyms);
        }
        result.at(MatchLevel::Direct, field) =
            direct ? MatchState::Yes : MatchState::No;
        result.at(MatchLevel::Synonym, field) =
            synonym ? MatchState::Yes : MatchState::No;
    }

    std::optional<EmbeddingVector> caption_vec;
    if (embedder) caption_vec = embedder->embed(caption);
    for (LabelField field : kAllLabelFields) {
        result.at(MatchLevel::Semantic, field) =
            semantic_match(caption_vec,
                           field_labels[static_cast<std::size_t>(field)],
                           embedder, sim_threshold);
    }
    return result;
}

MatchCounts aggregate_matches(const std::vector<CaptionMatch>& results) {
    MatchCounts counts;
    counts.total = results.size();
    for (const CaptionMatch& r : results) {
        for (MatchLevel level : kAllMatchLevels) {
            for (LabelField field : kAllLabelFields) {
                std::size_t li = static_cast<std::size_t>(level);
                std::size_t fi = static_cast<std::size_t>(field);
                if (r.at(level, field) == MatchState::Yes) {
                    ++counts.matched[li][fi];
                } else if (r.at(level, field) == MatchState::Unavailable) {
                    ++counts.unavailable[li][fi];
                }
            }
        }
    }
    return counts;
}

}  // namespace tilelab
