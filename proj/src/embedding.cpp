#include "tilelab/embedding.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tilelab/errors.hpp"

namespace tilelab {

EmbeddingVector::EmbeddingVector(std::vector<double> v) : values(std::move(v)) {
    double sq = 0.0;
    for (double x : values) sq += x * x;
    norm = std::sqrt(sq);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("embedding dimensions do not match");
    }
    if (a.norm == 0.0 || b.norm == 0.0) {
        throw std::invalid_argument("cosine similarity of a zero vector");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
    }
    return dot / (a.norm * b.norm);
}

FileEmbeddingProvider::FileEmbeddingProvider(const std::string& jsonl_path) {
    std::ifstream in(jsonl_path);
    if (!in) throw IoError("cannot open embeddings file: " + jsonl_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("key") || !j.contains("vector")) {
            throw ParseError(jsonl_path + ":" + std::to_string(line_no) +
                             ": expected {\"key\", \"vector\"}");
        }
        insert(j["key"].get<std::string>(),
               EmbeddingVector(j["vector"].get<std::vector<double>>()));
    }
}

void FileEmbeddingProvider::insert(const std::string& key, EmbeddingVector vec) {
    table_[key] = std::move(vec);
}

std::optional<EmbeddingVector> FileEmbeddingProvider::embed(
    const std::string& text) const {
    auto it = table_.find(text);
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dimension)
    : dimension_(dimension) {
    if (dimension_ == 0) throw std::invalid_argument("dimension must be positive");
}

std::optional<EmbeddingVector> HashedNgramEmbedder::embed(
    const std::string& text) const {
    if (text.empty()) return std::nullopt;
    std::string padded = " " + text + " ";
    std::vector<double> v(dimension_, 0.0);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        // FNV-1a over the trigram; low bit picks the sign.
        std::uint64_t h = 1469598103934665603ULL;
        for (std::size_t k = 0; k < 3; ++k) {
            h ^= static_cast<unsigned char>(padded[i + k]);
            h *= 1099511628211ULL;
        }
        double sign = (h & 1) ? 1.0 : -1.0;
        v[(h >> 1) % dimension_] += sign;
    }
    EmbeddingVector out(std::move(v));
    if (out.norm == 0.0) return std::nullopt;
    return out;
}

}  // namespace tilelab
