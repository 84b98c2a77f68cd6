#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tilelab {

struct EmbeddingVector {
    std::vector<double> values;
    double norm = 0.0;  // cached Euclidean norm

    EmbeddingVector() = default;
    explicit EmbeddingVector(std::vector<double> v);

    std::size_t dimension() const { return values.size(); }
};

// dot(a,b) / (|a| |b|); zero vectors and mixed dimensions are rejected.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    // nullopt when no embedding is available for the text.
    virtual std::optional<EmbeddingVector> embed(const std::string& text) const = 0;
};

// Looks up precomputed vectors from a JSONL file of {"key":..., "vector":[...]}
// lines. Keys are matched exactly.
class FileEmbeddingProvider : public EmbeddingProvider {
  public:
    FileEmbeddingProvider() = default;
    explicit FileEmbeddingProvider(const std::string& jsonl_path);

    void insert(const std::string& key, EmbeddingVector vec);
    std::optional<EmbeddingVector> embed(const std::string& text) const override;

    std::size_t size() const { return table_.size(); }

  private:
    std::map<std::string, EmbeddingVector> table_;
};

// Deterministic stand-in embedder that hashes character trigrams into a
// fixed-dimension vector. Carries no semantics; intended for tests.
class HashedNgramEmbedder : public EmbeddingProvider {
  public:
    explicit HashedNgramEmbedder(std::size_t dimension = 64);
    std::optional<EmbeddingVector> embed(const std::string& text) const override;

  private:
    std::size_t dimension_;
};

}  // namespace tilelab
