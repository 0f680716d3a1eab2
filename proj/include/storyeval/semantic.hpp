#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "storyeval/error.hpp"

namespace storyeval {

/// Model id of the sentence-embedding model the study used.
inline constexpr const char* kDefaultEmbeddingModel = "thenlper/gte-large";

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;

    std::size_t dimension() const noexcept { return values.size(); }
};

class BackendError : public Error {
public:
    enum class Kind { configuration, transient };

    BackendError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Text-to-vector model. Implementations must be deterministic: the same
/// text maps to the same vector for a fixed configuration.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;

    virtual std::string model_id() const = 0;
    virtual std::size_t dimension() const = 0;
    /// One vector per text, same order.
    virtual std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) = 0;
};

/// Maps each text to a reproducible pseudo-random unit vector derived from
/// its SHA-256 digest. Used wherever model weights are unavailable.
class HashStubBackend final : public EmbeddingBackend {
public:
    explicit HashStubBackend(std::size_t dimension = 64, std::uint64_t seed = 0);

    std::string model_id() const override;
    std::size_t dimension() const override { return dimension_; }
    std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) override;

    std::vector<double> vector_for(const std::string& text) const;

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

/// Runs an external embedding program (by default tools/embed_sentences.py,
/// which wraps sentence-transformers) once per batch, exchanging JSON files:
///
///   <command> --model <id> --input <texts.json> --output <vectors.json>
///
/// Exit status 2 or 126/127 is reported as a configuration failure, any
/// other failure as transient.
class CommandBackend final : public EmbeddingBackend {
public:
    CommandBackend(std::string command, std::string model_id, std::size_t dimension = 0);

    std::string model_id() const override { return model_id_; }
    /// Declared dimension; when constructed with 0 it is learned from the
    /// first successful batch.
    std::size_t dimension() const override { return dimension_; }
    std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) override;

private:
    std::string command_;
    std::string model_id_;
    std::size_t dimension_;
};

/// Persistent (model_id, text hash) -> vector store. One JSON record per
/// line: {"model_id", "text_hash", "vector"}. Reads may run concurrently;
/// writes are serialized and appended.
class EmbeddingCache {
public:
    /// In-memory only.
    EmbeddingCache() = default;
    /// Loads existing entries from `path` (if present) and appends new ones.
    explicit EmbeddingCache(std::filesystem::path path);

    std::optional<std::vector<double>> lookup(const std::string& model_id, const std::string& text_hash) const;
    void store(const std::string& model_id, const std::string& text_hash, const std::vector<double>& vector);
    std::size_t size() const;
    const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

private:
    std::optional<std::filesystem::path> path_;
    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::string, std::string>, std::vector<double>> entries_;
};

/// Backend plus cache. Only texts missing from the cache reach the backend.
class Embedder {
public:
    Embedder(EmbeddingBackend& backend, std::shared_ptr<EmbeddingCache> cache, std::size_t batch_size = 32);

    /// Throws ValidationError on empty texts, BackendError on backend failure.
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts);
    EmbeddingVector embed_one(const std::string& text);

    std::string model_id() const { return backend_.model_id(); }
    /// Number of backend batch invocations so far.
    std::size_t backend_calls() const noexcept { return backend_calls_; }
    /// Number of texts the backend was asked to embed.
    std::size_t backend_texts() const noexcept { return backend_texts_; }

private:
    EmbeddingBackend& backend_;
    std::shared_ptr<EmbeddingCache> cache_;
    std::size_t batch_size_;
    std::size_t backend_calls_ = 0;
    std::size_t backend_texts_ = 0;
};

/// 1 - cosine similarity, clipped to [0, 2].
/// Throws DomainError on dimension/model mismatch or a zero-norm vector.
double semantic_distance(const EmbeddingVector& a, const EmbeddingVector& b);

/// Symmetric matrix of semantic_distance with an exact zero diagonal.
Eigen::MatrixXd pairwise_distances(std::span<const EmbeddingVector> vectors);

}  // namespace storyeval
