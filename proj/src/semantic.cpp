#include "storyeval/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "storyeval/hash.hpp"

namespace storyeval {

HashStubBackend::HashStubBackend(std::size_t dimension, std::uint64_t seed) : dimension_(dimension), seed_(seed) {
    if (dimension_ == 0) throw ValidationError("stub backend dimension must be positive");
}

std::string HashStubBackend::model_id() const {
    return "hash-stub-v1/d" + std::to_string(dimension_) + "/s" + std::to_string(seed_);
}

std::vector<double> HashStubBackend::vector_for(const std::string& text) const {
    const auto digest = sha256(std::to_string(seed_) + '\x1f' + text);
    std::vector<std::uint32_t> words;
    for (std::size_t i = 0; i < digest.size(); i += 4) {
        words.push_back(std::uint32_t(digest[i]) << 24 | std::uint32_t(digest[i + 1]) << 16 |
                        std::uint32_t(digest[i + 2]) << 8 | std::uint32_t(digest[i + 3]));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::mt19937_64 rng(seq);

    // Box-Muller on raw engine output keeps vectors identical across
    // standard library implementations.
    auto uniform = [&rng] { return (double(rng() >> 11) + 0.5) * 0x1.0p-53; };
    std::vector<double> v(dimension_);
    for (std::size_t i = 0; i < dimension_; i += 2) {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        v[i] = r * std::cos(theta);
        if (i + 1 < dimension_) v[i + 1] = r * std::sin(theta);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

std::vector<std::vector<double>> HashStubBackend::embed_batch(std::span<const std::string> texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(vector_for(t));
    return out;
}

Embedder::Embedder(EmbeddingBackend& backend, std::shared_ptr<EmbeddingCache> cache, std::size_t batch_size)
    : backend_(backend), cache_(cache ? std::move(cache) : std::make_shared<EmbeddingCache>()),
      batch_size_(std::max<std::size_t>(1, batch_size)) {}

std::vector<EmbeddingVector> Embedder::embed(std::span<const std::string> texts) {
    const std::string model = backend_.model_id();
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::string> hashes(texts.size());
    // Distinct uncached texts, first occurrence order.
    std::vector<std::size_t> missing;
    std::map<std::string, std::size_t> pending;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (texts[i].empty()) throw ValidationError("cannot embed empty text (index " + std::to_string(i) + ")");
        hashes[i] = sha256_hex(texts[i]);
        out[i].model_id = model;
        if (auto hit = cache_->lookup(model, hashes[i])) {
            out[i].values = std::move(*hit);
        } else if (!pending.count(hashes[i])) {
            pending.emplace(hashes[i], i);
            missing.push_back(i);
        }
    }

    for (std::size_t start = 0; start < missing.size(); start += batch_size_) {
        const std::size_t end = std::min(missing.size(), start + batch_size_);
        std::vector<std::string> batch;
        for (std::size_t k = start; k < end; ++k) batch.push_back(texts[missing[k]]);
        auto vectors = backend_.embed_batch(batch);
        ++backend_calls_;
        backend_texts_ += batch.size();
        if (vectors.size() != batch.size()) {
            throw BackendError(BackendError::Kind::transient, "backend returned " + std::to_string(vectors.size()) +
                                                                  " vectors for " + std::to_string(batch.size()) +
                                                                  " texts");
        }
        for (std::size_t k = start; k < end; ++k) {
            auto& vec = vectors[k - start];
            for (double x : vec) {
                if (!std::isfinite(x)) {
                    throw BackendError(BackendError::Kind::transient, "backend produced a non-finite value");
                }
            }
            if (backend_.dimension() != 0 && vec.size() != backend_.dimension()) {
                throw BackendError(BackendError::Kind::configuration,
                                   "backend vector has dimension " + std::to_string(vec.size()) + ", declared " +
                                       std::to_string(backend_.dimension()));
            }
            cache_->store(model, hashes[missing[k]], vec);
        }
    }

    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (out[i].values.empty()) {
            auto hit = cache_->lookup(model, hashes[i]);
            if (!hit) throw BackendError(BackendError::Kind::transient, "embedding missing after backend call");
            out[i].values = std::move(*hit);
        }
    }
    return out;
}

EmbeddingVector Embedder::embed_one(const std::string& text) {
    const std::string one[] = {text};
    return std::move(embed(one).front());
}

double semantic_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw DomainError("semantic_distance: dimension mismatch (" + std::to_string(a.dimension()) + " vs " +
                          std::to_string(b.dimension()) + ")");
    }
    if (a.model_id != b.model_id) {
        throw DomainError("semantic_distance: model mismatch ('" + a.model_id + "' vs '" + b.model_id + "')");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) throw DomainError("semantic_distance: zero-norm vector");
    if (a.values == b.values) return 0.0;
    const double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(d, 0.0, 2.0);
}

Eigen::MatrixXd pairwise_distances(std::span<const EmbeddingVector> vectors) {
    if (vectors.size() < 2) throw DomainError("pairwise_distances needs at least two vectors");
    const auto n = static_cast<Eigen::Index>(vectors.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = semantic_distance(vectors[i], vectors[j]);
            m(i, j) = d;
            m(j, i) = d;
        }
    }
    return m;
}

}  // namespace storyeval
