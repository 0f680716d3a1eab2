#pragma once

#include <unistd.h>

#include <cctype>
#include <cmath>
#include <span>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "storyeval/corpus.hpp"
#include "storyeval/linguistics.hpp"
#include "storyeval/semantic.hpp"

namespace storyeval::test {

inline constexpr std::uint64_t kSeed = 20240917;
/// Randomized instances per property test.
inline constexpr int kInstances = 200;

/// Marks a property test with the number of instances it checked; the
/// acceptance gate reads this back.
inline void record_instances(int n) { ::testing::Test::RecordProperty("instances", n); }

inline std::filesystem::path data_dir() { return STORYEVAL_TEST_DATA; }

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("storyeval-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Annotation with one token per word and a flat tree (every token attached
/// to the first). Tokens made only of punctuation are tagged PUNCT.
inline Annotation flat_annotation(const std::vector<std::vector<std::string>>& sentences, std::string id = "s") {
    Annotation a;
    a.story_id = std::move(id);
    for (const auto& words : sentences) {
        Sentence s;
        for (std::size_t i = 0; i < words.size(); ++i) {
            Token t;
            t.text = words[i];
            t.lemma = words[i];
            bool alnum = false;
            for (unsigned char c : words[i]) alnum = alnum || std::isalnum(c);
            t.upos = alnum ? Upos::NOUN : Upos::PUNCT;
            t.is_content_word = alnum;
            t.head = i == 0 ? -1 : 0;
            t.dep = i == 0 ? "ROOT" : "dep";
            s.tokens.push_back(t);
            s.text += (i ? " " : "") + words[i];
        }
        a.sentences.push_back(std::move(s));
    }
    return a;
}

inline Annotation annotate_text(const std::string& text, std::string id = "s") {
    static const RuleBasedAnnotator annotator;
    Story story{std::move(id), AuthorKind::human, "", "stamp", text, std::nullopt};
    return annotate(story, annotator);
}

/// Backend returning fixed vectors per text and counting calls.
class TableBackend final : public EmbeddingBackend {
public:
    explicit TableBackend(std::map<std::string, std::vector<double>> table) : table_(std::move(table)) {}
    std::string model_id() const override { return "table"; }
    std::size_t dimension() const override { return table_.empty() ? 0 : table_.begin()->second.size(); }
    std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) override {
        ++calls;
        std::vector<std::vector<double>> out;
        for (const auto& t : texts) out.push_back(table_.at(t));
        return out;
    }
    int calls = 0;

private:
    std::map<std::string, std::vector<double>> table_;
};

/// Stub backend plus in-memory cache, ready to use.
struct StubEmbedder {
    explicit StubEmbedder(std::size_t dim = 32, std::uint64_t seed = 0)
        : backend(dim, seed), embedder(backend, std::make_shared<EmbeddingCache>()) {}
    HashStubBackend backend;
    Embedder embedder;
};

inline EmbeddingVector vec(std::vector<double> values, std::string model = "m") {
    return EmbeddingVector{std::move(values), std::move(model)};
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> v(dim);
    for (auto& x : v) x = n(rng);
    return v;
}

/// Unit vectors u, v with cosine similarity c.
inline std::pair<std::vector<double>, std::vector<double>> pair_with_cosine(double c) {
    return {{1.0, 0.0}, {c, std::sqrt(std::max(0.0, 1.0 - c * c))}};
}

/// A few short sentences drawn from a small mixed vocabulary.
inline std::string random_text(std::mt19937_64& rng) {
    static const std::vector<std::string> words{
        "the", "a", "cat", "dog", "ran", "quickly", "she", "he", "they", "we", "you", "I", "letter", "stamp",
        "sent", "was", "in", "heart", "of", "library", "old", "empire", "comply", "and", "but", "it", "his",
        "their", "my", "gloom", "payment", "exists", "pump", "diesel", "to", "write", "beautiful", "never", "our"};
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), len(1, 12), sentences(1, 4);
    std::string text;
    const auto n = sentences(rng);
    for (std::size_t s = 0; s < n; ++s) {
        const auto m = len(rng);
        for (std::size_t i = 0; i < m; ++i) {
            std::string w = words[pick(rng)];
            if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
            text += (i ? " " : "") + w;
            if (i + 1 < m && pick(rng) % 9 == 0) text += ",";
        }
        text += ". ";
    }
    return text;
}

}  // namespace storyeval::test
