#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "storyeval/corpus.hpp"
#include "storyeval/linguistics.hpp"
#include "storyeval/semantic.hpp"

namespace storyeval {

enum class SurpriseMode {
    dispersion_delta,   // change in per-sentence term dispersion
    adjacent_distance,  // distance between consecutive sentence embeddings
};

std::string_view to_string(SurpriseMode mode);
SurpriseMode parse_surprise_mode(std::string_view text);

struct NgramOptions {
    bool lowercase = true;
    bool include_punctuation = false;
};

struct DispersionOptions {
    /// Divide the ordered-pair sum by |T|(|T|-1) instead of |T|.
    bool mean_over_pairs = false;
};

/// Every n-gram of order n, words joined by single spaces, in text order.
/// N-grams never span sentences.
std::vector<std::string> ngrams(const Annotation& annotation, int n, const NgramOptions& options = {});

/// Distinct n-grams over total n-grams. N-grams never cross sentence
/// boundaries. Empty when the story has no n-gram of that order.
std::optional<double> ngram_diversity(const Annotation& annotation, int n, const NgramOptions& options = {});

/// Mean over the defined orders in [min_n, max_n].
std::optional<double> mean_ngram_diversity(const Annotation& annotation, const NgramOptions& options = {},
                                           int min_n = 1, int max_n = 5);

/// Mean distance from story `index` to every other story of its item set.
/// Throws DomainError for fewer than two stories.
double inverse_homogenization(std::size_t index, std::span<const EmbeddingVector> item_set_stories);

/// Same, addressed by story id.
double inverse_homogenization(const std::string& story_id, std::span<const std::string> story_ids,
                              std::span<const EmbeddingVector> item_set_stories);

/// Sum of distances over ordered pairs i != j, divided by |T|.
/// Empty for fewer than two vectors.
std::optional<double> dispersion(std::span<const EmbeddingVector> vectors, const DispersionOptions& options = {});

/// Dispersion of a term set; terms are embedded as given (lemmas).
std::optional<double> dominant_term_dispersion(std::span<const std::string> terms, Embedder& embedder,
                                               const DispersionOptions& options = {});

/// Dispersion of the deduplicated union of every story's dominant terms.
/// Throws DomainError when the union has fewer than two terms.
double corpus_dispersion(std::span<const Annotation> annotations, Embedder& embedder,
                         const DispersionOptions& options = {});

/// 2 |story - corpus|; empty when either side is undefined.
std::optional<double> novelty(std::optional<double> story_dispersion, std::optional<double> corpus_dispersion);

struct SurpriseResult {
    std::optional<double> value;
    /// D(F_i) per sentence; 0 where a sentence has fewer than two terms.
    std::vector<double> fragment_dispersions;
    /// Raw per-step scores for sentence positions 2..|F|.
    std::vector<double> steps;
    std::vector<std::string> warnings;
};

SurpriseResult surprise(const Annotation& annotation, Embedder& embedder,
                        SurpriseMode mode = SurpriseMode::dispersion_delta, const DispersionOptions& options = {});

struct ProfilePoint {
    int position = 0;  // 1-based sentence position, >= 2
    double mean = 0.0;
    std::size_t stories = 0;
};

/// Per-position mean of raw steps. `steps[k][i]` is story k's step into
/// sentence i + 2. Positions nobody reaches are omitted.
std::vector<ProfilePoint> surprise_profile(std::span<const std::vector<double>> steps);

std::vector<ProfilePoint> surprise_profile(std::span<const Annotation> annotations, Embedder& embedder,
                                           const DispersionOptions& options = {});

struct SemanticMetricRecord {
    std::string story_id;
    std::string model_id;
    std::map<int, std::optional<double>> ngram_diversity;
    std::optional<double> mean_ngram_diversity;
    std::optional<double> inverse_homogenization;
    std::optional<double> dispersion_D;
    std::optional<double> corpus_dispersion;
    std::optional<double> novelty;
    std::optional<double> surprise;
    std::vector<double> fragment_dispersions;
    std::vector<double> surprise_steps;
};

Json to_json(const SemanticMetricRecord& record);
SemanticMetricRecord semantic_record_from_json(const Json& j);

struct SemanticMetricsConfig {
    NgramOptions ngram;
    int ngram_min = 1;
    int ngram_max = 5;
    DispersionOptions dispersion;
    SurpriseMode surprise_mode = SurpriseMode::dispersion_delta;
    /// Compute the reference dispersion per item set instead of globally.
    bool corpus_dispersion_per_item_set = false;
};

/// All semantic metrics for every story. `annotations` must be aligned with
/// `corpus.stories()`. Warnings (undefined values and their reasons) are
/// appended to `warnings` when given.
std::vector<SemanticMetricRecord> compute_semantic_metrics(const Corpus& corpus,
                                                           std::span<const Annotation> annotations,
                                                           Embedder& embedder, const SemanticMetricsConfig& config = {},
                                                           std::vector<std::string>* warnings = nullptr);

}  // namespace storyeval
