#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "storyeval/corpus.hpp"
#include "storyeval/linguistics.hpp"
#include "storyeval/metrics_semantic.hpp"

namespace storyeval {

/// File names inside a results directory. Every stage reads and writes
/// these, so partial pipelines compose.
namespace store_files {
inline constexpr const char* item_sets = "item_sets.json";
inline constexpr const char* corpus = "corpus.jsonl";
inline constexpr const char* corpus_statistics = "corpus_statistics.csv";
inline constexpr const char* annotations = "annotations.jsonl";
inline constexpr const char* semantic_metrics = "semantic_metrics.jsonl";
inline constexpr const char* complexity_metrics = "complexity_metrics.jsonl";
inline constexpr const char* metric_summary = "metric_summary.csv";
inline constexpr const char* surprise_profile = "surprise_profile.csv";
inline constexpr const char* theme_assignments = "theme_assignments.jsonl";
inline constexpr const char* theme_counts = "theme_counts.jsonl";
inline constexpr const char* theme_counts_csv = "theme_counts.csv";
inline constexpr const char* composites = "composites.jsonl";
inline constexpr const char* rating_summary = "rating_summary.csv";
inline constexpr const char* icc = "icc.csv";
inline constexpr const char* turing_accuracy = "turing_accuracy.csv";
inline constexpr const char* rating_correlations = "rating_correlations.json";
inline constexpr const char* comparisons = "comparisons.jsonl";
inline constexpr const char* comparisons_csv = "comparisons.csv";
inline constexpr const char* item_set_comparisons = "item_set_comparisons.jsonl";
inline constexpr const char* stratified = "stratified.jsonl";
inline constexpr const char* regression = "regression.json";
inline constexpr const char* regression_table = "regression_table.csv";
inline constexpr const char* top_ngrams = "top_5grams.csv";
inline constexpr const char* report = "report.md";
inline constexpr const char* figures_dir = "figures";
inline constexpr const char* manifest = "manifest.json";
}  // namespace store_files

struct NgramCount {
    std::string ngram;
    std::size_t count = 0;

    bool operator==(const NgramCount&) const = default;
};

/// The k most frequent n-grams over one author kind's stories, by count
/// descending and then lexicographically. Annotations are matched to
/// stories by id; stories without one are ignored.
std::vector<NgramCount> top_ngrams(const Corpus& corpus, std::span<const Annotation> annotations, int n,
                                   std::size_t k, AuthorKind author_kind, const NgramOptions& options = {});

std::string ngram_table_csv(std::span<const NgramCount> human, std::span<const NgramCount> ai);

struct FigureSet {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Renders SVG charts from a results directory into `output_dir`: one
/// grouped per-item-set chart (human vs AI) per metric, a surprise profile
/// line chart, theme-count bars and pronoun-use bars. A figure whose data is
/// missing is skipped with a warning. File names are fixed.
FigureSet render_figures(const std::filesystem::path& results_dir, const std::filesystem::path& output_dir);

}  // namespace storyeval
