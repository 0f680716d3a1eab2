#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "storyeval/corpus.hpp"
#include "storyeval/semantic.hpp"

namespace storyeval {

inline constexpr double kDefaultThemeThreshold = 0.6;

/// One agglomeration step in SciPy linkage convention: ids below n are
/// input points, id n + k is the cluster formed by step k.
struct Merge {
    int left = 0;
    int right = 0;
    double height = 0.0;
    int size = 0;
};

/// Ward linkage over the rows of `points` (Euclidean). Merges are returned in
/// non-decreasing height order. Merge height between clusters A and B is
/// sqrt(2 |A| |B| / (|A| + |B|)) * |centroid(A) - centroid(B)|.
std::vector<Merge> ward_linkage(const Eigen::MatrixXd& points);

/// Flat clusters from applying every merge strictly below `threshold`.
/// Labels are 0..k-1 numbered by first appearance.
std::vector<int> cut_linkage(std::span<const Merge> linkage, std::size_t n, double threshold);

struct ThemeClustering {
    std::string item_set;
    /// Empty when human and AI stories were clustered together.
    std::optional<AuthorKind> author_kind;
    std::vector<std::string> story_ids;
    std::vector<int> assignment;
    int num_clusters = 0;
    std::vector<Merge> linkage;

    /// Story ids per cluster label.
    std::vector<std::vector<std::string>> clusters() const;
};

struct ThemeOptions {
    double threshold = kDefaultThemeThreshold;
    /// Scale embeddings to unit length before clustering.
    bool normalize = true;
};

/// Throws ValidationError when ids and vectors differ in length or the
/// vectors are not all of one model and dimension.
ThemeClustering cluster_themes(std::span<const std::string> story_ids, std::span<const EmbeddingVector> embeddings,
                               const ThemeOptions& options = {});

struct ThemeCount {
    std::string item_set;
    std::string group;  // "human", "ai" or "all"
    int num_clusters = 0;
    std::size_t stories = 0;
};

struct ThemeReport {
    std::vector<ThemeClustering> clusterings;
    std::vector<ThemeCount> counts;
    std::vector<std::string> warnings;

    const ThemeCount* count(std::string_view item_set, std::string_view group) const;
    /// {item_set, author_kind, story_id, cluster_id} per story.
    std::vector<Json> assignment_records() const;
    std::string counts_csv() const;
};

/// Clusters per (item set, author kind), or per item set when `joint`.
/// Empty groups yield a count of 0 and a warning.
ThemeReport theme_counts(const Corpus& corpus, Embedder& embedder, const ThemeOptions& options = {},
                         bool joint = false);

}  // namespace storyeval
