#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyeval/corpus.hpp"
#include "storyeval/judges.hpp"
#include "storyeval/metrics_complexity.hpp"
#include "storyeval/metrics_semantic.hpp"

namespace storyeval {

/// "***" below .001, "**" below .01, "*" below .05, else "".
std::string significance_stars(double p);

struct GroupComparison {
    std::string metric;
    std::string group_a;
    std::string group_b;
    double mean_a = 0.0, sd_a = 0.0;
    double mean_b = 0.0, sd_b = 0.0;
    std::size_t n_a = 0, n_b = 0;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    std::string stars;

    double difference() const noexcept { return mean_a - mean_b; }
};

struct TTestOptions {
    /// Student's pooled-variance test instead of Welch.
    bool pooled = false;
};

/// Two-sided two-sample t test of a against b. Throws DomainError when a
/// group has fewer than two values, a non-finite value, or both groups are
/// constant at different means.
GroupComparison welch_t_test(std::span<const double> a, std::span<const double> b, const TTestOptions& options = {});

/// Per-story metric values keyed by metric name; missing or empty means
/// undefined.
struct StoryMetrics {
    std::string story_id;
    AuthorKind author_kind = AuthorKind::human;
    std::string item_set;
    std::map<std::string, std::optional<double>> values;

    std::optional<double> get(const std::string& metric) const;
};

/// Metric names produced by assemble_metrics.
const std::vector<std::string>& semantic_metric_names();
const std::vector<std::string>& lexical_complexity_names();
const std::vector<std::string>& syntactic_complexity_names();

/// Joins per-story records with corpus metadata. Records are matched by
/// story id; stories without records get no values.
std::vector<StoryMetrics> assemble_metrics(const Corpus& corpus, std::span<const SemanticMetricRecord> semantic,
                                           std::span<const ComplexityRecord> complexity);

/// Human vs AI comparison of one metric (a = human, b = ai), undefined
/// values dropped.
GroupComparison compare_authors(std::span<const StoryMetrics> stories, const std::string& metric,
                                const TTestOptions& options = {});

struct StratifiedComparison {
    AuthorKind author_kind = AuthorKind::human;
    GroupComparison comparison;  // a = low, b = high
};

/// Low- vs high-semdis item sets per author kind and metric. Throws
/// DomainError when a stratum is empty.
std::vector<StratifiedComparison> stratify_by_semdis(std::span<const StoryMetrics> stories,
                                                     std::span<const ItemSet> item_sets,
                                                     std::span<const std::string> metrics,
                                                     const TTestOptions& options = {});

struct CorrelationMatrix {
    std::vector<std::string> names;
    /// r[i][j]; empty where a variable has zero variance.
    std::vector<std::vector<std::optional<double>>> r;
};

/// Pearson correlations between equally long columns. Throws DomainError
/// for fewer than three observations.
CorrelationMatrix correlation_matrix(std::span<const std::string> names, std::span<const std::vector<double>> columns);

/// Correlations among the four rating variables of one judge type's composites.
CorrelationMatrix rating_correlations(std::span<const CompositeRating> composites, JudgeType type);

struct Candidate {
    std::string name;
    std::vector<std::optional<double>> values;
};

/// Candidate with the largest |r| against `ratings` (pairs with an
/// undefined value are skipped). Ties go to the earlier candidate.
/// Throws DomainError unless two candidates have a defined correlation.
std::string select_representative_metric(std::span<const Candidate> candidates, std::span<const double> ratings);

inline constexpr std::array<const char*, 6> kRegressionPredictors = {
    "semantic_diversity", "lexical_diversity", "novelty", "surprise", "syntactic_complexity", "lexical_complexity"};

struct Coefficient {
    std::string predictor;
    double beta = 0.0;
    double se = 0.0;
    double t = 0.0;
    double p = 1.0;
    std::string stars;
};

struct RegressionResult {
    std::string outcome;
    std::vector<Coefficient> coefficients;  // predictors only, in input order
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
    std::size_t dropped = 0;  // listwise deletions
    double df = 0.0;

    const Coefficient& at(std::string_view predictor) const;
};

/// OLS with intercept on z-standardized predictors and outcome (sample SD).
/// Rows with any undefined value are dropped. Throws DomainError for a
/// rank-deficient design (naming the collinear predictors) or too few rows.
RegressionResult ols_standardized(std::span<const std::string> predictor_names,
                                  std::span<const std::vector<std::optional<double>>> predictors,
                                  std::span<const std::optional<double>> outcome, std::string outcome_name = "creativity");

struct RegressionSpec {
    /// Metric names backing the two complexity predictors.
    std::string syntactic_metric = "avg_constituency_tree_depth";
    std::string lexical_metric = "unique_word_count";
};

/// creativity ~ semantic_diversity + lexical_diversity + novelty + surprise
///              + syntactic_complexity + lexical_complexity
/// for the composites of one judge type.
RegressionResult regress_creativity(std::span<const StoryMetrics> stories, std::span<const CompositeRating> composites,
                                    JudgeType type, const RegressionSpec& spec = {});

/// Picks the syntactic and lexical metrics that correlate most strongly
/// with the judge type's creativity composites.
RegressionSpec select_regression_spec(std::span<const StoryMetrics> stories,
                                      std::span<const CompositeRating> composites, JudgeType type);

Json to_json(const GroupComparison& c);
Json to_json(const RegressionResult& r);
Json to_json(const CorrelationMatrix& m);

/// Regression table text, one row per predictor: "beta (se) t p stars".
std::string regression_table(std::span<const RegressionResult> results, std::span<const std::string> labels);

}  // namespace storyeval
