#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "storyeval/corpus.hpp"

namespace storyeval {

enum class JudgeType { expert, non_expert, llm };
enum class RatingVariable { creativity, originality, surprise, effectiveness };
enum class CompositeMethod { mean, median, mode };

inline constexpr std::array<JudgeType, 3> kJudgeTypes = {JudgeType::expert, JudgeType::non_expert, JudgeType::llm};
inline constexpr std::array<RatingVariable, 4> kRatingVariables = {
    RatingVariable::creativity, RatingVariable::originality, RatingVariable::surprise, RatingVariable::effectiveness};

std::string_view to_string(JudgeType type);
std::string_view to_string(RatingVariable variable);
std::string_view to_string(CompositeMethod method);
JudgeType parse_judge_type(std::string_view text);
RatingVariable parse_rating_variable(std::string_view text);
CompositeMethod parse_composite_method(std::string_view text);

struct Rating {
    std::string story_id;
    std::string judge_id;
    JudgeType judge_type = JudgeType::expert;
    std::array<int, 4> scores{};  // indexed by RatingVariable
    AuthorKind author_guess = AuthorKind::human;

    int score(RatingVariable v) const { return scores[static_cast<std::size_t>(v)]; }
    /// Throws ValidationError unless every score is within 1..5.
    void validate() const;
};

Json to_json(const Rating& rating);
Rating rating_from_json(const Json& j);

/// One rating per line. Throws ParseError / ValidationError with the line
/// number for malformed or out-of-range records, unknown stories (when
/// `known_stories` is given) and duplicate (story, judge) pairs.
std::vector<Rating> load_ratings(const std::filesystem::path& path, const Corpus* known_stories = nullptr);
void save_ratings(const std::filesystem::path& path, std::span<const Rating> ratings);

struct CompositeRating {
    std::string story_id;
    JudgeType judge_type = JudgeType::expert;
    CompositeMethod method = CompositeMethod::mean;
    std::array<double, 4> values{};
    AuthorKind author_guess = AuthorKind::human;
    std::size_t judges = 0;

    double value(RatingVariable v) const { return values[static_cast<std::size_t>(v)]; }
};

/// The method each judge type uses: mean for experts and LLMs, median for
/// non-experts.
CompositeMethod default_method(JudgeType type);

struct CompositeOptions {
    /// Winner of an even author-guess split.
    AuthorKind tie_break = AuthorKind::ai;
    /// Overrides the per-judge-type default when set.
    std::optional<CompositeMethod> method;
};

/// Composite of one story's ratings from a single judge type. Median of an
/// even count takes the lower middle value; mode ties take the smallest.
/// Throws ValidationError for no ratings or mixed stories / judge types.
CompositeRating composite(std::span<const Rating> ratings, const CompositeOptions& options = {});

/// Composites for every (story, judge type) present, ordered by story id
/// then judge type.
std::vector<CompositeRating> composites(std::span<const Rating> ratings, const CompositeOptions& options = {});

Json to_json(const CompositeRating& composite);
CompositeRating composite_from_json(const Json& j);

struct IccResult {
    double value = 0.0;
    std::size_t stories = 0;
    std::size_t judges = 0;
    bool degenerate = false;
};

/// ICC(2,k): two-way random effects, absolute agreement, average of k raters.
/// `matrix` is stories x judges with no missing cells. Degenerate variance
/// yields 1.0 with `degenerate` set. Throws DomainError for fewer than two
/// stories or judges.
IccResult icc2k(const Eigen::MatrixXd& matrix);

struct IccBatch {
    std::vector<std::string> judges;
    std::size_t stories = 0;
    IccResult result;
};

struct IccSummary {
    JudgeType judge_type = JudgeType::expert;
    RatingVariable variable = RatingVariable::creativity;
    /// Story-weighted mean over complete batches.
    std::optional<double> value;
    std::vector<IccBatch> batches;
    std::vector<std::string> warnings;
};

/// Groups stories by their exact set of judges and computes ICC(2,k) on
/// each complete sub-matrix with at least two stories and two judges.
IccSummary icc(std::span<const Rating> ratings, JudgeType type, RatingVariable variable);

struct SummaryCell {
    JudgeType judge_type = JudgeType::expert;
    RatingVariable variable = RatingVariable::creativity;
    AuthorKind author_kind = AuthorKind::human;
    double mean = 0.0;
    double sd = 0.0;  // sample SD; 0 for a single story
    std::size_t n = 0;
};

/// Means and SDs of composites per judge type, variable and true author.
/// Stories missing from `author_of` are ignored.
std::vector<SummaryCell> rating_summary(std::span<const CompositeRating> composites,
                                        const std::unordered_map<std::string, AuthorKind>& author_of);

/// Table rendering: one row per (judge type, variable), "mean (±sd)" cells.
std::string rating_summary_table(std::span<const SummaryCell> cells);

/// Fraction of composites whose author guess matches the truth, per judge type.
std::map<JudgeType, double> turing_accuracy(std::span<const CompositeRating> composites,
                                            const std::unordered_map<std::string, AuthorKind>& author_of);

std::unordered_map<std::string, AuthorKind> author_map(const Corpus& corpus);

}  // namespace storyeval
