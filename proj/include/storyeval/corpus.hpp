#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "storyeval/store.hpp"

namespace storyeval {

enum class AuthorKind { human, ai };
enum class SemdisCategory { low, high };

std::string_view to_string(AuthorKind kind);
std::string_view to_string(SemdisCategory category);
AuthorKind parse_author_kind(std::string_view text);
SemdisCategory parse_semdis_category(std::string_view text);

/// A triple of cue words seeding one story-writing prompt.
struct ItemSet {
    std::string id;
    std::array<std::string, 3> cue_words;
    std::string boring_storyline;
    SemdisCategory semdis_category = SemdisCategory::low;

    /// Throws ValidationError unless all three cue words are non-empty.
    void validate() const;
};

struct Story {
    std::string id;
    AuthorKind author_kind = AuthorKind::human;
    std::string author_id;
    std::string item_set;
    std::string text;
    /// Filled by annotation.
    std::optional<int> sentence_count;
};

/// Sampling settings the stories were generated with. Recorded only.
struct DecodingConfig {
    double temperature = 0.7;
    double top_p = 0.95;
};

class Corpus {
public:
    Corpus() = default;
    Corpus(std::vector<ItemSet> item_sets, std::vector<Story> stories);

    const std::vector<Story>& stories() const noexcept { return stories_; }
    std::vector<Story>& stories() noexcept { return stories_; }
    const std::vector<ItemSet>& item_sets() const noexcept { return item_sets_; }
    std::size_t size() const noexcept { return stories_.size(); }
    bool empty() const noexcept { return stories_.empty(); }

    const ItemSet& item_set(std::string_view id) const;
    const ItemSet* find_item_set(std::string_view id) const;
    const Story* find_story(std::string_view id) const;

    DecodingConfig decoding;

    /// Re-checks id uniqueness and item-set resolution.
    void validate() const;

private:
    std::vector<ItemSet> item_sets_;
    std::vector<Story> stories_;
};

/// The four cue-word sets used in the study, with their semantic distance
/// categories.
std::vector<ItemSet> default_item_sets();

std::vector<ItemSet> load_item_sets(const std::filesystem::path& path);
void save_item_sets(const std::filesystem::path& path, const std::vector<ItemSet>& item_sets);

Json to_json(const ItemSet& item_set);
ItemSet item_set_from_json(const Json& j);
Json to_json(const Story& story);
Story story_from_json(const Json& j);

/// Loads one story per line. Records keep file order.
/// Throws IoError (missing file), ParseError (malformed line, with line
/// number) or ValidationError (duplicate id, unknown item set).
Corpus load_corpus(const std::filesystem::path& path, std::vector<ItemSet> item_sets);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

struct FilterResult {
    Corpus corpus;
    std::size_t removed = 0;
};

FilterResult filter_by_sentence_count(const Corpus& corpus, int min_sentences = 3, int max_sentences = 7);

/// Drops stories whose ids are listed (manual exclusion of non-adhering
/// participants).
FilterResult exclude_stories(const Corpus& corpus, const std::unordered_set<std::string>& ids);
std::unordered_set<std::string> load_exclusion_list(const std::filesystem::path& path);

std::string build_generation_prompt(const ItemSet& item_set);

struct StatisticsRow {
    std::string item_set;
    std::size_t human = 0;
    std::size_t ai = 0;
    std::size_t total() const noexcept { return human + ai; }
};

struct CorpusStatistics {
    std::vector<StatisticsRow> rows;
    StatisticsRow totals{"Total"};

    const StatisticsRow* row(std::string_view item_set) const;
    std::string to_csv() const;
};

CorpusStatistics corpus_statistics(const Corpus& corpus);

}  // namespace storyeval
