#include "storyeval/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "storyeval/error.hpp"

namespace storyeval {

namespace fs = std::filesystem;

std::string_view to_string(AuthorKind kind) { return kind == AuthorKind::human ? "human" : "ai"; }

std::string_view to_string(SemdisCategory category) {
    return category == SemdisCategory::low ? "low" : "high";
}

AuthorKind parse_author_kind(std::string_view text) {
    if (text == "human") return AuthorKind::human;
    if (text == "ai") return AuthorKind::ai;
    throw ValidationError("unknown author_kind '" + std::string(text) + "' (expected human|ai)");
}

SemdisCategory parse_semdis_category(std::string_view text) {
    if (text == "low") return SemdisCategory::low;
    if (text == "high") return SemdisCategory::high;
    throw ValidationError("unknown semdis_category '" + std::string(text) + "' (expected low|high)");
}

void ItemSet::validate() const {
    if (id.empty()) throw ValidationError("item set with empty id");
    for (const auto& w : cue_words) {
        if (w.empty()) throw ValidationError("item set '" + id + "' has an empty cue word");
    }
}

Corpus::Corpus(std::vector<ItemSet> item_sets, std::vector<Story> stories)
    : item_sets_(std::move(item_sets)), stories_(std::move(stories)) {
    validate();
}

const ItemSet* Corpus::find_item_set(std::string_view id) const {
    auto it = std::find_if(item_sets_.begin(), item_sets_.end(), [&](const ItemSet& s) { return s.id == id; });
    return it == item_sets_.end() ? nullptr : &*it;
}

const ItemSet& Corpus::item_set(std::string_view id) const {
    if (const auto* s = find_item_set(id)) return *s;
    throw ValidationError("unknown item set '" + std::string(id) + "'");
}

const Story* Corpus::find_story(std::string_view id) const {
    auto it = std::find_if(stories_.begin(), stories_.end(), [&](const Story& s) { return s.id == id; });
    return it == stories_.end() ? nullptr : &*it;
}

void Corpus::validate() const {
    std::unordered_set<std::string> seen_sets;
    for (const auto& s : item_sets_) {
        s.validate();
        if (!seen_sets.insert(s.id).second) throw ValidationError("duplicate item set id '" + s.id + "'");
    }
    std::unordered_set<std::string> seen;
    for (const auto& story : stories_) {
        if (story.text.empty()) throw ValidationError("story '" + story.id + "' has empty text");
        if (!seen.insert(story.id).second) throw ValidationError("duplicate story id '" + story.id + "'");
        if (!seen_sets.count(story.item_set)) {
            throw ValidationError("story '" + story.id + "' refers to unknown item set '" + story.item_set + "'");
        }
    }
}

std::vector<ItemSet> default_item_sets() {
    return {
        {"stamp", {"stamp", "letter", "send"}, "stamping a letter and sending it", SemdisCategory::low},
        {"petrol", {"petrol", "diesel", "pump"}, "filling up a car with fuel at a petrol station", SemdisCategory::low},
        {"gloom", {"gloom", "payment", "exist"}, "feeling gloomy about having to make a payment", SemdisCategory::high},
        {"organ", {"organ", "empire", "comply"}, "an empire forcing people to comply with its rules", SemdisCategory::high},
    };
}

Json to_json(const ItemSet& s) {
    return Json{{"id", s.id},
                {"cue_words", {s.cue_words[0], s.cue_words[1], s.cue_words[2]}},
                {"boring_storyline", s.boring_storyline},
                {"semdis_category", std::string(to_string(s.semdis_category))}};
}

ItemSet item_set_from_json(const Json& j) {
    ItemSet s;
    try {
        s.id = j.at("id").get<std::string>();
        const auto& words = j.at("cue_words");
        if (!words.is_array() || words.size() != 3) {
            throw ValidationError("item set '" + s.id + "' must have exactly three cue words");
        }
        for (std::size_t i = 0; i < 3; ++i) s.cue_words[i] = words[i].get<std::string>();
        s.boring_storyline = j.value("boring_storyline", "");
        s.semdis_category = parse_semdis_category(j.at("semdis_category").get<std::string>());
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed item set: ") + e.what());
    }
    s.validate();
    return s;
}

std::vector<ItemSet> load_item_sets(const fs::path& path) {
    const Json j = read_json(path);
    if (!j.is_array()) throw ValidationError(path.string() + ": item-set config must be a JSON array");
    std::vector<ItemSet> sets;
    for (const auto& e : j) sets.push_back(item_set_from_json(e));
    return sets;
}

void save_item_sets(const fs::path& path, const std::vector<ItemSet>& item_sets) {
    Json j = Json::array();
    for (const auto& s : item_sets) j.push_back(to_json(s));
    write_json(path, j);
}

Json to_json(const Story& s) {
    Json j{{"id", s.id},
           {"author_kind", std::string(to_string(s.author_kind))},
           {"author_id", s.author_id},
           {"item_set", s.item_set},
           {"text", s.text}};
    if (s.sentence_count) j["sentence_count"] = *s.sentence_count;
    return j;
}

Story story_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("story record must be an object");
    Story s;
    try {
        s.id = j.at("id").get<std::string>();
        s.author_kind = parse_author_kind(j.at("author_kind").get<std::string>());
        s.author_id = j.value("author_id", "");
        s.item_set = j.at("item_set").get<std::string>();
        s.text = j.at("text").get<std::string>();
        if (j.contains("sentence_count")) s.sentence_count = j.at("sentence_count").get<int>();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed story record: ") + e.what());
    }
    if (s.id.empty()) throw ValidationError("story record with empty id");
    if (s.text.empty()) throw ValidationError("story '" + s.id + "' has empty text");
    return s;
}

Corpus load_corpus(const fs::path& path, std::vector<ItemSet> item_sets) {
    if (!fs::exists(path)) throw IoError("corpus file not found: " + path.string());
    std::unordered_set<std::string> known_sets;
    for (const auto& s : item_sets) known_sets.insert(s.id);

    std::vector<Story> stories;
    std::unordered_set<std::string> seen;
    read_jsonl(path, [&](const Json& record, std::size_t line) {
        Story story;
        try {
            story = story_from_json(record);
        } catch (const ValidationError& e) {
            throw ParseError(path.string() + ":" + std::to_string(line) + ": " + e.what(), line);
        }
        if (!known_sets.count(story.item_set)) {
            throw ValidationError(path.string() + ":" + std::to_string(line) + ": story '" + story.id +
                                  "' refers to unknown item set '" + story.item_set + "'");
        }
        if (!seen.insert(story.id).second) {
            throw ValidationError(path.string() + ":" + std::to_string(line) + ": duplicate story id '" +
                                  story.id + "'");
        }
        stories.push_back(std::move(story));
    });
    return Corpus(std::move(item_sets), std::move(stories));
}

void save_corpus(const fs::path& path, const Corpus& corpus) {
    std::vector<Json> records;
    records.reserve(corpus.size());
    for (const auto& s : corpus.stories()) records.push_back(to_json(s));
    write_jsonl(path, records);
}

FilterResult filter_by_sentence_count(const Corpus& corpus, int min_sentences, int max_sentences) {
    std::vector<Story> kept;
    for (const auto& s : corpus.stories()) {
        if (!s.sentence_count) {
            throw ValidationError("story '" + s.id + "' has no sentence count; run annotation first");
        }
        if (*s.sentence_count >= min_sentences && *s.sentence_count <= max_sentences) kept.push_back(s);
    }
    FilterResult result;
    result.removed = corpus.size() - kept.size();
    result.corpus = Corpus(corpus.item_sets(), std::move(kept));
    result.corpus.decoding = corpus.decoding;
    return result;
}

FilterResult exclude_stories(const Corpus& corpus, const std::unordered_set<std::string>& ids) {
    std::vector<Story> kept;
    for (const auto& s : corpus.stories()) {
        if (!ids.count(s.id)) kept.push_back(s);
    }
    FilterResult result;
    result.removed = corpus.size() - kept.size();
    result.corpus = Corpus(corpus.item_sets(), std::move(kept));
    result.corpus.decoding = corpus.decoding;
    return result;
}

std::unordered_set<std::string> load_exclusion_list(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open exclusion list " + path.string());
    std::unordered_set<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        ids.insert(line.substr(b, e - b + 1));
    }
    return ids;
}

namespace {

constexpr std::string_view kPromptTemplate =
    "Instructions\n"
    "You will be given three words (e.g., car, wheel, drive) and then asked to write a creative short story "
    "that contains these three words. The idea is that instead of writing a standard story such as \"I went for "
    "a drive in my car with my hands on the steering wheel.\", you come up with a novel and unique story that "
    "uses the required words in unconventional ways or settings.\n"
    "\n"
    "Write a creative short story using a maximum of five sentences. The story must include the following three "
    "words: {items}. However, the story should not be about {boring_storyline}.";

void replace_slot(std::string& text, std::string_view slot, const std::string& value) {
    const auto pos = text.find(slot);
    if (pos == std::string::npos) throw Error("prompt template lacks slot " + std::string(slot));
    text.replace(pos, slot.size(), value);
}

}  // namespace

std::string build_generation_prompt(const ItemSet& item_set) {
    item_set.validate();
    if (item_set.boring_storyline.empty()) {
        throw ValidationError("item set '" + item_set.id + "' has no boring storyline to fill the prompt");
    }
    std::string prompt(kPromptTemplate);
    replace_slot(prompt, "{items}",
                 item_set.cue_words[0] + ", " + item_set.cue_words[1] + ", " + item_set.cue_words[2]);
    replace_slot(prompt, "{boring_storyline}", item_set.boring_storyline);
    return prompt;
}

const StatisticsRow* CorpusStatistics::row(std::string_view item_set) const {
    for (const auto& r : rows) {
        if (r.item_set == item_set) return &r;
    }
    return nullptr;
}

std::string CorpusStatistics::to_csv() const {
    std::ostringstream out;
    out << "item_set,human,ai,total\n";
    for (const auto& r : rows) out << r.item_set << ',' << r.human << ',' << r.ai << ',' << r.total() << '\n';
    out << totals.item_set << ',' << totals.human << ',' << totals.ai << ',' << totals.total() << '\n';
    return out.str();
}

CorpusStatistics corpus_statistics(const Corpus& corpus) {
    CorpusStatistics stats;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& s : corpus.item_sets()) {
        index[s.id] = stats.rows.size();
        stats.rows.push_back({s.id});
    }
    for (const auto& story : corpus.stories()) {
        auto& row = stats.rows[index.at(story.item_set)];
        (story.author_kind == AuthorKind::human ? row.human : row.ai) += 1;
        (story.author_kind == AuthorKind::human ? stats.totals.human : stats.totals.ai) += 1;
    }
    return stats;
}

}  // namespace storyeval
