#include "storyeval/metrics_complexity.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_set>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c); });
    return out;
}

bool counts_as_word(const Token& t, const LexicalOptions& options) {
    if (t.is_punct()) return false;
    return options.include_proper_nouns || t.upos != Upos::PROPN;
}

// Characters, not bytes: UTF-8 continuation bytes are skipped.
std::size_t char_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

double flesch_reading_ease(double words, double sentences, double syllables) {
    if (words <= 0 || sentences <= 0) throw DomainError("Flesch reading ease needs at least one word and sentence");
    return 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
}

LexicalComplexity lexical_complexity(const Annotation& annotation, const LexicalOptions& options) {
    std::unordered_set<std::string> unique;
    std::size_t words = 0, chars = 0, syllables = 0;
    double distinct_per_sentence = 0.0;
    double words_per_sentence = 0.0;
    for (const auto& s : annotation.sentences) {
        std::unordered_set<std::string> in_sentence;
        std::size_t sentence_words = 0;
        for (const auto& t : s.tokens) {
            if (!counts_as_word(t, options)) continue;
            const std::string w = lower(t.text);
            unique.insert(w);
            in_sentence.insert(w);
            ++words;
            ++sentence_words;
            chars += char_length(t.text);
            syllables += static_cast<std::size_t>(t.syllables);
        }
        distinct_per_sentence += static_cast<double>(in_sentence.size());
        words_per_sentence += static_cast<double>(sentence_words);
    }
    if (words == 0) throw DomainError("story " + annotation.story_id + " has no words");
    const double sentences = static_cast<double>(annotation.sentences.size());
    LexicalComplexity out;
    out.unique_word_count = static_cast<int>(unique.size());
    out.avg_word_length = static_cast<double>(chars) / static_cast<double>(words);
    out.avg_sentence_length = distinct_per_sentence / sentences;
    out.avg_sentence_length_total = words_per_sentence / sentences;
    out.flesch_reading_ease =
        flesch_reading_ease(static_cast<double>(words), sentences, static_cast<double>(syllables));
    return out;
}

SyntacticComplexity syntactic_complexity(const Annotation& annotation) {
    SyntacticComplexity out;
    if (annotation.sentences.empty()) throw DomainError("story " + annotation.story_id + " has no sentences");
    std::size_t path_words = 0;
    double path_sum = 0.0;
    double depth_sum = 0.0;
    std::size_t ratio_sentences = 0;
    for (std::size_t si = 0; si < annotation.sentences.size(); ++si) {
        const auto& s = annotation.sentences[si];
        std::size_t words = 0, nouns = 0, adjs = 0, prons = 0, advs = 0;
        for (std::size_t ti = 0; ti < s.tokens.size(); ++ti) {
            const auto& t = s.tokens[ti];
            if (t.is_punct()) continue;
            ++words;
            switch (t.coarse()) {
                case CoarsePos::noun: ++nouns; break;
                case CoarsePos::adjective: ++adjs; break;
                case CoarsePos::pronoun: ++prons; break;
                case CoarsePos::adverb: ++advs; break;
                default: break;
            }
            path_sum += dependency_path_length(s, ti);
            ++path_words;
        }
        if (words > 0) {
            const double w = static_cast<double>(words);
            out.pos_ratios.noun += static_cast<double>(nouns) / w;
            out.pos_ratios.adjective += static_cast<double>(adjs) / w;
            out.pos_ratios.pronoun += static_cast<double>(prons) / w;
            out.pos_ratios.adverb += static_cast<double>(advs) / w;
            ++ratio_sentences;
        }
        const auto depths = constituency_branch_depths(annotation, si);
        depth_sum += std::accumulate(depths.begin(), depths.end(), 0.0) / static_cast<double>(depths.size());
    }
    if (ratio_sentences > 0) {
        const double n = static_cast<double>(ratio_sentences);
        out.pos_ratios.noun /= n;
        out.pos_ratios.adjective /= n;
        out.pos_ratios.pronoun /= n;
        out.pos_ratios.adverb /= n;
    }
    out.avg_dependency_path_length = path_words > 0 ? path_sum / static_cast<double>(path_words) : 1.0;
    out.avg_constituency_tree_depth = depth_sum / static_cast<double>(annotation.sentences.size());
    return out;
}

ComplexityRecord complexity_record(const Annotation& annotation, const LexicalOptions& options) {
    ComplexityRecord r;
    r.story_id = annotation.story_id;
    r.lexical = lexical_complexity(annotation, options);
    r.syntactic = syntactic_complexity(annotation);
    r.pronoun_profile = pronoun_person_profile(annotation);
    return r;
}

Json to_json(const ComplexityRecord& r) {
    const auto& p = r.syntactic.pos_ratios;
    return Json{{"story_id", r.story_id},
                {"unique_word_count", r.lexical.unique_word_count},
                {"avg_word_length", r.lexical.avg_word_length},
                {"avg_sentence_length", r.lexical.avg_sentence_length},
                {"avg_sentence_length_total", r.lexical.avg_sentence_length_total},
                {"flesch_reading_ease", r.lexical.flesch_reading_ease},
                {"pos_ratios", {{"noun", p.noun}, {"adjective", p.adjective}, {"pronoun", p.pronoun}, {"adverb", p.adverb}}},
                {"avg_dependency_path_length", r.syntactic.avg_dependency_path_length},
                {"avg_constituency_tree_depth", r.syntactic.avg_constituency_tree_depth},
                {"pronoun_profile",
                 {{"first", r.pronoun_profile.first},
                  {"second", r.pronoun_profile.second},
                  {"third_singular", r.pronoun_profile.third_singular},
                  {"third_plural", r.pronoun_profile.third_plural}}}};
}

ComplexityRecord complexity_record_from_json(const Json& j) {
    ComplexityRecord r;
    r.story_id = j.at("story_id").get<std::string>();
    r.lexical.unique_word_count = j.at("unique_word_count").get<int>();
    r.lexical.avg_word_length = j.at("avg_word_length").get<double>();
    r.lexical.avg_sentence_length = j.at("avg_sentence_length").get<double>();
    r.lexical.avg_sentence_length_total = j.value("avg_sentence_length_total", 0.0);
    r.lexical.flesch_reading_ease = j.at("flesch_reading_ease").get<double>();
    const auto& p = j.at("pos_ratios");
    r.syntactic.pos_ratios = {p.at("noun").get<double>(), p.at("adjective").get<double>(),
                              p.at("pronoun").get<double>(), p.at("adverb").get<double>()};
    r.syntactic.avg_dependency_path_length = j.at("avg_dependency_path_length").get<double>();
    r.syntactic.avg_constituency_tree_depth = j.at("avg_constituency_tree_depth").get<double>();
    const auto& pp = j.at("pronoun_profile");
    r.pronoun_profile = {pp.at("first").get<int>(), pp.at("second").get<int>(), pp.at("third_singular").get<int>(),
                         pp.at("third_plural").get<int>()};
    return r;
}

}  // namespace storyeval
