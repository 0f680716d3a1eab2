#include <fstream>

#include "nlp_internal.hpp"
#include "storyeval/error.hpp"

namespace storyeval {

namespace {

bool is_open_class(Upos tag) {
    return tag == Upos::NOUN || tag == Upos::PROPN || tag == Upos::VERB || tag == Upos::ADJ || tag == Upos::ADV;
}

bool has_alpha(std::string_view text) {
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c))) return true;
    }
    return false;
}

std::string sentence_text(const std::string& normalized, const std::vector<nlp::RawToken>& tokens) {
    const auto& last = tokens.back();
    const std::size_t begin = tokens.front().offset;
    const std::size_t end = last.offset + last.text.size();
    return normalized.substr(begin, end - begin);
}

}  // namespace

RuleBasedAnnotator::RuleBasedAnnotator() = default;

RuleBasedAnnotator::RuleBasedAnnotator(std::unordered_set<std::string> stopwords) : stopwords_(std::move(stopwords)) {}

std::vector<std::string> RuleBasedAnnotator::split_sentences(std::string_view text) const {
    const std::string normalized = nlp::normalize_text(text);
    std::vector<std::string> out;
    for (const auto& sentence : nlp::segment(nlp::tokenize(normalized))) out.push_back(sentence_text(normalized, sentence));
    return out;
}

std::vector<Sentence> RuleBasedAnnotator::annotate_text(std::string_view text) const {
    const std::string normalized = nlp::normalize_text(text);
    const auto raw_sentences = nlp::segment(nlp::tokenize(normalized));

    // Capitalized words seen away from sentence starts are taken as names.
    nlp::ProperNounHints hints;
    for (const auto& sentence : raw_sentences) {
        for (std::size_t i = 1; i < sentence.size(); ++i) {
            const auto& w = sentence[i].text;
            if (nlp::starts_upper(w) && w != "I" && !nlp::is_punct_text(sentence[i - 1].text)) {
                hints.insert(nlp::lowercase(w));
            }
        }
    }

    const auto& stop = stopwords_ ? *stopwords_ : nlp::lex::stopwords();
    std::vector<Sentence> out;
    out.reserve(raw_sentences.size());
    for (const auto& raw : raw_sentences) {
        std::vector<std::string> words;
        words.reserve(raw.size());
        for (const auto& t : raw) words.push_back(t.text);
        const auto tags = nlp::tag(words, hints);
        const auto arcs = nlp::parse(words, tags);

        Sentence sentence;
        sentence.text = sentence_text(normalized, raw);
        sentence.tokens.reserve(words.size());
        for (std::size_t i = 0; i < words.size(); ++i) {
            Token tok;
            tok.text = words[i];
            tok.upos = tags[i];
            tok.lemma = nlp::lemmatize(words[i], tags[i]);
            tok.is_content_word = is_open_class(tok.upos) && has_alpha(tok.text) && !stop.count(tok.lemma) &&
                                  !stop.count(nlp::lowercase(tok.text));
            tok.syllables = tok.is_punct() ? 0 : count_syllables(tok.text);
            tok.head = arcs[i].head;
            tok.dep = arcs[i].label;
            sentence.tokens.push_back(std::move(tok));
        }
        sentence.tree = nlp::build_constituency(sentence.tokens);
        out.push_back(std::move(sentence));
    }
    return out;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list: " + path);
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
        line = line.substr(start);
        if (line.empty() || line.front() == '#') continue;
        out.insert(nlp::lowercase(line));
    }
    return out;
}

Annotation annotate(Story& story, const Annotator& annotator) {
    if (story.text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ValidationError("story " + story.id + ": empty text");
    }
    Annotation annotation;
    annotation.story_id = story.id;
    annotation.annotator = annotator.name() + "@" + annotator.version();
    try {
        annotation.sentences = annotator.annotate_text(story.text);
    } catch (const std::exception& e) {
        throw Error("story " + story.id + ": annotator failed: " + e.what());
    }
    if (annotation.sentences.empty()) throw Error("story " + story.id + ": annotator returned no sentences");
    for (std::size_t s = 0; s < annotation.sentences.size(); ++s) {
        try {
            Annotation one;
            one.sentences = {annotation.sentences[s]};
            one.validate();
        } catch (const std::exception& e) {
            throw Error("story " + story.id + ", sentence " + std::to_string(s) + ": " + e.what());
        }
    }
    story.sentence_count = static_cast<int>(annotation.sentences.size());
    return annotation;
}

}  // namespace storyeval
