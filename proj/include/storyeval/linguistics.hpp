#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "storyeval/corpus.hpp"
#include "storyeval/store.hpp"

namespace storyeval {

/// Universal POS tags.
enum class Upos { NOUN, PROPN, VERB, AUX, ADJ, ADV, PRON, DET, ADP, CCONJ, SCONJ, PART, NUM, INTJ, PUNCT, SYM, X };

/// The coarse classes the complexity metrics count.
enum class CoarsePos { noun, verb, adjective, adverb, pronoun, other };

std::string_view to_string(Upos tag);
Upos parse_upos(std::string_view text);
CoarsePos coarse_of(Upos tag);

struct Token {
    std::string text;
    std::string lemma;
    Upos upos = Upos::X;
    bool is_content_word = false;
    int syllables = 0;
    /// Index of the head token within the sentence; -1 for the root.
    int head = -1;
    std::string dep;

    bool is_punct() const noexcept { return upos == Upos::PUNCT || upos == Upos::SYM; }
    CoarsePos coarse() const noexcept { return coarse_of(upos); }
};

/// Constituency tree node. Leaves reference a token index; inner nodes
/// carry a phrase label and children in surface order.
struct ConstituencyNode {
    std::string label;
    int token = -1;
    std::vector<ConstituencyNode> children;

    bool is_leaf() const noexcept { return token >= 0; }
};

struct Sentence {
    std::string text;
    std::vector<Token> tokens;
    std::optional<ConstituencyNode> tree;

    /// Non-punctuation tokens.
    std::size_t word_count() const;
};

struct Annotation {
    std::string story_id;
    std::string annotator;
    std::vector<Sentence> sentences;

    std::size_t token_count() const;
    std::size_t word_count() const;

    /// Checks single-root, in-sentence heads, acyclicity and tree leaf order.
    /// Throws ValidationError naming the offending sentence.
    void validate() const;
};

/// Sentence-level annotation engine. A single instance is safe to share
/// across threads iff `shareable()` returns true.
class Annotator {
public:
    virtual ~Annotator() = default;
    virtual std::string name() const = 0;
    virtual std::string version() const = 0;
    virtual bool shareable() const = 0;
    /// Splits text into sentences and annotates each one.
    virtual std::vector<Sentence> annotate_text(std::string_view text) const = 0;
};

/// Deterministic English annotator built from word lists, suffix rules and
/// head-attachment rules. Output is projective; constituency trees are the
/// phrase projection of the dependency tree.
class RuleBasedAnnotator final : public Annotator {
public:
    RuleBasedAnnotator();
    /// Replaces the built-in stopword list (one word per line).
    explicit RuleBasedAnnotator(std::unordered_set<std::string> stopwords);

    std::string name() const override { return "rule-based-en"; }
    std::string version() const override { return "1.0.0"; }
    bool shareable() const override { return true; }
    std::vector<Sentence> annotate_text(std::string_view text) const override;

    /// Sentence segmentation only, returning each sentence's raw text.
    std::vector<std::string> split_sentences(std::string_view text) const;

private:
    std::optional<std::unordered_set<std::string>> stopwords_;
};

std::unordered_set<std::string> load_stopwords(const std::string& path);

/// Annotates the story and records its sentence count.
/// Throws ValidationError on empty text, or Error naming the story id and
/// sentence index when the annotator fails.
Annotation annotate(Story& story, const Annotator& annotator);

/// Deduplicated lemmas of content words in first-occurrence order.
std::vector<std::string> dominant_terms(const Annotation& annotation);
std::vector<std::string> dominant_terms(const Sentence& sentence);

/// Words on the head chain from the token up to the sentence root, both
/// ends included. Throws DomainError on a head cycle, std::out_of_range on
/// bad indices.
int dependency_path_length(const Annotation& annotation, std::size_t sentence_index, std::size_t token_index);
int dependency_path_length(const Sentence& sentence, std::size_t token_index);

/// Root-to-leaf node counts for every leaf, in leaf order.
std::vector<int> constituency_branch_depths(const Annotation& annotation, std::size_t sentence_index);
std::vector<int> constituency_branch_depths(const ConstituencyNode& root);

struct PronounProfile {
    int first = 0;
    int second = 0;
    int third_singular = 0;
    int third_plural = 0;

    int total() const noexcept { return first + second + third_singular + third_plural; }
};

PronounProfile pronoun_person_profile(const Annotation& annotation);

/// Vowel-group syllable count with silent-e correction; at least 1 for any
/// word containing a letter.
int count_syllables(std::string_view word);

Json to_json(const Annotation& annotation);
Annotation annotation_from_json(const Json& j);
Json to_json(const ConstituencyNode& node);
ConstituencyNode constituency_from_json(const Json& j);

/// Bracketed rendering, e.g. "(S (NP 0) 1 2)" with token texts.
std::string to_bracketed(const Sentence& sentence);

}  // namespace storyeval
