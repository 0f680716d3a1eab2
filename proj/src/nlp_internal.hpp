// Internal pieces of the rule-based annotator.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "storyeval/linguistics.hpp"

namespace storyeval::nlp {

// ---- lexicon ---------------------------------------------------------------

namespace lex {

using WordSet = std::unordered_set<std::string>;

const WordSet& stopwords();
const WordSet& determiners();
const WordSet& personal_pronouns();
const WordSet& possessive_pronouns();
const WordSet& other_pronouns();
const WordSet& wh_words();
const WordSet& prepositions();
const WordSet& particles();  // up, out, off, ... when verb particles
const WordSet& coordinators();
const WordSet& subordinators();
const WordSet& modals();
const WordSet& be_forms();
const WordSet& have_forms();
const WordSet& do_forms();
const WordSet& number_words();
const WordSet& interjections();
const WordSet& adverbs();
const WordSet& adjectives();
const WordSet& nouns();
const WordSet& verbs();           // base forms
const WordSet& ly_non_adverbs();  // words ending in -ly that are not adverbs
const WordSet& abbreviations();   // tokens that keep their trailing period

/// Past / participle / irregular present forms mapped to the base verb.
const std::unordered_map<std::string, std::string>& irregular_verbs();
const std::unordered_map<std::string, std::string>& irregular_nouns();
const std::unordered_map<std::string, std::string>& irregular_adjectives();

bool contains(const WordSet& set, std::string_view word);

}  // namespace lex

// ---- tokenization and segmentation ----------------------------------------

struct RawToken {
    std::string text;
    std::size_t offset = 0;   // byte offset in the source text
    bool newline_before = false;
};

/// Folds curly quotes, dashes and ellipses to ASCII. Idempotent.
std::string normalize_text(std::string_view text);

/// Offsets refer to normalize_text(text).
std::vector<RawToken> tokenize(std::string_view text);

/// Groups tokens into sentences.
std::vector<std::vector<RawToken>> segment(const std::vector<RawToken>& tokens);

bool is_punct_text(std::string_view text);
bool is_word_text(std::string_view text);
std::string lowercase(std::string_view text);
bool starts_upper(std::string_view text);

// ---- tagging, lemmas, parsing ---------------------------------------------

/// Words capitalized somewhere other than sentence start, lowercased.
using ProperNounHints = std::unordered_set<std::string>;

std::vector<Upos> tag(const std::vector<std::string>& words, const ProperNounHints& hints);

std::string lemmatize(std::string_view word, Upos tag);

struct Arc {
    int head = -1;
    std::string label;
};

/// Projective dependency arcs for one tagged sentence.
std::vector<Arc> parse(const std::vector<std::string>& words, const std::vector<Upos>& tags);

/// Phrase-structure projection of a projective dependency tree.
ConstituencyNode build_constituency(const std::vector<Token>& tokens);

}  // namespace storyeval::nlp
