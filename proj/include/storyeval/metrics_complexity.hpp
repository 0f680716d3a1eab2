#pragma once

#include <map>
#include <string>

#include "storyeval/linguistics.hpp"

namespace storyeval {

struct LexicalOptions {
    /// Count proper nouns as words in length and uniqueness statistics.
    bool include_proper_nouns = true;
};

struct LexicalComplexity {
    int unique_word_count = 0;
    double avg_word_length = 0.0;
    /// Mean number of distinct words per sentence.
    double avg_sentence_length = 0.0;
    /// Mean number of words per sentence (sensitivity variant).
    double avg_sentence_length_total = 0.0;
    double flesch_reading_ease = 0.0;
};

struct PosRatios {
    double noun = 0.0;
    double adjective = 0.0;
    double pronoun = 0.0;
    double adverb = 0.0;
};

struct SyntacticComplexity {
    PosRatios pos_ratios;
    double avg_dependency_path_length = 0.0;
    double avg_constituency_tree_depth = 0.0;
};

/// 206.835 - 1.015 (words / sentences) - 84.6 (syllables / words).
double flesch_reading_ease(double words, double sentences, double syllables);

/// Throws DomainError when the story has no words.
LexicalComplexity lexical_complexity(const Annotation& annotation, const LexicalOptions& options = {});

/// POS ratios exclude punctuation from the denominator. Throws DomainError
/// when a sentence lacks a constituency tree.
SyntacticComplexity syntactic_complexity(const Annotation& annotation);

struct ComplexityRecord {
    std::string story_id;
    LexicalComplexity lexical;
    SyntacticComplexity syntactic;
    PronounProfile pronoun_profile;
};

ComplexityRecord complexity_record(const Annotation& annotation, const LexicalOptions& options = {});

Json to_json(const ComplexityRecord& record);
ComplexityRecord complexity_record_from_json(const Json& j);

}  // namespace storyeval
