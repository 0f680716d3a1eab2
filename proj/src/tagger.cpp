#include <algorithm>
#include <cctype>

#include "nlp_internal.hpp"

namespace storyeval::nlp {

namespace {

using lex::contains;

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_subject_pronoun(std::string_view w) {
    return w == "i" || w == "you" || w == "we" || w == "they" || w == "he" || w == "she" || w == "it" ||
           w == "who" || w == "there" || w == "one" || w == "someone" || w == "everyone" || w == "nobody";
}

bool is_number(std::string_view w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',';
    }) && std::isdigit(static_cast<unsigned char>(w.front()));
}

bool is_symbol(std::string_view w) {
    return w.size() == 1 && std::string_view("$%&@#*+=<>/\\|~^").find(w.front()) != std::string_view::npos;
}

// Possible open-class readings of a word, plus the form it was seen in.
struct Reading {
    bool noun = false;
    bool verb = false;
    bool adj = false;
    bool adv = false;
    bool ing = false;   // verb + -ing
    bool past = false;  // verb past / participle
    bool third = false; // verb + -s
    bool unknown = false;

    int count() const { return int(noun) + int(verb) + int(adj) + int(adv); }
};

bool verb_base_of(const std::string& w, std::string_view suffix, std::string& base) {
    if (!ends_with(w, suffix) || w.size() <= suffix.size() + 1) return false;
    const std::string stem = w.substr(0, w.size() - suffix.size());
    const auto& verbs = lex::verbs();
    if (verbs.count(stem)) return base = stem, true;
    if (verbs.count(stem + "e")) return base = stem + "e", true;
    if (stem.size() > 2 && stem[stem.size() - 1] == stem[stem.size() - 2] && verbs.count(stem.substr(0, stem.size() - 1))) {
        return base = stem.substr(0, stem.size() - 1), true;
    }
    if (ends_with(stem, "i") && verbs.count(stem.substr(0, stem.size() - 1) + "y")) {
        return base = stem.substr(0, stem.size() - 1) + "y", true;
    }
    return false;
}

constexpr std::string_view kNounSuffixes[] = {"tion", "sion", "ment", "ness", "ity", "ance", "ence",
                                              "ship", "hood", "ism",  "ist",  "dom",  "ure", "age",
                                              "ery",  "cy",   "er",   "or",   "ar"};
constexpr std::string_view kAdjSuffixes[] = {"ous", "ful", "less", "ive", "able", "ible", "al", "ic",
                                             "ish", "ary", "ant", "ent",  "ese", "esque", "est"};

template <std::size_t N>
bool ends_with_any(std::string_view w, const std::string_view (&suffixes)[N]) {
    return std::any_of(std::begin(suffixes), std::end(suffixes), [&](std::string_view s) { return ends_with(w, s); });
}

Reading open_class_reading(const std::string& w) {
    Reading r;
    const auto& irr = lex::irregular_verbs();
    if (contains(lex::verbs(), w)) r.verb = true;
    if (contains(lex::nouns(), w)) r.noun = true;
    if (contains(lex::adjectives(), w)) r.adj = true;
    if (contains(lex::adverbs(), w)) r.adv = true;
    if (irr.count(w)) {
        r.verb = true;
        r.past = true;
    }
    std::string base;
    if (verb_base_of(w, "ing", base)) r.verb = r.ing = true;
    if (verb_base_of(w, "ed", base) || (ends_with(w, "ied") && contains(lex::verbs(), w.substr(0, w.size() - 3) + "y"))) {
        r.verb = r.past = true;
    }
    if (ends_with(w, "s") && !ends_with(w, "ss") && w.size() > 3) {
        const std::string s1 = w.substr(0, w.size() - 1);
        const std::string s2 = w.size() > 4 ? w.substr(0, w.size() - 2) : std::string();
        const std::string s3 = ends_with(w, "ies") ? w.substr(0, w.size() - 3) + "y" : std::string();
        const auto& verbs = lex::verbs();
        if (verbs.count(s1) || (ends_with(w, "es") && verbs.count(s2)) || (!s3.empty() && verbs.count(s3))) {
            r.verb = r.third = true;
            r.noun = true;
        }
        const auto& nouns = lex::nouns();
        if (nouns.count(s1) || (ends_with(w, "es") && nouns.count(s2)) || (!s3.empty() && nouns.count(s3)) ||
            lex::irregular_nouns().count(w)) {
            r.noun = true;
        }
    }
    if (lex::irregular_nouns().count(w)) r.noun = true;
    if (lex::irregular_adjectives().count(w)) r.adj = true;
    if (r.count() > 0) return r;

    // comparatives of known adjectives
    for (std::string_view suf : {"er", "est"}) {
        if (ends_with(w, suf) && w.size() > suf.size() + 2) {
            std::string stem = w.substr(0, w.size() - suf.size());
            const auto& adjs = lex::adjectives();
            if (adjs.count(stem) || adjs.count(stem + "e") ||
                (ends_with(stem, "i") && adjs.count(stem.substr(0, stem.size() - 1) + "y")) ||
                (stem.size() > 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
                 adjs.count(stem.substr(0, stem.size() - 1)))) {
                r.adj = true;
                return r;
            }
        }
    }

    r.unknown = true;
    const auto hyphen = w.rfind('-');
    if (hyphen != std::string::npos && hyphen + 1 < w.size()) {
        const std::string last = w.substr(hyphen + 1);
        Reading tail = open_class_reading(last);
        if (tail.ing || tail.past || ends_with(last, "ed") || ends_with(last, "ing") || tail.adj) {
            r.adj = true;
        } else {
            r.noun = true;
        }
        return r;
    }
    if (w.size() > 4 && ends_with(w, "ly") && !contains(lex::ly_non_adverbs(), w)) {
        r.adv = true;
    } else if (w.size() >= 5 && ends_with(w, "ing")) {
        r.verb = r.ing = true;
    } else if (w.size() >= 4 && ends_with(w, "ed")) {
        r.verb = r.past = true;
    } else if (ends_with_any(w, kNounSuffixes)) {
        r.noun = true;
    } else if (ends_with_any(w, kAdjSuffixes)) {
        r.adj = true;
    } else if (w.size() > 3 && ends_with(w, "y")) {
        const std::string stem = w.substr(0, w.size() - 1);
        const bool doubled = stem.size() > 2 && stem[stem.size() - 1] == stem[stem.size() - 2];
        if (contains(lex::nouns(), stem) || contains(lex::verbs(), stem) ||
            (doubled && contains(lex::nouns(), stem.substr(0, stem.size() - 1)))) {
            r.adj = true;
        } else {
            r.noun = true;
        }
    } else {
        r.noun = true;
    }
    return r;
}

bool is_closed_class(const std::string& w) {
    return contains(lex::determiners(), w) || contains(lex::personal_pronouns(), w) ||
           contains(lex::possessive_pronouns(), w) || contains(lex::other_pronouns(), w) ||
           contains(lex::wh_words(), w) || contains(lex::prepositions(), w) || contains(lex::coordinators(), w) ||
           contains(lex::subordinators(), w) || contains(lex::modals(), w) || contains(lex::be_forms(), w) ||
           contains(lex::have_forms(), w) || contains(lex::do_forms(), w) || w == "not" || w == "n't" ||
           w == "to" || w == "'s";
}

class Tagger {
public:
    Tagger(const std::vector<std::string>& words, const ProperNounHints& hints) : words_(words), hints_(hints) {
        lower_.reserve(words.size());
        for (const auto& w : words) lower_.push_back(lowercase(w));
        tags_.assign(words.size(), Upos::X);
        readings_.resize(words.size());
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (is_word_text(words[i]) && !is_closed_class(lower_[i])) readings_[i] = open_class_reading(lower_[i]);
        }
    }

    std::vector<Upos> run() {
        for (std::size_t i = 0; i < words_.size(); ++i) tags_[i] = decide(i);
        return tags_;
    }

private:
    const std::string& low(std::size_t i) const { return lower_[i]; }
    bool valid(long i) const { return i >= 0 && i < long(words_.size()); }

    bool sentence_initial(std::size_t i) const {
        for (std::size_t k = 0; k < i; ++k) {
            if (is_word_text(words_[k])) return false;
        }
        return true;
    }

    // Likely head of a noun phrase starting at i (used for look-ahead).
    bool nounish(long i) const {
        if (!valid(i)) return false;
        const auto& w = low(i);
        if (!is_word_text(w)) return false;
        if (is_closed_class(w)) return false;
        const auto& r = readings_[i];
        if (starts_upper(words_[i]) && !sentence_initial(i)) return true;
        if (r.adv && !r.adj && !r.noun) return false;
        return r.noun || r.adj || (r.unknown && !r.verb) || is_number(w) || contains(lex::number_words(), w);
    }

    bool verbish(long i) const {
        if (!valid(i)) return false;
        const auto& w = low(i);
        if (contains(lex::modals(), w) || contains(lex::be_forms(), w) || contains(lex::have_forms(), w) ||
            contains(lex::do_forms(), w)) {
            return true;
        }
        return !is_closed_class(w) && readings_[i].verb;
    }

    // Whether a verb appears within `span` tokens after i (before punctuation).
    bool verb_ahead(std::size_t i, std::size_t span) const {
        for (std::size_t k = i + 1; k < words_.size() && k <= i + span; ++k) {
            if (is_punct_text(words_[k])) return false;
            if (verbish(long(k))) return true;
        }
        return false;
    }

    Upos decide(std::size_t i) {
        const std::string& surface = words_[i];
        const std::string& w = low(i);
        const long next = long(i) + 1;
        const std::string next_w = valid(next) ? low(next) : std::string();
        const Upos prev = i > 0 ? tags_[i - 1] : Upos::X;
        const std::string prev_w = i > 0 ? low(i - 1) : std::string();

        if (is_symbol(surface)) return Upos::SYM;
        if (is_punct_text(surface)) return Upos::PUNCT;
        if (is_number(w)) return Upos::NUM;
        if (w == "i") return Upos::PRON;

        const bool initial = sentence_initial(i);
        if (starts_upper(surface) && !is_closed_class(w) && !contains(lex::interjections(), w)) {
            if (!initial) return Upos::PROPN;
            if (hints_.count(w)) return Upos::PROPN;
            const auto& r = readings_[i];
            if (r.unknown && r.noun && !ends_with(w, "s")) return Upos::PROPN;
        }

        if (w == "not" || w == "n't") return Upos::PART;
        if (w == "'s") {
            if (is_subject_pronoun(prev_w) || prev_w == "that" || prev_w == "what" || prev_w == "here" ||
                prev_w == "where" || prev_w == "how" || prev_w == "let") {
                return prev_w == "let" ? Upos::PRON : Upos::AUX;
            }
            return Upos::PART;
        }
        if (w == "to") {
            if (valid(next) && verbish(next) && !contains(lex::determiners(), next_w) &&
                !contains(lex::possessive_pronouns(), next_w) && !contains(lex::be_forms(), next_w) &&
                !contains(lex::personal_pronouns(), next_w)) {
                return Upos::PART;
            }
            if (next_w == "be" || next_w == "have" || next_w == "do") return Upos::PART;
            return Upos::ADP;
        }
        if (contains(lex::modals(), w)) return Upos::AUX;
        if (contains(lex::be_forms(), w)) return Upos::AUX;
        if (contains(lex::have_forms(), w)) {
            for (long k = next; valid(k) && k <= next + 2; ++k) {
                const auto& r = readings_[k];
                if (r.past || low(k) == "been" || low(k) == "got") return Upos::AUX;
                if (!(low(k) == "not" || low(k) == "n't" || r.adv)) break;
            }
            return Upos::VERB;
        }
        if (contains(lex::do_forms(), w)) {
            if (next_w == "not" || next_w == "n't") return Upos::AUX;
            if (valid(next) && (contains(lex::personal_pronouns(), next_w) || readings_[next].verb) &&
                !readings_[next].past && !readings_[next].ing) {
                return Upos::AUX;
            }
            return Upos::VERB;
        }
        if (contains(lex::personal_pronouns(), w) || contains(lex::possessive_pronouns(), w)) return Upos::PRON;
        if (w == "one") return nounish(next) ? Upos::NUM : Upos::PRON;
        if (contains(lex::other_pronouns(), w)) return Upos::PRON;
        if (w == "that") {
            if (prev == Upos::NOUN || prev == Upos::PROPN) return Upos::PRON;
            if (nounish(next) && prev != Upos::VERB && !verbish(next)) return Upos::DET;
            if (prev == Upos::VERB || prev == Upos::ADJ || prev == Upos::AUX) return Upos::SCONJ;
            return initial && !verbish(next) ? Upos::DET : Upos::PRON;
        }
        if (w == "which" || w == "what" || w == "whatever" || w == "whichever") {
            return nounish(next) && !verbish(next) ? Upos::DET : Upos::PRON;
        }
        if (w == "who" || w == "whom" || w == "whose" || w == "whoever") return Upos::PRON;
        if (w == "where" || w == "when" || w == "why" || w == "how") return Upos::ADV;
        if (w == "no") return nounish(next) ? Upos::DET : Upos::INTJ;
        if (w == "so") return is_subject_pronoun(next_w) ? Upos::SCONJ : Upos::ADV;
        if (w == "once") {
            if (next_w == "upon" || !valid(next) || is_punct_text(next_w)) return Upos::ADV;
            return is_subject_pronoun(next_w) || verb_ahead(i, 3) ? Upos::SCONJ : Upos::ADV;
        }
        if (w == "as" || w == "before" || w == "after" || w == "since" || w == "until" || w == "till") {
            if (is_subject_pronoun(next_w)) return Upos::SCONJ;
            if (contains(lex::determiners(), next_w) && verb_ahead(i + 1, 3)) return Upos::SCONJ;
            return Upos::ADP;
        }
        if (w == "like") {
            if (is_subject_pronoun(prev_w) || prev_w == "to" || contains(lex::modals(), prev_w) ||
                contains(lex::do_forms(), prev_w)) {
                return Upos::VERB;
            }
            return Upos::ADP;
        }
        if (contains(lex::determiners(), w)) {
            if ((w == "all" || w == "both" || w == "each" || w == "either" || w == "neither" || w == "many" ||
                 w == "much" || w == "few" || w == "several" || w == "enough" || w == "half") &&
                !nounish(next) && !contains(lex::determiners(), next_w) && !contains(lex::possessive_pronouns(), next_w)) {
                return (w == "much" || w == "enough") ? Upos::ADV : Upos::PRON;
            }
            return Upos::DET;
        }
        if (contains(lex::coordinators(), w)) return Upos::CCONJ;
        if (contains(lex::subordinators(), w)) return Upos::SCONJ;
        if (contains(lex::prepositions(), w)) return Upos::ADP;
        if (contains(lex::number_words(), w)) return Upos::NUM;
        if (contains(lex::interjections(), w) && (!valid(next) || is_punct_text(next_w) || initial)) {
            if (!readings_[i].verb || !valid(next) || is_punct_text(next_w)) return Upos::INTJ;
        }
        return resolve_open(i, prev, prev_w, next, initial);
    }

    Upos resolve_open(std::size_t i, Upos prev, const std::string& prev_w, long next, bool initial) {
        const Reading& r = readings_[i];
        const std::string& w = low(i);
        const bool next_nounish = nounish(next);
        const bool after_det = prev == Upos::DET || prev == Upos::NUM || prev == Upos::ADJ ||
                               (prev == Upos::PRON && contains(lex::possessive_pronouns(), prev_w)) ||
                               (prev == Upos::PART && prev_w == "'s");
        const bool after_be = contains(lex::be_forms(), prev_w) ||
                              (prev == Upos::ADV && i >= 2 && contains(lex::be_forms(), low(i - 2)));
        const bool verb_context =
            prev_w == "to" || contains(lex::modals(), prev_w) || (prev == Upos::AUX && !after_be) ||
            (prev == Upos::PRON && is_subject_pronoun(prev_w) && prev_w != "it") || prev_w == "it" ||
            (prev == Upos::ADV && i >= 2 && (is_subject_pronoun(low(i - 2)) || contains(lex::modals(), low(i - 2)))) ||
            prev_w == "n't" || prev_w == "not";

        // a suffix-guessed adjective closing a determiner phrase is the noun
        // ("an ancient library")
        if (r.count() == 1 && r.adj && after_det && !next_nounish && !contains(lex::adjectives(), w)) {
            return Upos::NOUN;
        }
        if (r.count() == 1 && !r.unknown) {
            if (r.adv) return Upos::ADV;
            if (r.adj) return Upos::ADJ;
            if (r.noun) return Upos::NOUN;
        }

        if (r.verb && (r.ing || r.past)) {
            if (after_det && next_nounish) return Upos::ADJ;
            if (r.ing && prev == Upos::ADP && next_nounish && !verbish(next)) return Upos::ADJ;
            if (after_det && r.ing && !r.past) return Upos::NOUN;
            if (after_det && r.noun) return Upos::NOUN;
            if (r.past && prev == Upos::DET && r.adj) return Upos::ADJ;
            return Upos::VERB;
        }

        if (r.verb && r.third) {
            if (after_det || prev == Upos::ADP) return Upos::NOUN;
            if (prev == Upos::NOUN || prev == Upos::PROPN || (prev == Upos::PRON && is_subject_pronoun(prev_w)) ||
                prev_w == "who" || prev_w == "which" || prev_w == "that") {
                return Upos::VERB;
            }
            if (prev == Upos::ADV && i >= 2 && (tags_[i - 2] == Upos::NOUN || tags_[i - 2] == Upos::PRON)) {
                return Upos::VERB;
            }
            return Upos::NOUN;
        }

        if (r.verb) {
            if (verb_context) return Upos::VERB;
            if (after_det) return r.adj && next_nounish ? Upos::ADJ : (r.noun || !r.adj ? Upos::NOUN : Upos::ADJ);
            if (prev == Upos::ADP) return r.noun || !r.adj ? Upos::NOUN : Upos::ADJ;
            if (after_be && r.adj) return Upos::ADJ;
            if (initial && (!valid(next) || !verbish(next))) return Upos::VERB;
            if (prev == Upos::CCONJ && i >= 2) {
                // coordination keeps the category of the left conjunct
                for (long k = long(i) - 2; k >= 0; --k) {
                    if (tags_[k] == Upos::VERB) return Upos::VERB;
                    if (tags_[k] == Upos::NOUN || tags_[k] == Upos::PROPN) break;
                }
            }
            if (r.noun) return Upos::NOUN;
            if (r.adj) return Upos::ADJ;
            return Upos::VERB;
        }

        if (r.adj && r.adv) {
            if (next_nounish && !verbish(next)) return Upos::ADJ;
            if (after_be) return Upos::ADJ;
            if (after_det) return r.noun ? Upos::NOUN : Upos::ADJ;
            return Upos::ADV;
        }
        if (r.adj && r.noun) {
            if (next_nounish && valid(next) && !readings_[next].adv) return Upos::ADJ;
            if (after_be && prev != Upos::DET) return Upos::ADJ;
            return Upos::NOUN;
        }
        if (r.noun && r.adv) {
            if (after_det) return Upos::NOUN;
            return Upos::ADV;
        }
        if (r.adv) return Upos::ADV;
        if (r.adj) return Upos::ADJ;
        (void)w;
        return Upos::NOUN;
    }

    const std::vector<std::string>& words_;
    const ProperNounHints& hints_;
    std::vector<std::string> lower_;
    std::vector<Upos> tags_;
    std::vector<Reading> readings_;
};

}  // namespace

std::vector<Upos> tag(const std::vector<std::string>& words, const ProperNounHints& hints) {
    return Tagger(words, hints).run();
}

}  // namespace storyeval::nlp
