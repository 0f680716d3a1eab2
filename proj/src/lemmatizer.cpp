#include "nlp_internal.hpp"

namespace storyeval::nlp {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::string chop(const std::string& w, std::size_t n) { return w.substr(0, w.size() - n); }

// Recovers a verb base from an inflected stem ("mak" -> "make",
// "runn" -> "run", "carri" -> "carry").
std::string verb_stem(const std::string& stem) {
    const auto& verbs = lex::verbs();
    if (verbs.count(stem)) return stem;
    if (verbs.count(stem + "e")) return stem + "e";
    if (stem.size() > 2 && stem.back() == stem[stem.size() - 2] && verbs.count(chop(stem, 1))) return chop(stem, 1);
    if (ends_with(stem, "i") && verbs.count(chop(stem, 1) + "y")) return chop(stem, 1) + "y";
    // unknown verbs: undo doubling of a final consonant, restore e after
    // consonant + v/z/c/g/u clusters
    if (stem.size() > 2 && stem.back() == stem[stem.size() - 2] && !is_vowel(stem.back()) && stem.back() != 'l' &&
        stem.back() != 's' && stem.back() != 'z' && stem.back() != 'f') {
        return chop(stem, 1);
    }
    if (ends_with(stem, "i")) return chop(stem, 1) + "y";
    if (ends_with(stem, "v") || ends_with(stem, "z") || ends_with(stem, "at") || ends_with(stem, "iz") ||
        ends_with(stem, "us") || ends_with(stem, "rg") || ends_with(stem, "dg") || ends_with(stem, "rc") ||
        ends_with(stem, "nc") || (ends_with(stem, "ng") && !ends_with(stem, "ing")) ||
        (stem.size() > 3 && stem.back() == 'l' && !is_vowel(stem[stem.size() - 2]) && stem[stem.size() - 2] != 'l' &&
         stem[stem.size() - 2] != 'r')) {
        return stem + "e";
    }
    return stem;
}

std::string lemmatize_verb(const std::string& w) {
    const auto& irr = lex::irregular_verbs();
    if (auto it = irr.find(w); it != irr.end()) return it->second;
    if (lex::verbs().count(w)) return w;
    if (w.size() > 4 && ends_with(w, "ing")) return verb_stem(chop(w, 3));
    if (w.size() > 3 && ends_with(w, "ied")) return chop(w, 3) + "y";
    if (w.size() > 3 && ends_with(w, "ed")) {
        const std::string stem = chop(w, 2);
        if (lex::verbs().count(chop(w, 1))) return chop(w, 1);
        return verb_stem(stem);
    }
    if (w.size() > 3 && ends_with(w, "ies")) return chop(w, 3) + "y";
    if (w.size() > 3 && ends_with(w, "es")) {
        if (lex::verbs().count(chop(w, 2))) return chop(w, 2);
        if (lex::verbs().count(chop(w, 1))) return chop(w, 1);
        if (ends_with(w, "shes") || ends_with(w, "ches") || ends_with(w, "sses") || ends_with(w, "xes") ||
            ends_with(w, "zzes") || ends_with(w, "oes")) {
            return chop(w, 2);
        }
        return chop(w, 1);
    }
    if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us")) return chop(w, 1);
    return w;
}

std::string lemmatize_noun(const std::string& w) {
    const auto& irr = lex::irregular_nouns();
    if (auto it = irr.find(w); it != irr.end()) return it->second;
    if (lex::nouns().count(w)) return w;
    if (w.size() <= 3 || !ends_with(w, "s") || ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) {
        return w;
    }
    if (ends_with(w, "ies") && w.size() > 4) return chop(w, 3) + "y";
    if (ends_with(w, "ves") && lex::nouns().count(chop(w, 3) + "f")) return chop(w, 3) + "f";
    if (ends_with(w, "ves") && lex::nouns().count(chop(w, 3) + "fe")) return chop(w, 3) + "fe";
    if (ends_with(w, "es")) {
        if (lex::nouns().count(chop(w, 2))) return chop(w, 2);
        if (lex::nouns().count(chop(w, 1))) return chop(w, 1);
        if (ends_with(w, "shes") || ends_with(w, "ches") || ends_with(w, "sses") || ends_with(w, "xes") ||
            ends_with(w, "zes")) {
            return chop(w, 2);
        }
    }
    return chop(w, 1);
}

std::string lemmatize_adjective(const std::string& w) {
    const auto& irr = lex::irregular_adjectives();
    if (auto it = irr.find(w); it != irr.end()) return it->second;
    const auto& adjs = lex::adjectives();
    if (adjs.count(w)) return w;
    for (std::size_t n : {std::size_t(3), std::size_t(2)}) {
        if (w.size() <= n + 2) continue;
        const std::string_view suffix = n == 3 ? "est" : "er";
        if (!ends_with(w, suffix)) continue;
        const std::string stem = chop(w, n);
        if (adjs.count(stem)) return stem;
        if (adjs.count(stem + "e")) return stem + "e";
        if (ends_with(stem, "i") && adjs.count(chop(stem, 1) + "y")) return chop(stem, 1) + "y";
        if (stem.size() > 2 && stem.back() == stem[stem.size() - 2] && adjs.count(chop(stem, 1))) return chop(stem, 1);
    }
    return w;
}

}  // namespace

std::string lemmatize(std::string_view word, Upos tag) {
    const std::string w = lowercase(word);
    switch (tag) {
        case Upos::VERB:
        case Upos::AUX:
            return lemmatize_verb(w);
        case Upos::NOUN:
            return lemmatize_noun(w);
        case Upos::ADJ:
            return lemmatize_adjective(w);
        case Upos::PART:
            if (w == "n't") return "not";
            return w;
        case Upos::PRON:
            if (w == "i") return "I";
            return w;
        default:
            return w;
    }
}

}  // namespace storyeval::nlp
