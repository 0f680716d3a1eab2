#include "storyeval/linguistics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <unordered_set>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

constexpr std::array<std::string_view, 17> kUposNames = {"NOUN", "PROPN", "VERB", "AUX",  "ADJ",  "ADV",
                                                        "PRON", "DET",   "ADP",  "CCONJ", "SCONJ", "PART",
                                                        "NUM",  "INTJ",  "PUNCT", "SYM",  "X"};

}  // namespace

std::string_view to_string(Upos tag) { return kUposNames[static_cast<std::size_t>(tag)]; }

Upos parse_upos(std::string_view text) {
    for (std::size_t i = 0; i < kUposNames.size(); ++i) {
        if (kUposNames[i] == text) return static_cast<Upos>(i);
    }
    throw ValidationError("unknown POS tag: " + std::string(text));
}

CoarsePos coarse_of(Upos tag) {
    switch (tag) {
        case Upos::NOUN:
        case Upos::PROPN: return CoarsePos::noun;
        case Upos::VERB:
        case Upos::AUX: return CoarsePos::verb;
        case Upos::ADJ: return CoarsePos::adjective;
        case Upos::ADV: return CoarsePos::adverb;
        case Upos::PRON: return CoarsePos::pronoun;
        default: return CoarsePos::other;
    }
}

std::size_t Sentence::word_count() const {
    return static_cast<std::size_t>(
        std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return !t.is_punct(); }));
}

std::size_t Annotation::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
}

std::size_t Annotation::word_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.word_count();
    return n;
}

namespace {

void collect_leaves(const ConstituencyNode& node, std::vector<int>& out) {
    if (node.is_leaf()) {
        out.push_back(node.token);
        return;
    }
    for (const auto& child : node.children) collect_leaves(child, out);
}

}  // namespace

void Annotation::validate() const {
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        const auto& sentence = sentences[s];
        const std::string where = "sentence " + std::to_string(s);
        const int n = static_cast<int>(sentence.tokens.size());
        if (n == 0) throw ValidationError(where + ": no tokens");
        int roots = 0;
        for (int i = 0; i < n; ++i) {
            const int h = sentence.tokens[i].head;
            if (h == -1) {
                ++roots;
            } else if (h < 0 || h >= n || h == i) {
                throw ValidationError(where + ": token " + std::to_string(i) + " has head outside the sentence");
            }
        }
        if (roots != 1) throw ValidationError(where + ": expected one root, found " + std::to_string(roots));
        for (int i = 0; i < n; ++i) dependency_path_length(sentence, static_cast<std::size_t>(i));
        if (sentence.tree) {
            std::vector<int> leaves;
            collect_leaves(*sentence.tree, leaves);
            std::vector<int> expected(n);
            for (int i = 0; i < n; ++i) expected[i] = i;
            if (leaves != expected) throw ValidationError(where + ": tree leaves do not match tokens");
        }
    }
}

std::vector<std::string> dominant_terms(const Sentence& sentence) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& t : sentence.tokens) {
        if (t.is_content_word && seen.insert(t.lemma).second) out.push_back(t.lemma);
    }
    return out;
}

std::vector<std::string> dominant_terms(const Annotation& annotation) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& s : annotation.sentences) {
        for (const auto& t : s.tokens) {
            if (t.is_content_word && seen.insert(t.lemma).second) out.push_back(t.lemma);
        }
    }
    return out;
}

int dependency_path_length(const Sentence& sentence, std::size_t token_index) {
    const auto& tokens = sentence.tokens;
    if (token_index >= tokens.size()) throw std::out_of_range("token index out of range");
    int length = 1;
    int cur = static_cast<int>(token_index);
    while (tokens[cur].head >= 0) {
        cur = tokens[cur].head;
        if (cur >= static_cast<int>(tokens.size())) throw DomainError("head index outside the sentence");
        if (++length > static_cast<int>(tokens.size())) throw DomainError("dependency heads form a cycle");
    }
    return length;
}

int dependency_path_length(const Annotation& annotation, std::size_t sentence_index, std::size_t token_index) {
    return dependency_path_length(annotation.sentences.at(sentence_index), token_index);
}

std::vector<int> constituency_branch_depths(const ConstituencyNode& root) {
    std::vector<int> out;
    std::function<void(const ConstituencyNode&, int)> walk = [&](const ConstituencyNode& node, int depth) {
        if (node.is_leaf()) {
            out.push_back(depth);
            return;
        }
        for (const auto& child : node.children) walk(child, depth + 1);
    };
    walk(root, 1);
    return out;
}

std::vector<int> constituency_branch_depths(const Annotation& annotation, std::size_t sentence_index) {
    const auto& sentence = annotation.sentences.at(sentence_index);
    if (!sentence.tree) {
        throw DomainError("sentence " + std::to_string(sentence_index) + " of " + annotation.story_id +
                          " has no constituency tree");
    }
    return constituency_branch_depths(*sentence.tree);
}

PronounProfile pronoun_person_profile(const Annotation& annotation) {
    static const std::unordered_set<std::string> first{"i",    "me",  "my",        "mine",  "myself", "we",
                                                       "us",   "our", "ours",      "ourselves"};
    static const std::unordered_set<std::string> second{"you", "your", "yours", "yourself", "yourselves"};
    static const std::unordered_set<std::string> third_singular{"he",  "him",  "his",    "himself", "she",
                                                                "her", "hers", "herself", "it",     "its",
                                                                "itself"};
    static const std::unordered_set<std::string> third_plural{"they", "them", "their", "theirs", "themselves"};
    PronounProfile p;
    for (const auto& s : annotation.sentences) {
        for (const auto& t : s.tokens) {
            std::string w = t.text;
            std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
            if (first.count(w))
                ++p.first;
            else if (second.count(w))
                ++p.second;
            else if (third_singular.count(w))
                ++p.third_singular;
            else if (third_plural.count(w))
                ++p.third_plural;
        }
    }
    return p;
}

int count_syllables(std::string_view word) {
    std::string w;
    for (char c : word) {
        if (std::isalpha(static_cast<unsigned char>(c))) w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (w.empty()) return 0;
    auto vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; };
    int count = 0;
    bool prev = false;
    for (char c : w) {
        const bool v = vowel(c);
        if (v && !prev) ++count;
        prev = v;
    }
    // silent final e ("make"), but not "-le" after a consonant ("table")
    const std::size_t n = w.size();
    if (n > 2 && w[n - 1] == 'e' && !vowel(w[n - 2]) && !(w[n - 2] == 'l' && !vowel(w[n - 3]))) --count;
    // "-es"/"-ed" endings rarely add a syllable unless after t/d or sibilants
    if (n > 3 && w[n - 2] == 'e' && (w[n - 1] == 'd' || w[n - 1] == 's') && !vowel(w[n - 3])) {
        const char c = w[n - 3];
        const bool voiced = w[n - 1] == 'd' ? (c == 't' || c == 'd')
                                            : (c == 's' || c == 'x' || c == 'z' || c == 'h' || c == 'c' || c == 'g');
        if (!voiced) --count;
    }
    return std::max(count, 1);
}

Json to_json(const ConstituencyNode& node) {
    if (node.is_leaf()) return Json{{"label", node.label}, {"token", node.token}};
    Json children = Json::array();
    for (const auto& c : node.children) children.push_back(to_json(c));
    return Json{{"label", node.label}, {"children", std::move(children)}};
}

ConstituencyNode constituency_from_json(const Json& j) {
    ConstituencyNode node;
    node.label = j.at("label").get<std::string>();
    if (j.contains("token")) {
        node.token = j.at("token").get<int>();
        return node;
    }
    for (const auto& c : j.at("children")) node.children.push_back(constituency_from_json(c));
    return node;
}

Json to_json(const Annotation& annotation) {
    Json sentences = Json::array();
    for (const auto& s : annotation.sentences) {
        Json tokens = Json::array();
        for (const auto& t : s.tokens) {
            tokens.push_back(Json{{"text", t.text},
                                  {"lemma", t.lemma},
                                  {"upos", to_string(t.upos)},
                                  {"content", t.is_content_word},
                                  {"syllables", t.syllables},
                                  {"head", t.head},
                                  {"dep", t.dep}});
        }
        Json js{{"text", s.text}, {"tokens", std::move(tokens)}};
        if (s.tree) js["tree"] = to_json(*s.tree);
        sentences.push_back(std::move(js));
    }
    return Json{{"story_id", annotation.story_id}, {"annotator", annotation.annotator}, {"sentences", sentences}};
}

Annotation annotation_from_json(const Json& j) {
    Annotation a;
    a.story_id = j.at("story_id").get<std::string>();
    a.annotator = j.value("annotator", "");
    for (const auto& js : j.at("sentences")) {
        Sentence s;
        s.text = js.value("text", "");
        for (const auto& jt : js.at("tokens")) {
            Token t;
            t.text = jt.at("text").get<std::string>();
            t.lemma = jt.at("lemma").get<std::string>();
            t.upos = parse_upos(jt.at("upos").get<std::string>());
            t.is_content_word = jt.at("content").get<bool>();
            t.syllables = jt.at("syllables").get<int>();
            t.head = jt.at("head").get<int>();
            t.dep = jt.at("dep").get<std::string>();
            s.tokens.push_back(std::move(t));
        }
        if (js.contains("tree")) s.tree = constituency_from_json(js.at("tree"));
        a.sentences.push_back(std::move(s));
    }
    return a;
}

std::string to_bracketed(const Sentence& sentence) {
    if (!sentence.tree) return {};
    std::string out;
    std::function<void(const ConstituencyNode&)> walk = [&](const ConstituencyNode& node) {
        if (node.is_leaf()) {
            out += sentence.tokens.at(node.token).text;
            return;
        }
        out += "(" + node.label;
        for (const auto& c : node.children) {
            out += ' ';
            walk(c);
        }
        out += ")";
    };
    walk(*sentence.tree);
    return out;
}

}  // namespace storyeval
