#include <algorithm>
#include <cctype>

#include "nlp_internal.hpp"

namespace storyeval::nlp {

// Folds typographic punctuation to ASCII so the rules below only deal with
// one spelling of each mark.
std::string normalize_text(std::string_view text) {
    struct Fold {
        std::string_view from;
        std::string_view to;
    };
    static constexpr Fold kFolds[] = {
        {"\xE2\x80\x98", "'"},  {"\xE2\x80\x99", "'"},   {"\xE2\x80\x9C", "\""}, {"\xE2\x80\x9D", "\""},
        {"\xE2\x80\x94", "--"}, {"\xE2\x80\x93", "-"},   {"\xE2\x80\xA6", "..."}, {"\xC2\xA0", " "},
        {"\xE2\x80\xB2", "'"},  {"\xC2\xAB", "\""},      {"\xC2\xBB", "\""},
    };
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        bool folded = false;
        for (const auto& f : kFolds) {
            if (text.substr(i, f.from.size()) == f.from) {
                out += f.to;
                i += f.from.size();
                folded = true;
                break;
            }
        }
        if (!folded) out += text[i++];
    }
    return out;
}

namespace {

bool is_alnum_byte(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80;
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Splits clitics off a word: "don't" -> "do" "n't", "she's" -> "she" "'s".
void push_word(std::string word, std::size_t offset, bool newline, std::vector<RawToken>& out) {
    const std::string lower = lowercase(word);
    if (lower.size() > 3 && ends_with(lower, "n't")) {
        std::string base = word.substr(0, word.size() - 3);
        out.push_back({base, offset, newline});
        out.push_back({word.substr(word.size() - 3), offset + base.size(), false});
        return;
    }
    static constexpr std::string_view kClitics[] = {"'s", "'re", "'ve", "'ll", "'d", "'m"};
    for (auto clitic : kClitics) {
        if (lower.size() > clitic.size() && ends_with(lower, clitic)) {
            std::string base = word.substr(0, word.size() - clitic.size());
            out.push_back({base, offset, newline});
            out.push_back({word.substr(base.size()), offset + base.size(), false});
            return;
        }
    }
    out.push_back({std::move(word), offset, newline});
}

}  // namespace

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c); });
    return out;
}

bool starts_upper(std::string_view text) {
    return !text.empty() && std::isupper(static_cast<unsigned char>(text.front()));
}

bool is_word_text(std::string_view text) {
    return std::any_of(text.begin(), text.end(), is_alnum_byte);
}

bool is_punct_text(std::string_view text) { return !text.empty() && !is_word_text(text); }

std::vector<RawToken> tokenize(std::string_view raw) {
    const std::string text = normalize_text(raw);
    std::vector<RawToken> out;
    bool newline = false;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (c == '\n') newline = true;
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_alnum_byte(c)) {
            std::string word;
            while (i < text.size()) {
                const char d = text[i];
                if (is_alnum_byte(d)) {
                    word += d;
                    ++i;
                } else if ((d == '\'' || d == '-') && i + 1 < text.size() && is_alnum_byte(text[i + 1]) &&
                           !word.empty()) {
                    word += d;
                    ++i;
                } else if (d == '.' && i + 1 < text.size() &&
                           ((is_digit(text[i + 1]) && !word.empty() && is_digit(word.back())) ||
                            (std::isalpha(static_cast<unsigned char>(text[i + 1])) && i + 2 < text.size() &&
                             text[i + 2] == '.' && (word.size() == 1 || word.find('.') != std::string::npos)))) {
                    // decimals (3.5) and dotted acronyms (e.g., U.S.)
                    word += d;
                    ++i;
                } else if ((d == ',') && i + 1 < text.size() && is_digit(text[i + 1]) && !word.empty() &&
                           is_digit(word.back())) {
                    word += d;
                    ++i;
                } else {
                    break;
                }
            }
            if (i < text.size() && text[i] == '.') {
                const std::string with_dot = lowercase(word + ".");
                const bool initial = word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0])) &&
                                     word != "I" && word != "A";
                if (lex::contains(lex::abbreviations(), with_dot) || initial ||
                    word.find('.') != std::string::npos) {
                    word += '.';
                    ++i;
                }
            }
            push_word(std::move(word), start, newline, out);
            newline = false;
            continue;
        }
        // punctuation runs
        std::size_t len = 1;
        if (c == '.' || c == '-' || c == '?' || c == '!') {
            while (start + len < text.size()) {
                const char d = text[start + len];
                const bool same_family = (c == '.' && d == '.') || (c == '-' && d == '-') ||
                                         ((c == '?' || c == '!') && (d == '?' || d == '!'));
                if (!same_family) break;
                ++len;
            }
        }
        out.push_back({text.substr(start, len), start, newline});
        newline = false;
        i = start + len;
    }
    return out;
}

namespace {

bool is_terminal(std::string_view t) {
    return !t.empty() && (t.front() == '.' || t.front() == '?' || t.front() == '!') &&
           std::all_of(t.begin(), t.end(), [](char c) { return c == '.' || c == '?' || c == '!'; });
}

bool is_closer(std::string_view t) { return t == "\"" || t == "'" || t == ")" || t == "]"; }

}  // namespace

std::vector<std::vector<RawToken>> segment(const std::vector<RawToken>& tokens) {
    std::vector<std::vector<RawToken>> sentences;
    std::vector<RawToken> current;
    // Straight double quotes alternate open/close within a text.
    bool quote_open = false;
    auto flush = [&] {
        if (!current.empty()) sentences.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (tok.newline_before && !current.empty()) flush();
        current.push_back(tok);
        if (tok.text == "\"") quote_open = !quote_open;
        if (!is_terminal(tok.text)) continue;

        // absorb closing quotes / brackets
        std::size_t j = i + 1;
        bool closed_quote = false;
        while (j < tokens.size() && is_closer(tokens[j].text) && !tokens[j].newline_before) {
            if (tokens[j].text == "\"") {
                if (!quote_open) break;
                quote_open = false;
                closed_quote = true;
            }
            current.push_back(tokens[j]);
            ++j;
        }
        const bool at_end = j >= tokens.size();
        bool boundary = at_end;
        if (!at_end) {
            const auto& next = tokens[j].text;
            const bool ellipsis = tok.text.size() > 1 && tok.text.front() == '.';
            if (starts_upper(next) || is_digit(next.front()) || next == "\"" || next == "(" ||
                tokens[j].newline_before) {
                boundary = true;
            } else if (!ellipsis && !quote_open && !closed_quote) {
                // lowercase after a full stop still ends the sentence,
                // but not after quoted speech ("Stop!" she said.)
                boundary = true;
            }
        }
        i = j - 1;
        if (boundary) flush();
    }
    flush();
    return sentences;
}

}  // namespace storyeval::nlp
