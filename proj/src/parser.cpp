// Chunk-then-attach dependency parser.
//
// Tokens are first grouped into units (noun chunks, verb groups,
// prepositional phrases, single words). Units are split into clause
// segments at subordinators, relativizers, clausal coordination and
// strong punctuation. Unit heads are then attached by clause-level rules,
// and any non-projective arc is lifted to its grandparent until the tree is
// projective. Punctuation is attached last to the nearest legal head.
#include <algorithm>
#include <functional>

#include "nlp_internal.hpp"

namespace storyeval::nlp {

namespace {

enum class UnitKind { np, vp, pp, adjp, advp, cconj, sconj, rel, intj, punct, other };

struct Unit {
    UnitKind kind = UnitKind::other;
    int begin = 0;  // token range [begin, end)
    int end = 0;
    int head = 0;
    int object = -1;        // pp: head of the object chunk
    bool infinitive = false;  // vp introduced by "to"
    bool copular = false;     // vp headed by a linking verb
    bool participle = false;  // vp headed by an -ing form without auxiliaries
    bool bare_past = false;   // vp headed by an -ed / irregular past form without auxiliaries
    int segment = 0;
};

bool is_nominal(Upos t) { return t == Upos::NOUN || t == Upos::PROPN || t == Upos::NUM; }

const lex::WordSet& linking_verbs() {
    static const lex::WordSet s{"be",    "seem",  "become", "look",  "feel",   "appear", "remain",
                                "stay",  "sound", "grow",   "turn",  "get",    "smell",  "taste",
                                "am",    "is",    "are",    "was",   "were",   "been",   "being",
                                "'m",    "'re",   "'s",     "seems", "seemed", "became", "looked",
                                "felt",  "appeared", "remained", "grew", "got", "becomes", "looks", "feels"};
    return s;
}

bool strong_boundary(std::string_view w) { return w == ";" || w == ":" || w == "--" || w == "\"" || w == "("; }

class Parser {
public:
    Parser(const std::vector<std::string>& words, const std::vector<Upos>& tags)
        : words_(words), tags_(tags), n_(static_cast<int>(words.size())), heads_(words.size(), kUnset),
          labels_(words.size()) {
        for (const auto& w : words_) lower_.push_back(lowercase(w));
    }

    std::vector<Arc> run() {
        if (n_ == 0) return {};
        chunk();
        segment_units();
        choose_root();
        attach_verbs();
        attach_others();
        // anything still floating hangs off the root
        for (int i = 0; i < n_; ++i) {
            if (heads_[i] == kUnset && tags_[i] != Upos::PUNCT && i != root_) attach(i, root_, "dep");
        }
        projectivize();
        attach_punctuation();
        std::vector<Arc> arcs(n_);
        for (int i = 0; i < n_; ++i) {
            arcs[i].head = i == root_ ? -1 : heads_[i];
            arcs[i].label = i == root_ ? "ROOT" : labels_[i];
        }
        return arcs;
    }

private:
    static constexpr int kUnset = -2;

    const std::vector<std::string>& words_;
    const std::vector<Upos>& tags_;
    std::vector<std::string> lower_;
    int n_;
    std::vector<int> heads_;
    std::vector<std::string> labels_;
    std::vector<Unit> units_;
    int root_ = -1;
    int root_unit_ = -1;

    Upos t(int i) const { return i >= 0 && i < n_ ? tags_[i] : Upos::X; }

    // ---- internal arcs --------------------------------------------------

    bool is_descendant(int node, int ancestor) const {
        for (int cur = node, steps = 0; cur >= 0 && steps <= n_; ++steps) {
            if (cur == ancestor) return true;
            cur = heads_[cur];
        }
        return false;
    }

    void attach(int dep, int head, std::string label) {
        if (dep == head || head < 0 || dep == root_) return;
        // punctuation has no head until the final pass, so it cannot govern
        if (tags_[head] == Upos::PUNCT) head = root_;
        if (dep == head || head < 0) return;
        if (is_descendant(head, dep)) {
            if (root_ < 0 || is_descendant(root_, dep)) return;
            head = root_;
        }
        heads_[dep] = head;
        labels_[dep] = std::move(label);
    }

    // ---- chunking -------------------------------------------------------

    bool possessive_pron(int i) const {
        if (t(i) != Upos::PRON || !lex::contains(lex::possessive_pronouns(), lower_[i])) return false;
        if (lower_[i] != "her") return true;
        const Upos next = t(i + 1);
        return i + 1 < n_ && (is_nominal(next) || next == Upos::ADJ);
    }

    bool np_material(int i) const {
        const Upos tag = t(i);
        if (i >= n_) return false;
        if (tag == Upos::DET || tag == Upos::ADJ || is_nominal(tag)) return true;
        if (possessive_pron(i)) return true;
        if (tag == Upos::PART && lower_[i] == "'s") return true;
        // adverb inside a noun chunk only before an adjective ("very old house")
        return tag == Upos::ADV && (t(i + 1) == Upos::ADJ) && is_nominal(t(i + 2));
    }

    void build_np(int begin, int end, Unit& unit) {
        // split at possessive 's into possessor segments
        std::vector<std::pair<int, int>> parts;
        int start = begin;
        for (int i = begin; i < end; ++i) {
            if (t(i) == Upos::PART && lower_[i] == "'s") {
                parts.emplace_back(start, i + 1);
                start = i + 1;
            }
        }
        if (start < end) parts.emplace_back(start, end);
        std::vector<int> part_heads;
        for (auto [b, e] : parts) {
            int h = -1;
            for (int i = e - 1; i >= b && h < 0; --i) {
                if (is_nominal(t(i)) || t(i) == Upos::PRON) h = i;
            }
            if (h < 0) {
                h = e - 1;
                while (h > b && t(h) == Upos::PART) --h;
            }
            for (int i = b; i < e; ++i) {
                if (i == h) continue;
                const Upos tag = t(i);
                std::string label = "dep";
                int target = h;
                if (tag == Upos::PART && lower_[i] == "'s") {
                    label = "case";
                } else if (tag == Upos::DET) {
                    label = "det";
                } else if (tag == Upos::PRON) {
                    label = "poss";
                } else if (tag == Upos::NUM) {
                    label = "nummod";
                } else if (tag == Upos::ADJ) {
                    label = "amod";
                } else if (tag == Upos::ADV) {
                    label = "advmod";
                    if (t(i + 1) == Upos::ADJ) target = i + 1;
                } else if (is_nominal(tag)) {
                    label = "compound";
                }
                if (i > h) label = tag == Upos::PART ? "case" : "dep";
                attach(i, target, label);
            }
            part_heads.push_back(h);
        }
        for (std::size_t k = 0; k + 1 < part_heads.size(); ++k) attach(part_heads[k], part_heads[k + 1], "poss");
        unit.kind = UnitKind::np;
        unit.begin = begin;
        unit.end = end;
        unit.head = part_heads.back();
    }

    // Returns the end of the noun chunk starting at i, or i if none.
    int scan_np(int i) const {
        int j = i;
        while (j < n_ && np_material(j)) {
            // a determiner after a nominal starts a new chunk
            if (j > i && t(j) == Upos::DET && !(t(j - 1) == Upos::PART)) break;
            if (j > i && possessive_pron(j)) break;
            ++j;
        }
        // drop trailing determiners/adverbs that head nothing ("all", "both")
        // but keep a lone one as its own unit
        return j;
    }

    void chunk() {
        int i = 0;
        while (i < n_) {
            Unit u;
            const Upos tag = t(i);
            const std::string& w = lower_[i];
            if (tag == Upos::PUNCT || tag == Upos::SYM) {
                u.kind = UnitKind::punct;
                u.begin = i;
                u.end = i + 1;
                u.head = i;
                units_.push_back(u);
                ++i;
                continue;
            }
            if (tag == Upos::AUX || tag == Upos::VERB ||
                (tag == Upos::PART && w == "to" && (t(i + 1) == Upos::VERB || t(i + 1) == Upos::AUX))) {
                i = build_vp(i, u);
                units_.push_back(u);
                continue;
            }
            if (tag == Upos::ADP) {
                const int np_end = scan_np(i + 1);
                u.kind = UnitKind::pp;
                u.begin = i;
                u.head = i;
                if (np_end > i + 1) {
                    Unit np;
                    build_np(i + 1, np_end, np);
                    attach(np.head, i, "pobj");
                    u.object = np.head;
                    u.end = np_end;
                } else if (t(i + 1) == Upos::PRON) {
                    attach(i + 1, i, "pobj");
                    u.object = i + 1;
                    u.end = i + 2;
                } else {
                    u.end = i + 1;
                }
                units_.push_back(u);
                i = u.end;
                continue;
            }
            if (tag == Upos::PRON && !possessive_pron(i)) {
                u.kind = lex::contains(lex::wh_words(), w) || w == "that" ? UnitKind::rel : UnitKind::np;
                u.begin = i;
                u.end = i + 1;
                u.head = i;
                units_.push_back(u);
                ++i;
                continue;
            }
            if (tag == Upos::ADJ && !is_nominal(t(i + 1)) &&
                !(t(i + 1) == Upos::ADJ && is_nominal(t(i + 2)))) {
                u.kind = UnitKind::adjp;
                u.begin = i;
                u.end = i + 1;
                u.head = i;
                units_.push_back(u);
                ++i;
                continue;
            }
            if (tag == Upos::ADV && !(t(i + 1) == Upos::ADJ && is_nominal(t(i + 2)))) {
                u.begin = i;
                int j = i;
                while (j + 1 < n_ && t(j + 1) == Upos::ADV) ++j;
                if (t(j + 1) == Upos::ADJ && !is_nominal(t(j + 2))) {
                    // "very happy" -> adjective phrase
                    for (int k = i; k <= j; ++k) attach(k, j + 1, "advmod");
                    u.kind = UnitKind::adjp;
                    u.end = j + 2;
                    u.head = j + 1;
                } else {
                    for (int k = i; k < j; ++k) attach(k, j, "advmod");
                    u.kind = lex::contains(lex::wh_words(), w) && i == j ? UnitKind::rel : UnitKind::advp;
                    u.end = j + 1;
                    u.head = j;
                }
                units_.push_back(u);
                i = u.end;
                continue;
            }
            const int np_end = scan_np(i);
            if (np_end > i) {
                build_np(i, np_end, u);
                units_.push_back(u);
                i = np_end;
                continue;
            }
            u.begin = i;
            u.end = i + 1;
            u.head = i;
            switch (tag) {
                case Upos::CCONJ: u.kind = UnitKind::cconj; break;
                case Upos::SCONJ: u.kind = UnitKind::sconj; break;
                case Upos::INTJ: u.kind = UnitKind::intj; break;
                default: u.kind = UnitKind::other; break;
            }
            units_.push_back(u);
            ++i;
        }
    }

    int build_vp(int i, Unit& u) {
        u.kind = UnitKind::vp;
        u.begin = i;
        int j = i;
        if (t(j) == Upos::PART) {
            u.infinitive = true;
            ++j;
        }
        // auxiliaries, negation and adverbs up to the main verb
        int k = j;
        int last_aux = -1;
        int verb = -1;
        while (k < n_) {
            const Upos tag = t(k);
            if (tag == Upos::AUX) {
                last_aux = k;
                ++k;
            } else if (tag == Upos::PART && (lower_[k] == "not" || lower_[k] == "n't")) {
                ++k;
            } else if (tag == Upos::ADV && k > j && k + 1 < n_ &&
                       (t(k + 1) == Upos::VERB || t(k + 1) == Upos::AUX || t(k + 1) == Upos::ADV)) {
                ++k;
            } else if (tag == Upos::VERB) {
                verb = k;
                ++k;
                break;
            } else {
                break;
            }
        }
        if (verb < 0) {
            // copula or bare auxiliary: trim trailing adverbs back off
            while (k > j && t(k - 1) != Upos::AUX && !(t(k - 1) == Upos::PART)) --k;
        }
        const int head = verb >= 0 ? verb : (last_aux >= 0 ? last_aux : j);
        u.end = std::max(k, head + 1);
        u.head = head;
        for (int m = i; m < u.end; ++m) {
            if (m == head) continue;
            const Upos tag = t(m);
            if (tag == Upos::PART && (lower_[m] == "not" || lower_[m] == "n't"))
                attach(m, head, "neg");
            else if (tag == Upos::PART)
                attach(m, head, "aux");
            else if (tag == Upos::ADV)
                attach(m, head, "advmod");
            else
                attach(m, head, "aux");
        }
        u.copular = verb < 0 || linking_verbs().count(lower_[head]) > 0;
        if (verb >= 0 && last_aux < 0 && !u.infinitive) {
            const std::string& w = lower_[verb];
            u.participle = w.size() > 4 && w.compare(w.size() - 3, 3, "ing") == 0;
            u.bare_past = (w.size() > 3 && w.compare(w.size() - 2, 2, "ed") == 0) || lex::irregular_verbs().count(w) > 0;
        }
        return u.end;
    }

    // ---- clause segments ------------------------------------------------

    int prev_unit(int u) const {
        for (int k = u - 1; k >= 0; --k) {
            if (units_[k].kind != UnitKind::punct) return k;
        }
        return -1;
    }
    int next_unit(int u) const {
        for (int k = u + 1; k < static_cast<int>(units_.size()); ++k) {
            if (units_[k].kind != UnitKind::punct) return k;
        }
        return -1;
    }
    bool comma_before(int u) const {
        return u > 0 && units_[u - 1].kind == UnitKind::punct && words_[units_[u - 1].head] == ",";
    }

    // marker unit of each segment (-1 for none)
    std::vector<int> seg_marker_;

    bool clausal_after(int u) const {
        // a verb group follows, possibly after a subject chunk
        const int a = next_unit(u);
        if (a < 0) return false;
        if (units_[a].kind == UnitKind::vp) return true;
        if (units_[a].kind == UnitKind::np || units_[a].kind == UnitKind::rel) {
            const int b = next_unit(a);
            return b >= 0 && units_[b].kind == UnitKind::vp;
        }
        return false;
    }

    void segment_units() {
        int seg = 0;
        seg_marker_.push_back(-1);
        for (int u = 0; u < static_cast<int>(units_.size()); ++u) {
            auto& unit = units_[u];
            bool starts = false;
            if (u > 0) {
                switch (unit.kind) {
                    case UnitKind::sconj: starts = true; break;
                    case UnitKind::rel: {
                        const int p = prev_unit(u);
                        starts = p >= 0 && (units_[p].kind == UnitKind::np || units_[p].kind == UnitKind::vp ||
                                            comma_before(u));
                        break;
                    }
                    case UnitKind::cconj: starts = clausal_after(u); break;
                    case UnitKind::punct: starts = strong_boundary(words_[unit.head]); break;
                    default: break;
                }
            }
            if (starts) {
                ++seg;
                seg_marker_.push_back(unit.kind == UnitKind::punct ? -1 : u);
            }
            unit.segment = seg;
        }
    }

    std::vector<int> units_in_segment(int seg, UnitKind kind) const {
        std::vector<int> out;
        for (int u = 0; u < static_cast<int>(units_.size()); ++u) {
            if (units_[u].segment == seg && units_[u].kind == kind) out.push_back(u);
        }
        return out;
    }

    // The main verb group of a segment: the first one with a subject
    // immediately before it, else the first non-participial one.
    int segment_head(int seg) const {
        const auto vps = units_in_segment(seg, UnitKind::vp);
        for (int v : vps) {
            const int p = prev_unit(v);
            if (p < 0 || units_[p].segment != seg || units_[v].infinitive) continue;
            if (units_[p].kind == UnitKind::np || units_[p].kind == UnitKind::rel ||
                (units_[p].kind == UnitKind::advp && lower_[units_[p].head] == "there")) {
                return v;
            }
        }
        for (int v : vps) {
            if (!units_[v].participle && !units_[v].infinitive) return v;
        }
        return vps.empty() ? -1 : vps.front();
    }

    void choose_root() {
        const int segments = static_cast<int>(seg_marker_.size());
        for (int s = 0; s < segments && root_unit_ < 0; ++s) {
            const int m = seg_marker_[s];
            if (m >= 0 && units_[m].kind != UnitKind::cconj) continue;
            const int h = segment_head(s);
            if (h >= 0 && !units_[h].infinitive) root_unit_ = h;
        }
        if (root_unit_ < 0) {
            for (int u = 0; u < static_cast<int>(units_.size()) && root_unit_ < 0; ++u) {
                if (units_[u].kind == UnitKind::vp) root_unit_ = u;
            }
        }
        for (UnitKind kind : {UnitKind::np, UnitKind::pp, UnitKind::adjp, UnitKind::advp}) {
            for (int u = 0; u < static_cast<int>(units_.size()) && root_unit_ < 0; ++u) {
                if (units_[u].kind == kind) root_unit_ = u;
            }
        }
        for (int u = 0; u < static_cast<int>(units_.size()) && root_unit_ < 0; ++u) {
            if (units_[u].kind != UnitKind::punct) root_unit_ = u;
        }
        if (root_unit_ < 0) root_unit_ = 0;  // all punctuation
        root_ = units_[root_unit_].head;
        heads_[root_] = -1;
        labels_[root_] = "ROOT";
    }

    // ---- verb attachment ------------------------------------------------

    int nearest_vp_left(int u, bool same_segment) const {
        for (int k = u - 1; k >= 0; --k) {
            if (units_[k].kind == UnitKind::vp && (!same_segment || units_[k].segment == units_[u].segment)) return k;
        }
        return -1;
    }

    int nominal_head(int u) const {
        if (u < 0) return -1;
        if (units_[u].kind == UnitKind::np) return units_[u].head;
        if (units_[u].kind == UnitKind::pp && units_[u].object >= 0) return units_[u].object;
        return -1;
    }

    void attach_verbs() {
        std::vector<int> head_of_segment(seg_marker_.size());
        for (std::size_t s = 0; s < seg_marker_.size(); ++s) head_of_segment[s] = segment_head(static_cast<int>(s));

        for (int u = 0; u < static_cast<int>(units_.size()); ++u) {
            const Unit& unit = units_[u];
            if (unit.kind != UnitKind::vp || u == root_unit_) continue;
            const int seg = unit.segment;
            const int seg_head = head_of_segment[seg];
            const int marker = seg_marker_[seg];
            const int left_vp = nearest_vp_left(u, true);

            if (u != seg_head && seg_head >= 0) {
                const int prev = prev_unit(u);
                const int noun = prev == u - 1 ? nominal_head(prev) : -1;
                if (noun >= 0 && (unit.bare_past || unit.participle) && units_[prev].segment == seg) {
                    // reduced relative: "a girl named Lily", "a village nestled between hills"
                    attach(unit.head, noun, "acl");
                    continue;
                }
                if (unit.infinitive && left_vp >= 0) {
                    attach(unit.head, units_[left_vp].head, "xcomp");
                } else if (unit.infinitive) {
                    const int noun = nominal_head(prev_unit(u));
                    if (noun >= 0)
                        attach(unit.head, noun, "acl");
                    else
                        attach(unit.head, units_[seg_head].head, "advcl");
                } else if (u < seg_head) {
                    attach(unit.head, units_[seg_head].head, "advcl");
                } else if (comma_before(u) && unit.participle) {
                    attach(unit.head, units_[seg_head].head, "advcl");
                } else {
                    const int p = prev_unit(u);
                    const bool after_cc = p >= 0 && units_[p].kind == UnitKind::cconj && units_[p].segment == seg;
                    attach(unit.head, units_[left_vp >= 0 ? left_vp : seg_head].head, after_cc ? "conj" : "ccomp");
                    if (after_cc) attach(units_[p].head, units_[left_vp >= 0 ? left_vp : seg_head].head, "cc");
                }
                continue;
            }

            // clause head of a non-root segment
            if (unit.infinitive) {
                const int lv = nearest_vp_left(u, false);
                attach(unit.head, lv >= 0 ? units_[lv].head : root_, lv >= 0 ? "xcomp" : "advcl");
                continue;
            }
            if (marker < 0) {
                attach(unit.head, root_, seg > 0 && words_[units_[seg_start(seg)].head] == "\"" ? "ccomp" : "parataxis");
                continue;
            }
            switch (units_[marker].kind) {
                case UnitKind::sconj: {
                    const int p = prev_unit(marker);
                    if (lower_[units_[marker].head] == "that" && p >= 0 && units_[p].kind == UnitKind::vp) {
                        attach(unit.head, units_[p].head, "ccomp");
                    } else {
                        const int target = p >= 0 && units_[p].kind == UnitKind::vp ? units_[p].head : root_;
                        attach(unit.head, target, "advcl");
                    }
                    break;
                }
                case UnitKind::rel: {
                    const int noun = nominal_head(prev_unit(marker));
                    if (noun >= 0) {
                        attach(unit.head, noun, "relcl");
                    } else {
                        const int lv = nearest_vp_left(marker, false);
                        attach(unit.head, lv >= 0 ? units_[lv].head : root_, "ccomp");
                    }
                    break;
                }
                case UnitKind::cconj: {
                    const int lv = nearest_vp_left(marker, false);
                    const int target = lv >= 0 ? units_[lv].head : root_;
                    attach(unit.head, target, "conj");
                    break;
                }
                default:
                    attach(unit.head, root_, "dep");
                    break;
            }
        }
    }

    int seg_start(int seg) const {
        for (int u = 0; u < static_cast<int>(units_.size()); ++u) {
            if (units_[u].segment == seg) return u;
        }
        return 0;
    }

    // ---- everything else ------------------------------------------------

    int clause_verb(int u) const {
        // the segment's main verb when it lies ahead, unless the unit directly
        // follows another verb group; otherwise the nearest verb on the left
        const int seg = units_[u].segment;
        const int left = nearest_vp_left(u, true);
        const int main = segment_head(seg);
        if (main > u && !(left >= 0 && prev_unit(u) == left)) return units_[main].head;
        if (left >= 0) return units_[left].head;
        for (int k = u + 1; k < static_cast<int>(units_.size()); ++k) {
            if (units_[k].segment != seg) break;
            if (units_[k].kind == UnitKind::vp) return units_[k].head;
        }
        return -1;
    }

    int right_vp_in_segment(int u) const {
        const int seg = units_[u].segment;
        for (int k = u + 1; k < static_cast<int>(units_.size()); ++k) {
            if (units_[k].segment != seg) break;
            if (units_[k].kind == UnitKind::vp) return k;
        }
        return -1;
    }

    void attach_nominal(int u) {
        const Unit& unit = units_[u];
        const int p = prev_unit(u);
        const int seg = unit.segment;

        // coordination: "bread and butter"
        if (p >= 0 && units_[p].kind == UnitKind::cconj && units_[p].segment == seg) {
            const int pp = prev_unit(p);
            const int left = nominal_head(pp);
            if (left >= 0 && (units_[pp].kind == UnitKind::np || units_[pp].kind == UnitKind::pp)) {
                attach(unit.head, left, "conj");
                attach(units_[p].head, left, "cc");
                return;
            }
        }
        // apposition: "my friend, the baker"
        if (p >= 0 && units_[p].kind == UnitKind::np && comma_before(u) && units_[p].segment == seg &&
            t(unit.head) != Upos::PRON && right_vp_in_segment(u) < 0) {
            attach(unit.head, units_[p].head, "appos");
            return;
        }
        const int left_vp = nearest_vp_left(u, true);
        const int right_vp = right_vp_in_segment(u);
        if (unit.kind == UnitKind::rel) {
            // relativizer / wh-word: subject or object of its clause verb
            if (right_vp >= 0) {
                const int between = prev_unit(right_vp);
                attach(unit.head, units_[right_vp].head, between == u ? "nsubj" : "dobj");
                return;
            }
        }
        // subject of the following verb when nothing verbal precedes it in the
        // segment, or when it directly precedes the verb group
        if (right_vp >= 0 && !units_[right_vp].infinitive && (left_vp < 0 || prev_unit(right_vp) == u)) {
            bool nearest = true;
            for (int k = u + 1; k < right_vp; ++k) {
                if (units_[k].kind == UnitKind::np) nearest = false;
            }
            attach(unit.head, units_[right_vp].head, nearest ? "nsubj" : "npadvmod");
            return;
        }
        if (left_vp >= 0) {
            const Unit& vp = units_[left_vp];
            const int verb = vp.head;
            std::string label = vp.copular ? "attr" : "dobj";
            // second object: the earlier one becomes the indirect object
            for (int k = 0; k < n_; ++k) {
                if (heads_[k] == verb && labels_[k] == "dobj" && label == "dobj") labels_[k] = "dative";
            }
            if (t(unit.head) == Upos::NUM || lex::contains(lex::adverbs(), lower_[unit.head])) label = "npadvmod";
            attach(unit.head, verb, label);
            return;
        }
        if (right_vp >= 0) {
            attach(unit.head, units_[right_vp].head, "nsubj");
            return;
        }
        // verbless segment
        const int left = nominal_head(p);
        if (left >= 0 && units_[p].segment == seg) {
            attach(unit.head, left, "appos");
        } else {
            attach(unit.head, root_, "dep");
        }
    }

    void attach_pp(int u) {
        const Unit& unit = units_[u];
        const int p = prev_unit(u);
        const bool same_seg = p >= 0 && units_[p].segment == unit.segment;
        const int left_noun = same_seg ? nominal_head(p) : -1;
        if (unit.object < 0) {
            // bare preposition: verb particle or stranded
            const int verb = clause_verb(u);
            if (p >= 0 && units_[p].kind == UnitKind::vp && lex::contains(lex::particles(), lower_[unit.head])) {
                attach(unit.head, units_[p].head, "prt");
            } else {
                attach(unit.head, verb >= 0 ? verb : root_, "prep");
            }
            return;
        }
        if (left_noun >= 0 && (lower_[unit.head] == "of" || clause_verb(u) < 0)) {
            attach(unit.head, left_noun, "prep");
            return;
        }
        const int verb = clause_verb(u);
        if (verb >= 0) {
            attach(unit.head, verb, "prep");
        } else if (left_noun >= 0) {
            attach(unit.head, left_noun, "prep");
        } else {
            attach(unit.head, root_, "prep");
        }
    }

    void attach_others() {
        for (int u = 0; u < static_cast<int>(units_.size()); ++u) {
            if (u == root_unit_) continue;
            const Unit& unit = units_[u];
            switch (unit.kind) {
                case UnitKind::vp:
                case UnitKind::punct:
                    break;
                case UnitKind::np:
                case UnitKind::rel:
                    if (unit.kind == UnitKind::rel && t(unit.head) == Upos::ADV) {
                        const int v = right_vp_in_segment(u);
                        attach(unit.head, v >= 0 ? units_[v].head : root_, "advmod");
                    } else {
                        attach_nominal(u);
                    }
                    break;
                case UnitKind::pp:
                    attach_pp(u);
                    break;
                case UnitKind::adjp: {
                    const int left_vp = nearest_vp_left(u, true);
                    const int p = prev_unit(u);
                    if (p >= 0 && units_[p].kind == UnitKind::cconj && heads_[units_[p].head] == kUnset) {
                        const int pp = prev_unit(p);
                        if (pp >= 0 && units_[pp].kind == UnitKind::adjp) {
                            attach(unit.head, units_[pp].head, "conj");
                            attach(units_[p].head, units_[pp].head, "cc");
                            break;
                        }
                    }
                    if (left_vp >= 0 && units_[left_vp].copular) {
                        attach(unit.head, units_[left_vp].head, "acomp");
                    } else if (const int noun = nominal_head(p); noun >= 0 && units_[p].segment == unit.segment) {
                        attach(unit.head, noun, "amod");
                    } else if (const int v = clause_verb(u); v >= 0) {
                        attach(unit.head, v, "acomp");
                    } else {
                        attach(unit.head, root_, "amod");
                    }
                    break;
                }
                case UnitKind::advp: {
                    const int v = clause_verb(u);
                    attach(unit.head, v >= 0 ? v : root_, "advmod");
                    break;
                }
                case UnitKind::cconj:
                    if (heads_[unit.head] == kUnset) {
                        const bool clausal = seg_marker_[unit.segment] == u;
                        const int lv = clausal ? nearest_vp_left(u, false) : -1;
                        const int p = prev_unit(u);
                        attach(unit.head, lv >= 0 ? units_[lv].head : (p >= 0 ? units_[p].head : root_), "cc");
                    }
                    break;
                case UnitKind::sconj: {
                    const int seg_head = segment_head(unit.segment);
                    attach(unit.head, seg_head >= 0 ? units_[seg_head].head : root_, "mark");
                    break;
                }
                case UnitKind::intj:
                    attach(unit.head, root_, "intj");
                    break;
                case UnitKind::other: {
                    const Upos tag = t(unit.head);
                    if (tag == Upos::PART && (lower_[unit.head] == "not" || lower_[unit.head] == "n't")) {
                        const int v = clause_verb(u);
                        attach(unit.head, v >= 0 ? v : root_, "neg");
                    } else if (tag == Upos::PART && unit.head > 0) {
                        attach(unit.head, unit.head - 1, "case");
                    } else {
                        const int v = clause_verb(u);
                        attach(unit.head, v >= 0 ? v : root_, "dep");
                    }
                    break;
                }
            }
        }
    }

    // ---- projectivity ---------------------------------------------------

    // Unattached punctuation is transparent until attach_punctuation runs.
    bool arc_projective(int dep) const {
        const int h = heads_[dep];
        const int lo = std::min(h, dep), hi = std::max(h, dep);
        for (int k = lo + 1; k < hi; ++k) {
            if (heads_[k] == kUnset) continue;
            if (!is_descendant(k, h)) return false;
        }
        return true;
    }

    void projectivize() {
        bool changed = true;
        while (changed) {
            changed = false;
            // shortest offending arc first keeps lifts local
            int worst = -1;
            int worst_len = n_ + 1;
            for (int d = 0; d < n_; ++d) {
                if (d == root_ || heads_[d] < 0 || heads_[d] == root_) continue;
                if (!arc_projective(d)) {
                    const int len = std::abs(heads_[d] - d);
                    if (len < worst_len) {
                        worst = d;
                        worst_len = len;
                    }
                }
            }
            if (worst >= 0) {
                heads_[worst] = heads_[heads_[worst]];
                if (heads_[worst] == -1) heads_[worst] = root_;
                changed = true;
            }
        }
    }

    bool punct_legal(int p, int c) const {
        const int lo = std::min(p, c), hi = std::max(p, c);
        for (int k = lo + 1; k < hi; ++k) {
            if (heads_[k] == kUnset) continue;
            if (!is_descendant(k, c)) return false;
        }
        // arcs spanning p must own c
        for (int d = 0; d < n_; ++d) {
            const int h = heads_[d];
            if (h < 0 || d == p) continue;
            if (std::min(h, d) < p && p < std::max(h, d) && !is_descendant(c, h)) return false;
        }
        return true;
    }

    void attach_punctuation() {
        for (int p = 0; p < n_; ++p) {
            if (heads_[p] != kUnset || p == root_) continue;
            int chosen = -1;
            for (int c : {root_, p - 1, p + 1}) {
                if (c < 0 || c >= n_ || c == p || heads_[c] == kUnset) continue;
                if (punct_legal(p, c)) {
                    chosen = c;
                    break;
                }
            }
            if (chosen < 0) {
                // neighbours may themselves be pending punctuation: pick the
                // closest attached token whose arc is legal
                for (int dist = 1; dist < n_ && chosen < 0; ++dist) {
                    for (int c : {p - dist, p + dist}) {
                        if (c >= 0 && c < n_ && heads_[c] != kUnset && punct_legal(p, c)) {
                            chosen = c;
                            break;
                        }
                    }
                }
            }
            heads_[p] = chosen >= 0 ? chosen : root_;
            labels_[p] = "punct";
        }
    }
};

std::string phrase_label(Upos tag) {
    switch (tag) {
        case Upos::NOUN:
        case Upos::PROPN:
        case Upos::PRON:
        case Upos::NUM: return "NP";
        case Upos::VERB:
        case Upos::AUX: return "VP";
        case Upos::ADP: return "PP";
        case Upos::ADJ: return "ADJP";
        case Upos::ADV: return "ADVP";
        default: return "XP";
    }
}

}  // namespace

std::vector<Arc> parse(const std::vector<std::string>& words, const std::vector<Upos>& tags) {
    Parser parser(words, tags);
    return parser.run();
}

ConstituencyNode build_constituency(const std::vector<Token>& tokens) {
    const int n = static_cast<int>(tokens.size());
    std::vector<std::vector<int>> deps(n);
    int root = -1;
    for (int i = 0; i < n; ++i) {
        if (tokens[i].head < 0)
            root = i;
        else
            deps[tokens[i].head].push_back(i);
    }
    std::function<ConstituencyNode(int, bool)> phrase = [&](int h, bool top) {
        ConstituencyNode leaf;
        leaf.label = std::string(to_string(tokens[h].upos));
        leaf.token = h;
        if (deps[h].empty()) return leaf;
        ConstituencyNode node;
        node.label = top ? "S" : phrase_label(tokens[h].upos);
        bool placed = false;
        for (int d : deps[h]) {  // ascending surface order
            if (!placed && d > h) {
                node.children.push_back(leaf);
                placed = true;
            }
            node.children.push_back(phrase(d, false));
        }
        if (!placed) node.children.push_back(leaf);
        return node;
    };
    return phrase(root, true);
}

}  // namespace storyeval::nlp
