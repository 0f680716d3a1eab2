#include "storyeval/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

#include "storyeval/analysis.hpp"
#include "storyeval/error.hpp"
#include "storyeval/metrics_complexity.hpp"
#include "storyeval/store.hpp"

namespace fs = std::filesystem;

namespace storyeval {

std::vector<NgramCount> top_ngrams(const Corpus& corpus, std::span<const Annotation> annotations, int n,
                                   std::size_t k, AuthorKind author_kind, const NgramOptions& options) {
    std::unordered_map<std::string, const Annotation*> by_id;
    for (const auto& a : annotations) by_id[a.story_id] = &a;
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& s : corpus.stories()) {
        if (s.author_kind != author_kind) continue;
        const auto it = by_id.find(s.id);
        if (it == by_id.end()) continue;
        for (auto& g : ngrams(*it->second, n, options)) ++counts[std::move(g)];
    }
    std::vector<NgramCount> out;
    out.reserve(counts.size());
    for (auto& [g, c] : counts) out.push_back({g, c});
    const auto cmp = [](const NgramCount& a, const NgramCount& b) {
        return a.count != b.count ? a.count > b.count : a.ngram < b.ngram;
    };
    const std::size_t keep = std::min(k, out.size());
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), cmp);
    out.resize(keep);
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string ngram_table_csv(std::span<const NgramCount> human, std::span<const NgramCount> ai) {
    std::ostringstream out;
    out << "rank,human_ngram,human_count,ai_ngram,ai_count\n";
    for (std::size_t i = 0; i < std::max(human.size(), ai.size()); ++i) {
        out << i + 1 << ',';
        if (i < human.size()) out << csv_field(human[i].ngram) << ',' << human[i].count;
        else out << ',';
        out << ',';
        if (i < ai.size()) out << csv_field(ai[i].ngram) << ',' << ai[i].count;
        else out << ',';
        out << '\n';
    }
    return out.str();
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 130, kTop = 40, kBottom = 60;
constexpr const char* kHumanColor = "#4c72b0";
constexpr const char* kAiColor = "#dd8452";

std::string num(double v, int precision = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Series {
    std::string name;
    std::string color;
    std::vector<double> values;
    std::vector<double> errors;  // same length as values, or empty
};

struct Axis {
    double lo = 0.0, hi = 1.0, step = 0.2;

    double y(double v) const { return kTop + (hi - v) / (hi - lo) * (kHeight - kTop - kBottom); }
};

Axis nice_axis(double lo, double hi) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

class SvgDoc {
public:
    SvgDoc(const std::string& title, const std::string& y_label) {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
             << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
        out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        text(kWidth / 2, 22, title, "middle", 15);
        out_ << "<text transform=\"translate(16," << num((kTop + kHeight - kBottom) / 2) << ") rotate(-90)\" "
             << "text-anchor=\"middle\" font-size=\"12\">" << escape(y_label) << "</text>\n";
    }

    void text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 11) {
        out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor << "\" font-size=\""
             << size << "\">" << escape(s) << "</text>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1) {
        out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
             << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width, 1) << "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
             << "\" fill=\"" << fill << "\"/>\n";
    }

    void circle(double x, double y, const std::string& fill) {
        out_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\"" << fill << "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
        out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) out_ << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
        out_ << "\"/>\n";
    }

    void y_axis(const Axis& axis) {
        const double x0 = kLeft, x1 = kWidth - kRight;
        const int ticks = static_cast<int>(std::lround((axis.hi - axis.lo) / axis.step));
        const int precision = axis.step >= 1.0 ? 0 : axis.step >= 0.1 ? 1 : axis.step >= 0.01 ? 2 : 3;
        for (int i = 0; i <= ticks; ++i) {
            const double v = axis.lo + i * axis.step;
            const double y = axis.y(v);
            line(x0, y, x1, y, "#e0e0e0");
            text(x0 - 6, y + 4, num(v, precision), "end");
        }
        line(x0, kTop, x0, kHeight - kBottom, "black");
        line(x0, axis.y(std::clamp(0.0, axis.lo, axis.hi)), x1, axis.y(std::clamp(0.0, axis.lo, axis.hi)), "black");
    }

    void legend(std::span<const Series> series) {
        double y = kTop + 10;
        for (const auto& s : series) {
            rect(kWidth - kRight + 15, y - 9, 12, 12, s.color);
            text(kWidth - kRight + 32, y + 1, s.name, "start");
            y += 20;
        }
    }

    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

private:
    std::ostringstream out_;
};

std::string bar_chart(const std::string& title, const std::string& y_label, const std::vector<std::string>& categories,
                      const std::vector<Series>& series) {
    double lo = 0.0, hi = 0.0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double e = s.errors.empty() ? 0.0 : s.errors[i];
            lo = std::min(lo, s.values[i] - e);
            hi = std::max(hi, s.values[i] + e);
        }
    }
    const Axis axis = nice_axis(lo, hi);
    SvgDoc doc(title, y_label);
    doc.y_axis(axis);
    const double plot_w = kWidth - kLeft - kRight;
    const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(categories.size(), 1));
    const double bar_w = group_w * 0.7 / static_cast<double>(std::max<std::size_t>(series.size(), 1));
    const double zero = axis.y(std::clamp(0.0, axis.lo, axis.hi));
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double gx = kLeft + group_w * static_cast<double>(c) + group_w * 0.15;
        for (std::size_t k = 0; k < series.size(); ++k) {
            const double v = series[k].values[c];
            const double x = gx + bar_w * static_cast<double>(k);
            const double y = axis.y(v);
            doc.rect(x, std::min(y, zero), bar_w, std::abs(zero - y), series[k].color);
            if (!series[k].errors.empty() && series[k].errors[c] > 0.0) {
                const double cx = x + bar_w / 2, e = series[k].errors[c];
                doc.line(cx, axis.y(v - e), cx, axis.y(v + e), "black");
                doc.line(cx - 4, axis.y(v + e), cx + 4, axis.y(v + e), "black");
                doc.line(cx - 4, axis.y(v - e), cx + 4, axis.y(v - e), "black");
            }
        }
        doc.text(kLeft + group_w * (static_cast<double>(c) + 0.5), kHeight - kBottom + 18, categories[c]);
    }
    doc.legend(series);
    return doc.finish();
}

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<int>& xs, const std::vector<Series>& series) {
    double lo = 0.0, hi = 0.0;
    for (const auto& s : series) {
        for (double v : s.values) {
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const Axis axis = nice_axis(lo, hi);
    SvgDoc doc(title, y_label);
    doc.y_axis(axis);
    const double plot_w = kWidth - kLeft - kRight;
    const auto x_of = [&](std::size_t i) {
        return kLeft + plot_w * (static_cast<double>(i) + 0.5) / static_cast<double>(std::max<std::size_t>(xs.size(), 1));
    };
    for (std::size_t i = 0; i < xs.size(); ++i) doc.text(x_of(i), kHeight - kBottom + 18, std::to_string(xs[i]));
    doc.text(kLeft + plot_w / 2, kHeight - 18, x_label);
    for (const auto& s : series) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (std::isnan(s.values[i])) continue;
            pts.emplace_back(x_of(i), axis.y(s.values[i]));
        }
        doc.polyline(pts, s.color);
        for (const auto& [x, y] : pts) doc.circle(x, y, s.color);
    }
    doc.legend(series);
    return doc.finish();
}

struct Store {
    std::vector<ItemSet> item_sets;
    Corpus corpus;
    std::vector<SemanticMetricRecord> semantic;
    std::vector<ComplexityRecord> complexity;
    bool has_semantic = false;
    bool has_complexity = false;
};

template <class T, class F>
std::vector<T> read_records(const fs::path& path, F&& from_json) {
    std::vector<T> out;
    read_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(from_json(j)); });
    return out;
}

struct MetricFigure {
    const char* metric;
    const char* title;
    bool semantic;
};

constexpr MetricFigure kMetricFigures[] = {
    {"mean_ngram_diversity", "Mean n-gram diversity", true},
    {"inverse_homogenization", "Inverse homogenization", true},
    {"novelty", "Novelty", true},
    {"surprise", "Surprise", true},
    {"unique_word_count", "Unique words", false},
    {"avg_word_length", "Average word length", false},
    {"avg_sentence_length", "Average sentence length", false},
    {"flesch_reading_ease", "Flesch reading ease", false},
    {"avg_dependency_path_length", "Average dependency path length", false},
    {"avg_constituency_tree_depth", "Average constituency tree depth", false},
};

struct MeanSe {
    double mean = 0.0, se = 0.0;
    std::size_t n = 0;
};

MeanSe summarize(const std::vector<double>& xs) {
    MeanSe m;
    m.n = xs.size();
    if (xs.empty()) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return m;
}

}  // namespace

FigureSet render_figures(const fs::path& results_dir, const fs::path& output_dir) {
    FigureSet out;
    const fs::path corpus_path = results_dir / store_files::corpus;
    if (!fs::exists(corpus_path)) {
        out.warnings.push_back("no corpus in " + results_dir.string() + "; no figures rendered");
        return out;
    }
    Store store;
    const fs::path item_set_path = results_dir / store_files::item_sets;
    store.item_sets = fs::exists(item_set_path) ? load_item_sets(item_set_path) : default_item_sets();
    store.corpus = load_corpus(corpus_path, store.item_sets);
    if (store.corpus.empty()) {
        out.warnings.push_back("corpus in " + results_dir.string() + " is empty; no figures rendered");
        return out;
    }
    if (const auto p = results_dir / store_files::semantic_metrics; fs::exists(p)) {
        store.semantic = read_records<SemanticMetricRecord>(p, semantic_record_from_json);
        store.has_semantic = true;
    } else {
        out.warnings.push_back("semantic metrics missing; diversity, novelty, surprise and profile figures skipped");
    }
    if (const auto p = results_dir / store_files::complexity_metrics; fs::exists(p)) {
        store.complexity = read_records<ComplexityRecord>(p, complexity_record_from_json);
        store.has_complexity = true;
    } else {
        out.warnings.push_back("complexity metrics missing; complexity and pronoun figures skipped");
    }
    fs::create_directories(output_dir);
    const auto emit = [&](const std::string& name, const std::string& svg) {
        const fs::path path = output_dir / name;
        write_text(path, svg);
        out.files.push_back(path);
    };

    std::vector<std::string> categories;
    for (const auto& i : store.item_sets) categories.push_back(i.id);
    const auto stories = assemble_metrics(store.corpus, store.semantic, store.complexity);

    for (const auto& fig : kMetricFigures) {
        if (fig.semantic ? !store.has_semantic : !store.has_complexity) continue;
        Series human{"Human", kHumanColor, {}, {}}, ai{"AI", kAiColor, {}, {}};
        std::size_t defined = 0;
        for (const auto& item : categories) {
            std::vector<double> h, a;
            for (const auto& s : stories) {
                if (s.item_set != item) continue;
                if (auto v = s.get(fig.metric)) (s.author_kind == AuthorKind::human ? h : a).push_back(*v);
            }
            defined += h.size() + a.size();
            const auto mh = summarize(h), ma = summarize(a);
            human.values.push_back(mh.mean);
            human.errors.push_back(mh.se);
            ai.values.push_back(ma.mean);
            ai.errors.push_back(ma.se);
        }
        if (defined == 0) {
            out.warnings.push_back(std::string("no defined values for ") + fig.metric + "; figure skipped");
            continue;
        }
        emit(std::string(fig.metric) + ".svg", bar_chart(fig.title, fig.title, categories, {human, ai}));
    }

    if (store.has_semantic) {
        std::unordered_map<std::string, AuthorKind> author;
        for (const auto& s : store.corpus.stories()) author[s.id] = s.author_kind;
        std::vector<std::vector<double>> steps[2];
        for (const auto& r : store.semantic) {
            const auto it = author.find(r.story_id);
            if (it == author.end() || r.surprise_steps.empty()) continue;
            steps[it->second == AuthorKind::human ? 0 : 1].push_back(r.surprise_steps);
        }
        const auto ph = surprise_profile(steps[0]), pa = surprise_profile(steps[1]);
        int max_pos = 0;
        for (const auto& p : ph) max_pos = std::max(max_pos, p.position);
        for (const auto& p : pa) max_pos = std::max(max_pos, p.position);
        if (max_pos < 2) {
            out.warnings.push_back("no surprise steps; surprise profile skipped");
        } else {
            std::vector<int> xs;
            for (int p = 2; p <= max_pos; ++p) xs.push_back(p);
            const auto fill = [&](const std::vector<ProfilePoint>& pts, Series s) {
                s.values.assign(xs.size(), std::nan(""));
                for (const auto& p : pts) s.values[static_cast<std::size_t>(p.position - 2)] = p.mean;
                return s;
            };
            emit("surprise_profile.svg", line_chart("Surprise profile", "Sentence position", "Mean surprise step", xs,
                                                    {fill(ph, {"Human", kHumanColor, {}, {}}),
                                                     fill(pa, {"AI", kAiColor, {}, {}})}));
        }
    }

    if (const auto p = results_dir / store_files::theme_counts; fs::exists(p)) {
        std::map<std::pair<std::string, std::string>, double> counts;
        read_jsonl(p, [&](const Json& j, std::size_t) {
            counts[{j.at("item_set").get<std::string>(), j.at("group").get<std::string>()}] =
                j.at("num_clusters").get<double>();
        });
        Series human{"Human", kHumanColor, {}, {}}, ai{"AI", kAiColor, {}, {}};
        bool any = false;
        for (const auto& item : categories) {
            const auto h = counts.find({item, "human"}), a = counts.find({item, "ai"});
            any = any || h != counts.end() || a != counts.end();
            human.values.push_back(h == counts.end() ? 0.0 : h->second);
            ai.values.push_back(a == counts.end() ? 0.0 : a->second);
        }
        if (any) {
            emit("theme_counts.svg", bar_chart("Number of themes", "Clusters", categories, {human, ai}));
        } else {
            out.warnings.push_back("theme counts have no per-author groups; figure skipped");
        }
    } else {
        out.warnings.push_back("theme counts missing; theme figure skipped");
    }

    if (store.has_complexity) {
        std::unordered_map<std::string, AuthorKind> author;
        for (const auto& s : store.corpus.stories()) author[s.id] = s.author_kind;
        const std::vector<std::string> persons = {"first", "second", "third singular", "third plural"};
        std::array<std::vector<double>, 4> sums[2];
        for (const auto& r : store.complexity) {
            const auto it = author.find(r.story_id);
            if (it == author.end()) continue;
            auto& dst = sums[it->second == AuthorKind::human ? 0 : 1];
            const auto& pp = r.pronoun_profile;
            dst[0].push_back(pp.first);
            dst[1].push_back(pp.second);
            dst[2].push_back(pp.third_singular);
            dst[3].push_back(pp.third_plural);
        }
        Series human{"Human", kHumanColor, {}, {}}, ai{"AI", kAiColor, {}, {}};
        for (std::size_t k = 0; k < 4; ++k) {
            const auto mh = summarize(sums[0][k]), ma = summarize(sums[1][k]);
            human.values.push_back(mh.mean);
            human.errors.push_back(mh.se);
            ai.values.push_back(ma.mean);
            ai.errors.push_back(ma.se);
        }
        emit("pronoun_use.svg", bar_chart("Pronoun use by person", "Pronouns per story", persons, {human, ai}));
    }
    return out;
}

}  // namespace storyeval
