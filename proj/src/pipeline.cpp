#include "storyeval/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "storyeval/analysis.hpp"
#include "storyeval/corpus.hpp"
#include "storyeval/hash.hpp"
#include "storyeval/judges.hpp"
#include "storyeval/linguistics.hpp"
#include "storyeval/metrics_complexity.hpp"
#include "storyeval/report.hpp"
#include "storyeval/semantic.hpp"
#include "storyeval/stats.hpp"

#ifndef STORYEVAL_TOOLS_DIR
#define STORYEVAL_TOOLS_DIR "tools"
#endif

namespace fs = std::filesystem;

namespace storyeval {

namespace {

constexpr std::array<const char*, 7> kStageNames = {"ingest", "annotate", "metrics", "themes",
                                                    "judges", "analysis", "report"};
constexpr const char* kStampDir = ".stamps";

}  // namespace

std::string_view to_string(Stage stage) { return kStageNames[static_cast<std::size_t>(stage)]; }

Stage parse_stage(std::string_view text) {
    for (std::size_t i = 0; i < kStageNames.size(); ++i) {
        if (text == kStageNames[i]) return kStages[i];
    }
    throw ValidationError("unknown stage: " + std::string(text));
}

std::vector<Stage> upstream(Stage stage) {
    switch (stage) {
        case Stage::ingest: return {};
        case Stage::annotate: return {Stage::ingest};
        case Stage::metrics: return {Stage::ingest, Stage::annotate};
        case Stage::themes: return {Stage::ingest};
        case Stage::judges: return {Stage::ingest};
        case Stage::analysis: return {Stage::ingest, Stage::metrics, Stage::judges};
        case Stage::report: return {Stage::ingest, Stage::annotate, Stage::metrics, Stage::themes, Stage::judges, Stage::analysis};
    }
    return {};
}

StageError::StageError(Stage stage, const std::string& what)
    : Error("stage " + std::string(to_string(stage)) + " failed: " + what), stage_(stage) {}

void RunConfig::validate() const {
    const auto need_file = [](const fs::path& p, const char* what) {
        if (!fs::is_regular_file(p)) throw ValidationError(std::string(what) + " not found: " + p.string());
    };
    need_file(corpus_path, "corpus");
    if (!item_sets_path.empty()) need_file(item_sets_path, "item-set file");
    if (ratings_path) need_file(*ratings_path, "ratings file");
    if (exclusions_path) need_file(*exclusions_path, "exclusion list");
    if (annotator != kRuleBasedAnnotatorId) {
        throw ValidationError("unsupported annotator '" + annotator + "' (available: " + kRuleBasedAnnotatorId + ")");
    }
    if (min_sentences < 1 || max_sentences < min_sentences) throw ValidationError("invalid sentence filter range");
    if (!(cluster_threshold > 0.0)) throw ValidationError("cluster threshold must be positive");
    if (ngram_min < 1 || ngram_max < ngram_min) throw ValidationError("invalid n-gram range");
    if (embedding_model.empty()) throw ValidationError("embedding model id is empty");
    if (embedding_model == kStubModel && stub_dimension == 0) throw ValidationError("stub dimension must be positive");
    if (output_dir.empty()) throw ValidationError("output directory is empty");
}

Json RunConfig::to_json() const {
    const auto opt_path = [](const std::optional<fs::path>& p) { return p ? Json(p->generic_string()) : Json(nullptr); };
    return Json{{"corpus_path", corpus_path.generic_string()},
                {"item_sets_path", item_sets_path.generic_string()},
                {"ratings_path", opt_path(ratings_path)},
                {"exclusions_path", opt_path(exclusions_path)},
                {"embedding_model", embedding_model},
                {"stub_dimension", stub_dimension},
                {"embedding_command", embedding_command},
                {"embedding_cache", embedding_cache.generic_string()},
                {"annotator", annotator},
                {"min_sentences", min_sentences},
                {"max_sentences", max_sentences},
                {"cluster_threshold", cluster_threshold},
                {"ngram_min", ngram_min},
                {"ngram_max", ngram_max},
                {"surprise_mode", std::string(storyeval::to_string(surprise_mode))},
                {"output_dir", output_dir.generic_string()},
                {"seed", seed}};
}

RunConfig RunConfig::from_json(const Json& j) {
    RunConfig c;
    const auto opt_path = [&](const char* key) -> std::optional<fs::path> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return fs::path(j.at(key).get<std::string>());
    };
    try {
        c.corpus_path = j.at("corpus_path").get<std::string>();
        c.item_sets_path = j.value("item_sets_path", std::string());
        c.ratings_path = opt_path("ratings_path");
        c.exclusions_path = opt_path("exclusions_path");
        c.embedding_model = j.value("embedding_model", std::string(kStubModel));
        c.stub_dimension = j.value("stub_dimension", c.stub_dimension);
        c.embedding_command = j.value("embedding_command", std::string());
        c.embedding_cache = j.value("embedding_cache", std::string());
        c.annotator = j.value("annotator", std::string(kRuleBasedAnnotatorId));
        c.min_sentences = j.value("min_sentences", c.min_sentences);
        c.max_sentences = j.value("max_sentences", c.max_sentences);
        c.cluster_threshold = j.value("cluster_threshold", c.cluster_threshold);
        c.ngram_min = j.value("ngram_min", c.ngram_min);
        c.ngram_max = j.value("ngram_max", c.ngram_max);
        c.surprise_mode = parse_surprise_mode(j.value("surprise_mode", std::string("dispersion_delta")));
        c.output_dir = j.value("output_dir", std::string("results"));
        c.seed = j.value("seed", c.seed);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("run config: ") + e.what());
    }
    return c;
}

std::string RunConfig::hash() const { return sha256_hex(to_json().dump()); }

const StageRecord* RunManifest::find(Stage stage) const {
    for (const auto& s : stages) {
        if (s.stage == stage) return &s;
    }
    return nullptr;
}

Json RunManifest::to_json() const {
    Json stage_list = Json::array();
    for (const auto& s : stages) {
        Json j{{"stage", std::string(storyeval::to_string(s.stage))},
               {"status", s.status},
               {"duration_ms", s.duration_ms},
               {"outputs", s.outputs},
               {"warnings", s.warnings}};
        if (!s.error.empty()) j["error"] = s.error;
        stage_list.push_back(std::move(j));
    }
    return Json{{"config_hash", config_hash}, {"config", config}, {"stages", stage_list}};
}

namespace {

/// Shared state for one stage execution.
class StageContext {
public:
    StageContext(const RunConfig& config, StageRecord& record) : config_(config), record_(record) {}

    const RunConfig& config() const { return config_; }
    fs::path path(const char* name) const { return config_.output_dir / name; }
    void warn(std::string message) { record_.warnings.push_back(std::move(message)); }
    template <class It>
    void warn_all(It first, It last) {
        record_.warnings.insert(record_.warnings.end(), first, last);
    }

    void jsonl(const char* name, const std::vector<Json>& records) {
        write_jsonl(path(name), records);
        record_.outputs.emplace_back(name);
    }
    void json(const char* name, const Json& value) {
        write_json(path(name), value);
        record_.outputs.emplace_back(name);
    }
    void text(const char* name, const std::string& value) {
        write_text(path(name), value);
        record_.outputs.emplace_back(name);
    }
    void produced(const fs::path& relative) { record_.outputs.push_back(relative.generic_string()); }

    std::vector<ItemSet> item_sets() const {
        const auto p = path(store_files::item_sets);
        return fs::exists(p) ? load_item_sets(p) : default_item_sets();
    }
    Corpus corpus() const { return load_corpus(require(store_files::corpus), item_sets()); }

    fs::path require(const char* name) const {
        const auto p = path(name);
        if (!fs::exists(p)) throw IoError("missing " + p.string() + "; run the stage that produces it first");
        return p;
    }

    Embedder& embedder() {
        if (!embedder_) {
            if (config_.embedding_model == kStubModel) {
                backend_ = std::make_unique<HashStubBackend>(config_.stub_dimension, config_.seed);
            } else {
                std::string command = config_.embedding_command;
                if (command.empty()) command = std::string("python3 ") + STORYEVAL_TOOLS_DIR + "/embed_sentences.py";
                backend_ = std::make_unique<CommandBackend>(command, config_.embedding_model);
            }
            const fs::path cache = config_.embedding_cache.empty() ? path("embedding_cache.jsonl") : config_.embedding_cache;
            // external models pay a start-up cost per call, so batch them widely
            const std::size_t batch = config_.embedding_model == kStubModel ? 32 : 1024;
            embedder_ = std::make_unique<Embedder>(*backend_, std::make_shared<EmbeddingCache>(cache), batch);
        }
        return *embedder_;
    }

private:
    const RunConfig& config_;
    StageRecord& record_;
    std::unique_ptr<EmbeddingBackend> backend_;
    std::unique_ptr<Embedder> embedder_;
};

template <class T, class F>
std::vector<T> read_records(const fs::path& path, F&& from_json) {
    std::vector<T> out;
    read_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(from_json(j)); });
    return out;
}

template <class T>
std::vector<Json> to_records(const std::vector<T>& items) {
    std::vector<Json> out;
    out.reserve(items.size());
    for (const auto& x : items) out.push_back(to_json(x));
    return out;
}

unsigned worker_count(const RunConfig& config, std::size_t jobs) {
    unsigned n = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Calls fn(i) for i in [0, n) on a pool of threads. The first exception
/// (lowest index) is rethrown after all workers stop.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string fixed(double v, int precision = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

void ingest(StageContext& ctx) {
    const auto& cfg = ctx.config();
    const auto item_sets = cfg.item_sets_path.empty() ? default_item_sets() : load_item_sets(cfg.item_sets_path);
    save_item_sets(ctx.path(store_files::item_sets), item_sets);
    ctx.produced(store_files::item_sets);

    Corpus corpus = load_corpus(cfg.corpus_path, item_sets);
    if (cfg.exclusions_path) {
        auto r = exclude_stories(corpus, load_exclusion_list(*cfg.exclusions_path));
        if (r.removed) ctx.warn("excluded " + std::to_string(r.removed) + " listed stories");
        corpus = std::move(r.corpus);
    }
    const RuleBasedAnnotator annotator;
    for (auto& s : corpus.stories()) s.sentence_count = static_cast<int>(annotator.split_sentences(s.text).size());
    auto filtered = filter_by_sentence_count(corpus, cfg.min_sentences, cfg.max_sentences);
    if (filtered.removed) {
        ctx.warn("removed " + std::to_string(filtered.removed) + " stories outside " + std::to_string(cfg.min_sentences) +
                 "-" + std::to_string(cfg.max_sentences) + " sentences");
    }
    save_corpus(ctx.path(store_files::corpus), filtered.corpus);
    ctx.produced(store_files::corpus);
    ctx.text(store_files::corpus_statistics, corpus_statistics(filtered.corpus).to_csv());
}

void annotate_stage(StageContext& ctx) {
    Corpus corpus = ctx.corpus();
    const RuleBasedAnnotator annotator;
    auto& stories = corpus.stories();
    std::vector<Annotation> annotations(stories.size());
    std::vector<std::optional<int>> before(stories.size());
    for (std::size_t i = 0; i < stories.size(); ++i) before[i] = stories[i].sentence_count;
    parallel_for(stories.size(), worker_count(ctx.config(), stories.size()),
                 [&](std::size_t i) { annotations[i] = annotate(stories[i], annotator); });
    for (std::size_t i = 0; i < stories.size(); ++i) {
        if (before[i] && before[i] != stories[i].sentence_count) {
            ctx.warn("story " + stories[i].id + ": sentence count changed from " + std::to_string(*before[i]));
        }
    }
    ctx.jsonl(store_files::annotations, to_records(annotations));
}

std::vector<Annotation> load_annotations(StageContext& ctx, const Corpus& corpus) {
    auto all = read_records<Annotation>(ctx.require(store_files::annotations), annotation_from_json);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) index[all[i].story_id] = i;
    std::vector<Annotation> ordered;
    ordered.reserve(corpus.size());
    for (const auto& s : corpus.stories()) {
        const auto it = index.find(s.id);
        if (it == index.end()) throw ValidationError("story " + s.id + " has no annotation; rerun annotate");
        ordered.push_back(std::move(all[it->second]));
    }
    return ordered;
}

std::string metric_summary_csv(const Corpus& corpus, std::span<const StoryMetrics> stories) {
    std::vector<std::string> names = semantic_metric_names();
    for (const auto* group : {&lexical_complexity_names(), &syntactic_complexity_names()}) {
        names.insert(names.end(), group->begin(), group->end());
    }
    std::ostringstream out;
    out << "metric,item_set,author_kind,n,mean,sd\n";
    std::vector<std::string> item_ids;
    for (const auto& i : corpus.item_sets()) item_ids.push_back(i.id);
    item_ids.emplace_back("all");
    for (const auto& name : names) {
        for (const auto& item : item_ids) {
            for (auto kind : {AuthorKind::human, AuthorKind::ai}) {
                std::vector<double> xs;
                for (const auto& s : stories) {
                    if (s.author_kind != kind || (item != "all" && s.item_set != item)) continue;
                    if (auto v = s.get(name)) xs.push_back(*v);
                }
                out << name << ',' << item << ',' << to_string(kind) << ',' << xs.size() << ',';
                if (xs.empty()) {
                    out << ",\n";
                    continue;
                }
                out << fixed(stats::mean(xs)) << ',' << fixed(stats::sample_sd(xs)) << '\n';
            }
        }
    }
    return out.str();
}

void metrics_stage(StageContext& ctx) {
    const auto& cfg = ctx.config();
    const Corpus corpus = ctx.corpus();
    const auto annotations = load_annotations(ctx, corpus);

    SemanticMetricsConfig sc;
    sc.ngram_min = cfg.ngram_min;
    sc.ngram_max = cfg.ngram_max;
    sc.surprise_mode = cfg.surprise_mode;
    std::vector<std::string> warnings;
    const auto semantic = compute_semantic_metrics(corpus, annotations, ctx.embedder(), sc, &warnings);
    ctx.warn_all(warnings.begin(), warnings.end());
    ctx.jsonl(store_files::semantic_metrics, to_records(semantic));

    std::vector<ComplexityRecord> complexity;
    complexity.reserve(annotations.size());
    for (const auto& a : annotations) complexity.push_back(complexity_record(a));
    ctx.jsonl(store_files::complexity_metrics, to_records(complexity));

    const auto stories = assemble_metrics(corpus, semantic, complexity);
    ctx.text(store_files::metric_summary, metric_summary_csv(corpus, stories));

    std::vector<std::vector<double>> steps[2];
    for (std::size_t i = 0; i < semantic.size(); ++i) {
        if (semantic[i].surprise_steps.empty()) continue;
        steps[corpus.stories()[i].author_kind == AuthorKind::human ? 0 : 1].push_back(semantic[i].surprise_steps);
    }
    std::map<int, std::pair<const ProfilePoint*, const ProfilePoint*>> rows;
    const auto ph = surprise_profile(steps[0]), pa = surprise_profile(steps[1]);
    for (const auto& p : ph) rows[p.position].first = &p;
    for (const auto& p : pa) rows[p.position].second = &p;
    std::ostringstream profile;
    profile << "position,human_mean,human_stories,ai_mean,ai_stories\n";
    for (const auto& [pos, pair] : rows) {
        profile << pos;
        for (const auto* p : {pair.first, pair.second}) {
            if (p) profile << ',' << fixed(p->mean) << ',' << p->stories;
            else profile << ",,0";
        }
        profile << '\n';
    }
    ctx.text(store_files::surprise_profile, profile.str());
}

void themes_stage(StageContext& ctx) {
    const Corpus corpus = ctx.corpus();
    ThemeOptions options;
    options.threshold = ctx.config().cluster_threshold;
    const auto report = theme_counts(corpus, ctx.embedder(), options);
    ctx.warn_all(report.warnings.begin(), report.warnings.end());
    ctx.jsonl(store_files::theme_assignments, report.assignment_records());
    std::vector<Json> counts;
    for (const auto& c : report.counts) {
        counts.push_back(Json{{"item_set", c.item_set}, {"group", c.group}, {"num_clusters", c.num_clusters}, {"stories", c.stories}});
    }
    ctx.jsonl(store_files::theme_counts, counts);
    ctx.text(store_files::theme_counts_csv, report.counts_csv());
}

void judges_stage(StageContext& ctx) {
    const auto& cfg = ctx.config();
    if (!cfg.ratings_path) throw ValidationError("no ratings path configured");
    const Corpus corpus = ctx.corpus();
    std::vector<Rating> ratings;
    std::size_t dropped = 0;
    for (auto& r : load_ratings(*cfg.ratings_path)) {
        if (corpus.find_story(r.story_id)) ratings.push_back(std::move(r));
        else ++dropped;
    }
    if (dropped) ctx.warn("ignored " + std::to_string(dropped) + " ratings of stories not in the filtered corpus");
    if (ratings.empty()) throw ValidationError("no ratings refer to stories in the corpus");

    const auto comps = composites(ratings);
    ctx.jsonl(store_files::composites, to_records(comps));
    const auto authors = author_map(corpus);
    ctx.text(store_files::rating_summary, rating_summary_table(rating_summary(comps, authors)));

    std::ostringstream icc_csv;
    icc_csv << "judge_type,variable,icc,batches,stories\n";
    for (auto type : kJudgeTypes) {
        for (auto var : kRatingVariables) {
            const auto s = icc(ratings, type, var);
            ctx.warn_all(s.warnings.begin(), s.warnings.end());
            std::size_t stories = 0;
            for (const auto& b : s.batches) stories += b.stories;
            icc_csv << to_string(type) << ',' << to_string(var) << ',' << (s.value ? fixed(*s.value) : "") << ','
                    << s.batches.size() << ',' << stories << '\n';
        }
    }
    ctx.text(store_files::icc, icc_csv.str());

    std::ostringstream turing;
    turing << "judge_type,accuracy\n";
    for (const auto& [type, acc] : turing_accuracy(comps, authors)) turing << to_string(type) << ',' << fixed(acc) << '\n';
    ctx.text(store_files::turing_accuracy, turing.str());

    Json correlations = Json::object();
    for (auto type : kJudgeTypes) {
        try {
            correlations[std::string(to_string(type))] = to_json(rating_correlations(comps, type));
        } catch (const DomainError& e) {
            ctx.warn(std::string(to_string(type)) + " rating correlations: " + e.what());
        }
    }
    ctx.json(store_files::rating_correlations, correlations);
}

void analysis_stage(StageContext& ctx) {
    const Corpus corpus = ctx.corpus();
    const auto semantic = read_records<SemanticMetricRecord>(ctx.require(store_files::semantic_metrics), semantic_record_from_json);
    const auto complexity = read_records<ComplexityRecord>(ctx.require(store_files::complexity_metrics), complexity_record_from_json);
    const auto comps = read_records<CompositeRating>(ctx.require(store_files::composites), composite_from_json);
    const auto stories = assemble_metrics(corpus, semantic, complexity);

    std::vector<std::string> names = semantic_metric_names();
    for (const auto* group : {&lexical_complexity_names(), &syntactic_complexity_names()}) {
        names.insert(names.end(), group->begin(), group->end());
    }

    std::vector<Json> overall;
    std::ostringstream csv;
    csv << "metric,human_mean,human_sd,human_n,ai_mean,ai_sd,ai_n,t,df,p,stars\n";
    for (const auto& name : names) {
        try {
            const auto c = compare_authors(stories, name);
            overall.push_back(to_json(c));
            csv << name << ',' << fixed(c.mean_a) << ',' << fixed(c.sd_a) << ',' << c.n_a << ',' << fixed(c.mean_b) << ','
                << fixed(c.sd_b) << ',' << c.n_b << ',' << fixed(c.t, 3) << ',' << fixed(c.df, 1) << ','
                << std::setprecision(3) << std::scientific << c.p << std::defaultfloat << ',' << c.stars << '\n';
        } catch (const DomainError& e) {
            ctx.warn(name + ": " + e.what());
        }
    }
    ctx.jsonl(store_files::comparisons, overall);
    ctx.text(store_files::comparisons_csv, csv.str());

    std::vector<Json> per_item;
    for (const auto& item : corpus.item_sets()) {
        std::vector<StoryMetrics> subset;
        std::copy_if(stories.begin(), stories.end(), std::back_inserter(subset),
                     [&](const StoryMetrics& s) { return s.item_set == item.id; });
        if (subset.empty()) continue;
        for (const auto& name : names) {
            try {
                Json j = to_json(compare_authors(subset, name));
                j["item_set"] = item.id;
                per_item.push_back(std::move(j));
            } catch (const DomainError& e) {
                ctx.warn(item.id + " " + name + ": " + e.what());
            }
        }
    }
    ctx.jsonl(store_files::item_set_comparisons, per_item);

    std::vector<Json> strat;
    const std::vector<std::string> strat_metrics = {"mean_ngram_diversity", "inverse_homogenization", "novelty", "surprise"};
    try {
        for (const auto& s : stratify_by_semdis(stories, corpus.item_sets(), strat_metrics)) {
            Json j = to_json(s.comparison);
            j["author_kind"] = std::string(to_string(s.author_kind));
            strat.push_back(std::move(j));
        }
    } catch (const DomainError& e) {
        ctx.warn(std::string("semantic-distance stratification: ") + e.what());
    }
    ctx.jsonl(store_files::stratified, strat);

    RegressionSpec spec;
    try {
        spec = select_regression_spec(stories, comps, JudgeType::expert);
    } catch (const DomainError& e) {
        ctx.warn(std::string("representative metric selection fell back to defaults: ") + e.what());
    }
    Json regressions = Json::object();
    std::vector<RegressionResult> results;
    std::vector<std::string> labels;
    for (auto type : kJudgeTypes) {
        try {
            auto r = regress_creativity(stories, comps, type, spec);
            regressions[std::string(to_string(type))] = to_json(r);
            if (r.dropped) ctx.warn(std::string(to_string(type)) + " regression dropped " + std::to_string(r.dropped) + " incomplete stories");
            results.push_back(std::move(r));
            labels.emplace_back(to_string(type));
        } catch (const DomainError& e) {
            ctx.warn(std::string(to_string(type)) + " regression: " + e.what());
        }
    }
    ctx.json(store_files::regression,
             Json{{"syntactic_metric", spec.syntactic_metric}, {"lexical_metric", spec.lexical_metric}, {"results", regressions}});
    ctx.text(store_files::regression_table, regression_table(results, labels));
}

std::string markdown_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    bool header = true;
    while (std::getline(in, line)) {
        std::string row = "|";
        std::size_t cols = 0;
        std::istringstream fields(line);
        std::string f;
        while (std::getline(fields, f, ',')) {
            row += " " + f + " |";
            ++cols;
        }
        out += row + "\n";
        if (header) {
            out += "|";
            for (std::size_t i = 0; i < cols; ++i) out += "---|";
            out += "\n";
            header = false;
        }
    }
    return out;
}

void report_stage(StageContext& ctx) {
    const Corpus corpus = ctx.corpus();
    std::ostringstream md;
    md << "# Story evaluation report\n\n";
    md << "Stories after filtering: " << corpus.size() << "\n\n";
    md << "## Corpus\n\n" << markdown_from_csv(corpus_statistics(corpus).to_csv()) << '\n';

    if (fs::exists(ctx.path(store_files::annotations))) {
        const auto annotations = load_annotations(ctx, corpus);
        const auto human = top_ngrams(corpus, annotations, 5, 20, AuthorKind::human);
        const auto ai = top_ngrams(corpus, annotations, 5, 20, AuthorKind::ai);
        const auto table = ngram_table_csv(human, ai);
        ctx.text(store_files::top_ngrams, table);
        md << "## Most frequent 5-grams\n\n" << markdown_from_csv(table) << '\n';
    } else {
        ctx.warn("annotations missing; 5-gram table skipped");
    }
    const auto include = [&](const char* file, const char* title) {
        const auto p = ctx.path(file);
        if (fs::exists(p)) md << "## " << title << "\n\n" << markdown_from_csv(read_text(p)) << '\n';
    };
    include(store_files::comparisons_csv, "Human vs AI");
    include(store_files::theme_counts_csv, "Themes");
    include(store_files::rating_summary, "Ratings");
    include(store_files::turing_accuracy, "Author identification accuracy");
    include(store_files::icc, "Inter-rater reliability");
    include(store_files::regression_table, "Creativity regression");

    const fs::path fig_dir = ctx.path(store_files::figures_dir);
    if (fs::exists(fig_dir)) {
        for (const auto& e : fs::directory_iterator(fig_dir)) {
            if (e.path().extension() == ".svg") fs::remove(e.path());
        }
    }
    const auto figures = render_figures(ctx.config().output_dir, fig_dir);
    ctx.warn_all(figures.warnings.begin(), figures.warnings.end());
    md << "## Figures\n\n";
    for (const auto& f : figures.files) {
        const auto rel = fs::path(store_files::figures_dir) / f.filename();
        ctx.produced(rel);
        md << "![" << f.stem().string() << "](" << rel.generic_string() << ")\n";
    }
    ctx.text(store_files::report, md.str());
}

void execute(Stage stage, StageContext& ctx) {
    switch (stage) {
        case Stage::ingest: return ingest(ctx);
        case Stage::annotate: return annotate_stage(ctx);
        case Stage::metrics: return metrics_stage(ctx);
        case Stage::themes: return themes_stage(ctx);
        case Stage::judges: return judges_stage(ctx);
        case Stage::analysis: return analysis_stage(ctx);
        case Stage::report: return report_stage(ctx);
    }
}

std::string file_digest(const fs::path& p) { return fs::exists(p) ? sha256_hex(read_text(p)) : std::string(); }

/// Files a stage reads. Results-store inputs are relative to the output
/// directory; external inputs are absolute or as configured.
std::vector<fs::path> stage_inputs(const RunConfig& cfg, Stage stage) {
    const auto in_store = [&](std::initializer_list<const char*> names) {
        std::vector<fs::path> out;
        for (const char* n : names) out.push_back(cfg.output_dir / n);
        return out;
    };
    switch (stage) {
        case Stage::ingest: {
            std::vector<fs::path> out{cfg.corpus_path};
            if (!cfg.item_sets_path.empty()) out.push_back(cfg.item_sets_path);
            if (cfg.exclusions_path) out.push_back(*cfg.exclusions_path);
            return out;
        }
        case Stage::annotate: return in_store({store_files::item_sets, store_files::corpus});
        case Stage::metrics: return in_store({store_files::item_sets, store_files::corpus, store_files::annotations});
        case Stage::themes: return in_store({store_files::item_sets, store_files::corpus});
        case Stage::judges: {
            auto out = in_store({store_files::item_sets, store_files::corpus});
            if (cfg.ratings_path) out.push_back(*cfg.ratings_path);
            return out;
        }
        case Stage::analysis:
            return in_store({store_files::item_sets, store_files::corpus, store_files::semantic_metrics,
                             store_files::complexity_metrics, store_files::composites});
        case Stage::report:
            return in_store({store_files::item_sets, store_files::corpus, store_files::annotations,
                             store_files::semantic_metrics, store_files::complexity_metrics, store_files::theme_counts,
                             store_files::theme_counts_csv, store_files::comparisons_csv, store_files::rating_summary,
                             store_files::turing_accuracy, store_files::icc, store_files::regression_table});
    }
    return {};
}

Json stamp_for(const RunConfig& cfg, Stage stage, const std::vector<std::string>& outputs) {
    Json inputs = Json::object(), outs = Json::object();
    for (const auto& p : stage_inputs(cfg, stage)) inputs[p.generic_string()] = file_digest(p);
    for (const auto& o : outputs) outs[o] = file_digest(cfg.output_dir / o);
    return Json{{"config_hash", cfg.hash()}, {"inputs", inputs}, {"outputs", outs}};
}

fs::path stamp_path(const RunConfig& cfg, Stage stage) {
    return cfg.output_dir / kStampDir / (std::string(to_string(stage)) + ".json");
}

/// Outputs recorded by a current stamp, or nothing if the stage must run.
std::optional<std::vector<std::string>> current_outputs(const RunConfig& cfg, Stage stage) {
    const auto p = stamp_path(cfg, stage);
    if (!fs::exists(p)) return std::nullopt;
    Json stamp;
    try {
        stamp = read_json(p);
    } catch (const Error&) {
        return std::nullopt;
    }
    std::vector<std::string> outputs;
    const auto recorded = stamp.value("outputs", Json::object());
    for (const auto& [name, digest] : recorded.items()) {
        if (digest.get<std::string>().empty()) return std::nullopt;
        outputs.push_back(name);
    }
    if (stamp_for(cfg, stage, outputs) != stamp) return std::nullopt;
    return outputs;
}

StageRecord timed_run(const RunConfig& cfg, Stage stage) {
    StageRecord record;
    record.stage = stage;
    StageContext ctx(cfg, record);
    const auto start = std::chrono::steady_clock::now();
    try {
        execute(stage, ctx);
    } catch (const std::exception& e) {
        record.status = "failed";
        record.error = e.what();
        record.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return record;
    }
    record.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    record.status = "complete";
    fs::create_directories(cfg.output_dir / kStampDir);
    write_json(stamp_path(cfg, stage), stamp_for(cfg, stage, record.outputs));
    return record;
}

}  // namespace

StageRecord run_stage(const RunConfig& config, Stage stage) {
    config.validate();
    if (stage == Stage::judges && !config.ratings_path) {
        throw StageError(stage, "no ratings path configured");
    }
    fs::create_directories(config.output_dir);
    auto record = timed_run(config, stage);
    if (record.status == "failed") throw StageError(stage, record.error);
    return record;
}

RunManifest run_pipeline(const RunConfig& config, const RunOptions& options) {
    config.validate();
    fs::create_directories(config.output_dir);
    RunManifest manifest;
    manifest.config_hash = config.hash();
    manifest.config = config.to_json();
    std::set<Stage> ran;
    std::set<Stage> skipped;
    const auto write_manifest = [&] { write_json(config.output_dir / store_files::manifest, manifest.to_json()); };

    for (Stage stage : kStages) {
        if ((stage == Stage::judges || stage == Stage::analysis) && !config.ratings_path) {
            StageRecord r;
            r.stage = stage;
            r.status = "skipped";
            r.warnings.push_back("no ratings path configured");
            manifest.stages.push_back(std::move(r));
            skipped.insert(stage);
            continue;
        }
        const auto deps = upstream(stage);
        const bool upstream_ran = std::any_of(deps.begin(), deps.end(), [&](Stage s) { return ran.count(s) > 0; });
        if (!options.force && !upstream_ran) {
            if (auto outputs = current_outputs(config, stage)) {
                StageRecord r;
                r.stage = stage;
                r.status = "cached";
                r.outputs = std::move(*outputs);
                manifest.stages.push_back(std::move(r));
                continue;
            }
        }
        auto record = timed_run(config, stage);
        manifest.stages.push_back(record);
        if (record.status == "failed") {
            write_manifest();
            throw StageError(stage, record.error);
        }
        ran.insert(stage);
    }
    write_manifest();
    return manifest;
}

}  // namespace storyeval
