#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "storyeval/pipeline.hpp"
#include "storyeval/report.hpp"
#include "storyeval/store.hpp"
#include "support.hpp"

using namespace storyeval;
using namespace storyeval::test;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Every file under `root` except the manifest and stage stamps, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), root).generic_string();
        if (rel == store_files::manifest || rel.rfind(".stamps/", 0) == 0) continue;
        out[rel] = slurp(entry.path());
    }
    return out;
}

/// The first ten stories of the fixture that pass the sentence filter.
fs::path ten_story_corpus(const TempDir& dir) {
    const auto path = dir / "ten.jsonl";
    std::vector<Json> kept;
    read_jsonl(data_dir() / "fixture_corpus.jsonl", [&](const Json& j, std::size_t) {
        const auto id = j.at("id").get<std::string>();
        if (kept.size() < 10 && id != "h-short" && id != "a-long") kept.push_back(j);
    });
    write_jsonl(path, kept);
    return path;
}

RunConfig fixture_config(const fs::path& out, bool with_ratings = true) {
    RunConfig c;
    c.corpus_path = data_dir() / "fixture_corpus.jsonl";
    if (with_ratings) c.ratings_path = data_dir() / "fixture_ratings.jsonl";
    c.output_dir = out;
    c.stub_dimension = 32;
    c.threads = 2;
    return c;
}

std::map<Stage, std::string> statuses(const RunManifest& m) {
    std::map<Stage, std::string> out;
    for (const auto& s : m.stages) out[s.stage] = s.status;
    return out;
}

/// The stage plus every stage downstream of it.
std::set<Stage> rerun_closure(Stage changed) {
    std::set<Stage> out{changed};
    for (Stage s : kStages) {
        for (Stage u : upstream(s)) {
            if (out.count(u)) out.insert(s);
        }
    }
    return out;
}

}  // namespace

TEST(PipelineExamples, TenStorySmokeRunCompletes) {
    TempDir dir;
    auto config = fixture_config(dir / "out", false);
    config.corpus_path = ten_story_corpus(dir);
    const auto manifest = run_pipeline(config);
    ASSERT_EQ(manifest.stages.size(), kStages.size());
    for (const auto& s : manifest.stages) {
        if (s.stage == Stage::judges || s.stage == Stage::analysis) continue;
        EXPECT_EQ(s.status, "complete") << to_string(s.stage) << ": " << s.error;
    }
    EXPECT_TRUE(fs::exists(dir / "out" / store_files::manifest));
    EXPECT_TRUE(fs::exists(dir / "out" / store_files::report));
}

TEST(PipelineExamples, RerunIsCachedAndIdentical) {
    TempDir dir;
    const auto config = fixture_config(dir / "out");
    const auto first = run_pipeline(config);
    for (const auto& s : first.stages) ASSERT_EQ(s.status, "complete") << to_string(s.stage) << ": " << s.error;
    const auto before = snapshot(config.output_dir);
    const auto second = run_pipeline(config);
    for (const auto& s : second.stages) EXPECT_EQ(s.status, "cached") << to_string(s.stage);
    EXPECT_EQ(snapshot(config.output_dir), before);

    // a fresh directory rebuilt from scratch matches byte for byte
    fs::remove_all(config.output_dir);
    run_pipeline(config);
    EXPECT_EQ(snapshot(config.output_dir), before);
}

TEST(PipelineExamples, MissingRatingsSkipsJudgeStages) {
    TempDir dir;
    const auto manifest = run_pipeline(fixture_config(dir / "out", false));
    const auto s = statuses(manifest);
    EXPECT_EQ(s.at(Stage::judges), "skipped");
    EXPECT_EQ(s.at(Stage::analysis), "skipped");
    for (Stage st : {Stage::ingest, Stage::annotate, Stage::metrics, Stage::themes, Stage::report}) {
        EXPECT_EQ(s.at(st), "complete") << to_string(st);
    }
    EXPECT_THROW(run_stage(fixture_config(dir / "out", false), Stage::judges), StageError);
}

TEST(PipelineExamples, FixtureFiveGramsIncludeLibraryOpening) {
    TempDir dir;
    const auto config = fixture_config(dir / "out");
    run_pipeline(config);
    const auto table = slurp(config.output_dir / store_files::top_ngrams);
    EXPECT_NE(table.find("in the heart of the"), std::string::npos);
}

TEST(PipelineUnit, FailingStageNamesItselfAndWritesManifest) {
    TempDir dir;
    write_text(dir / "bad.jsonl", "{not json\n");
    auto config = fixture_config(dir / "out");
    config.corpus_path = dir / "bad.jsonl";
    try {
        run_pipeline(config);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), Stage::ingest);
        EXPECT_EQ(std::string(e.what()).rfind("stage ingest failed", 0), 0u) << e.what();
    }
    const auto manifest = read_json(dir / "out" / store_files::manifest);
    EXPECT_EQ(manifest.at("stages").back().at("status"), "failed");
}

TEST(PipelineUnit, ConfigValidation) {
    TempDir dir;
    auto config = fixture_config(dir / "out");
    config.corpus_path = dir / "missing.jsonl";
    EXPECT_THROW(config.validate(), ValidationError);
    config = fixture_config(dir / "out");
    config.min_sentences = 8;
    EXPECT_THROW(config.validate(), ValidationError);
}

TEST(PipelineUnit, ConfigJsonRoundTrip) {
    auto config = fixture_config("/tmp/x");
    config.surprise_mode = SurpriseMode::adjacent_distance;
    config.seed = 42;
    const auto back = RunConfig::from_json(config.to_json());
    EXPECT_EQ(back.to_json(), config.to_json());
    EXPECT_EQ(back.hash(), config.hash());
}

TEST(PipelineUnit, StageNames) {
    for (Stage s : kStages) EXPECT_EQ(parse_stage(to_string(s)), s);
    EXPECT_THROW(parse_stage("embed"), ValidationError);
}

TEST(ReportExamples, SingleStoryFiveGram) {
    Corpus corpus(default_item_sets(), {Story{"s", AuthorKind::ai, "", "stamp", "a b c d e", 1}});
    const std::vector<Annotation> annotations{flat_annotation({{"a", "b", "c", "d", "e"}}, "s")};
    const auto top = top_ngrams(corpus, annotations, 5, 10, AuthorKind::ai);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0], (NgramCount{"a b c d e", 1}));
    EXPECT_TRUE(top_ngrams(corpus, annotations, 5, 10, AuthorKind::human).empty());
}

TEST(ReportExamples, LargeKReturnsEverything) {
    Corpus corpus(default_item_sets(), {Story{"s", AuthorKind::human, "", "stamp", "x", 1},
                                        Story{"t", AuthorKind::human, "", "stamp", "y", 1}});
    const std::vector<Annotation> annotations{flat_annotation({{"b", "a", "b", "a"}}, "s"),
                                              flat_annotation({{"c", "c"}}, "t")};
    const auto top = top_ngrams(corpus, annotations, 1, 100, AuthorKind::human);
    // counts: a 2, b 2, c 2, so order falls back to the n-gram text
    EXPECT_EQ(top, (std::vector<NgramCount>{{"a", 2}, {"b", 2}, {"c", 2}}));
    const auto bigrams = top_ngrams(corpus, annotations, 2, 100, AuthorKind::human);
    EXPECT_EQ(bigrams, (std::vector<NgramCount>{{"b a", 2}, {"a b", 1}, {"c c", 1}}));
    EXPECT_EQ(top_ngrams(corpus, annotations, 2, 1, AuthorKind::human).size(), 1u);
}

TEST(ReportExamples, EmptyResultsGiveNoFigures) {
    TempDir dir;
    const auto figures = render_figures(dir / "nothing", dir / "figs");
    EXPECT_TRUE(figures.files.empty());
    EXPECT_FALSE(figures.warnings.empty());
}

TEST(ReportExamples, FixtureRunRendersFigureInventory) {
    TempDir dir;
    const auto config = fixture_config(dir / "out");
    run_pipeline(config);
    const auto figures = render_figures(config.output_dir, dir / "figs");
    EXPECT_GE(figures.files.size(), 10u);
    for (const auto& f : figures.files) {
        EXPECT_TRUE(fs::exists(f));
        EXPECT_EQ(slurp(f).rfind("<svg", 0), 0u) << f;
    }
}

TEST(ReportUnit, NgramCsvPairsColumns) {
    const std::vector<NgramCount> human{{"a b", 3}}, ai{{"c d", 5}, {"e f", 1}};
    const auto csv = ngram_table_csv(human, ai);
    EXPECT_NE(csv.find("a b"), std::string::npos);
    EXPECT_NE(csv.find("e f"), std::string::npos);
}

TEST(PipelineProperties, RerunTouchesOnlyChangedStageAndDependents) {
    TempDir dir;
    const auto config = fixture_config(dir / "out");
    run_pipeline(config);
    std::mt19937_64 rng(kSeed);
    std::uniform_int_distribution<std::size_t> pick_stage(0, kStages.size() - 1);
    std::bernoulli_distribution corrupt(0.5);
    for (int i = 0; i < kInstances; ++i) {
        const Stage stage = kStages[pick_stage(rng)];
        const auto stamp = read_json(config.output_dir / ".stamps" / (std::string(to_string(stage)) + ".json"));
        std::vector<std::string> outputs;
        for (const auto& [name, digest] : stamp.at("outputs").items()) outputs.push_back(name);
        ASSERT_FALSE(outputs.empty()) << to_string(stage);
        std::uniform_int_distribution<std::size_t> pick_output(0, outputs.size() - 1);
        const auto target = config.output_dir / outputs[pick_output(rng)];
        if (corrupt(rng)) {
            write_text(target, "corrupted\n");
        } else {
            fs::remove(target);
        }
        const auto expected = rerun_closure(stage);
        const auto manifest = run_pipeline(config);
        for (const auto& s : manifest.stages) {
            ASSERT_EQ(s.status, expected.count(s.stage) ? "complete" : "cached")
                << "changed " << to_string(stage) << ", stage " << to_string(s.stage);
        }
    }
    record_instances(kInstances);
}

TEST(PipelineProperties, ConfigHashTracksEveryField) {
    std::mt19937_64 rng(kSeed + 1);
    const auto base = fixture_config("/tmp/base");
    using Mutation = std::function<void(RunConfig&, int)>;
    const std::vector<Mutation> mutations{
        [](RunConfig& c, int v) { c.corpus_path = "/data/corpus" + std::to_string(v) + ".jsonl"; },
        [](RunConfig& c, int v) { c.item_sets_path = "/data/sets" + std::to_string(v) + ".json"; },
        [](RunConfig& c, int v) { c.ratings_path = "/data/ratings" + std::to_string(v) + ".jsonl"; },
        [](RunConfig& c, int) { c.ratings_path.reset(); },
        [](RunConfig& c, int v) { c.exclusions_path = "/data/x" + std::to_string(v) + ".txt"; },
        [](RunConfig& c, int v) { c.embedding_model = "model-" + std::to_string(v); },
        [](RunConfig& c, int v) { c.stub_dimension = 33 + static_cast<std::size_t>(v); },
        [](RunConfig& c, int v) { c.embedding_command = "embed --v " + std::to_string(v); },
        [](RunConfig& c, int v) { c.embedding_cache = "/cache/" + std::to_string(v); },
        [](RunConfig& c, int v) { c.annotator = "other@" + std::to_string(v); },
        [](RunConfig& c, int v) { c.min_sentences = 4 + v % 3; },
        [](RunConfig& c, int v) { c.max_sentences = 8 + v; },
        [](RunConfig& c, int v) { c.cluster_threshold = 0.61 + v * 0.01; },
        [](RunConfig& c, int v) { c.ngram_min = 2 + v % 3; },
        [](RunConfig& c, int v) { c.ngram_max = 6 + v; },
        [](RunConfig& c, int) { c.surprise_mode = SurpriseMode::adjacent_distance; },
        [](RunConfig& c, int v) { c.output_dir = "/tmp/out" + std::to_string(v); },
        [](RunConfig& c, int v) { c.seed = 1 + static_cast<std::uint64_t>(v); },
    };
    std::uniform_int_distribution<std::size_t> pick(0, mutations.size() - 1);
    std::uniform_int_distribution<int> value(0, 1000);
    std::uniform_int_distribution<unsigned> threads(0, 64);
    for (int i = 0; i < kInstances; ++i) {
        auto changed = base;
        mutations[pick(rng)](changed, value(rng));
        ASSERT_NE(changed.hash(), base.hash());
        // the worker count never affects outputs, so it stays out of the hash
        auto same = base;
        same.threads = threads(rng);
        ASSERT_EQ(same.hash(), base.hash());
        ASSERT_EQ(RunConfig::from_json(changed.to_json()).hash(), changed.hash());
    }
    record_instances(kInstances);
}
