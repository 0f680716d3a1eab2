#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "storyeval/pipeline.hpp"

using namespace storyeval;

namespace {

struct Flags {
    std::string config_file;
    std::string corpus, item_sets, ratings, exclusions;
    std::string model, command, cache;
    std::size_t stub_dimension = 0;
    std::string annotator;
    int min_sentences = 0, max_sentences = 0;
    double threshold = 0.0;
    int ngram_min = 0, ngram_max = 0;
    std::string surprise_mode;
    std::string output;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool force = false;
};

void add_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config_file, "JSON run config; flags override its fields")->check(CLI::ExistingFile);
    app.add_option("--corpus", f.corpus, "Stories, one JSON record per line");
    app.add_option("--item-sets", f.item_sets, "Item-set JSON (default: built-in sets)");
    app.add_option("--ratings", f.ratings, "Judge ratings, one JSON record per line");
    app.add_option("--exclusions", f.exclusions, "Story ids to drop, one per line");
    app.add_option("--model", f.model, "Embedding model id, or 'stub'")->envname("STORYEVAL_EMBED_MODEL");
    app.add_option("--embed-command", f.command, "Embedding program")->envname("STORYEVAL_EMBED_COMMAND");
    app.add_option("--embed-cache", f.cache, "Embedding cache file")->envname("STORYEVAL_EMBED_CACHE");
    app.add_option("--stub-dim", f.stub_dimension, "Stub embedding dimension");
    app.add_option("--annotator", f.annotator, "Annotator name@version");
    app.add_option("--min-sentences", f.min_sentences, "Sentence filter lower bound");
    app.add_option("--max-sentences", f.max_sentences, "Sentence filter upper bound");
    app.add_option("--cluster-threshold", f.threshold, "Ward distance threshold for themes");
    app.add_option("--ngram-min", f.ngram_min, "Smallest n-gram order");
    app.add_option("--ngram-max", f.ngram_max, "Largest n-gram order");
    app.add_option("--surprise-mode", f.surprise_mode, "dispersion_delta or adjacent_distance");
    app.add_option("-o,--out", f.output, "Results directory");
    app.add_option("--seed", f.seed, "Seed for stub embeddings");
    app.add_option("-j,--threads", f.threads, "Worker threads (0 = all cores)");
    app.add_flag("--force", f.force, "Re-run stages whose outputs are current");
}

RunConfig build_config(const CLI::App& app, const Flags& f) {
    RunConfig c;
    if (!f.config_file.empty()) c = RunConfig::from_json(read_json(f.config_file));
    const auto given = [&](const char* name) { return app.count(name) > 0 || !app.get_option(name)->empty(); };
    if (given("--corpus")) c.corpus_path = f.corpus;
    if (given("--item-sets")) c.item_sets_path = f.item_sets;
    if (given("--ratings")) c.ratings_path = f.ratings;
    if (given("--exclusions")) c.exclusions_path = f.exclusions;
    if (given("--model")) c.embedding_model = f.model;
    if (given("--embed-command")) c.embedding_command = f.command;
    if (given("--embed-cache")) c.embedding_cache = f.cache;
    if (given("--stub-dim")) c.stub_dimension = f.stub_dimension;
    if (given("--annotator")) c.annotator = f.annotator;
    if (given("--min-sentences")) c.min_sentences = f.min_sentences;
    if (given("--max-sentences")) c.max_sentences = f.max_sentences;
    if (given("--cluster-threshold")) c.cluster_threshold = f.threshold;
    if (given("--ngram-min")) c.ngram_min = f.ngram_min;
    if (given("--ngram-max")) c.ngram_max = f.ngram_max;
    if (given("--surprise-mode")) c.surprise_mode = parse_surprise_mode(f.surprise_mode);
    if (given("--out")) c.output_dir = f.output;
    if (given("--seed")) c.seed = f.seed;
    c.threads = f.threads;
    return c;
}

void print(const StageRecord& r) {
    std::printf("%-9s %-8s %8.1f ms\n", std::string(to_string(r.stage)).c_str(), r.status.c_str(), r.duration_ms);
    for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Creativity and complexity metrics for human and machine written stories"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags flags;
    add_flags(app, flags);

    std::optional<Stage> single;
    bool all = false;
    const std::pair<const char*, Stage> stage_commands[] = {
        {"ingest", Stage::ingest},   {"annotate", Stage::annotate}, {"metrics", Stage::metrics},
        {"themes", Stage::themes},   {"judges", Stage::judges},     {"analyze", Stage::analysis},
        {"report", Stage::report}};
    const char* help[] = {"Load, filter and store the corpus",
                          "Tokenize, tag and parse every story",
                          "Semantic and complexity metrics",
                          "Cluster stories into themes",
                          "Aggregate judge ratings",
                          "Group comparisons and creativity regressions",
                          "Tables, 5-gram lists, figures and report.md"};
    for (std::size_t i = 0; i < std::size(stage_commands); ++i) {
        auto* sub = app.add_subcommand(stage_commands[i].first, help[i]);
        const Stage stage = stage_commands[i].second;
        sub->callback([&single, stage] { single = stage; });
    }
    app.add_subcommand("run-all", "Run every stage, reusing current outputs")->callback([&all] { all = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = build_config(app, flags);
        if (all) {
            const auto manifest = run_pipeline(config, RunOptions{flags.force});
            for (const auto& r : manifest.stages) print(r);
            std::printf("config %s\n", manifest.config_hash.c_str());
        } else if (single) {
            print(run_stage(config, *single));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
