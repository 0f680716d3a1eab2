#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "storyeval/error.hpp"
#include "storyeval/metrics_semantic.hpp"
#include "storyeval/store.hpp"
#include "storyeval/themes.hpp"

namespace storyeval {

enum class Stage { ingest, annotate, metrics, themes, judges, analysis, report };

inline constexpr std::array<Stage, 7> kStages = {Stage::ingest,  Stage::annotate, Stage::metrics, Stage::themes,
                                                 Stage::judges,  Stage::analysis, Stage::report};

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);
/// Stages whose outputs `stage` reads.
std::vector<Stage> upstream(Stage stage);

/// Raised when a stage fails; the message is prefixed with the stage name.
class StageError : public Error {
public:
    StageError(Stage stage, const std::string& what);
    Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

inline constexpr const char* kRuleBasedAnnotatorId = "rule-based-en@1.0.0";
inline constexpr const char* kStubModel = "stub";

struct RunConfig {
    std::filesystem::path corpus_path;
    /// Empty means the built-in item sets.
    std::filesystem::path item_sets_path;
    std::optional<std::filesystem::path> ratings_path;
    std::optional<std::filesystem::path> exclusions_path;
    /// "stub" selects the hash-derived stub embeddings; anything else is a
    /// model id handed to `embedding_command`.
    std::string embedding_model = kStubModel;
    std::size_t stub_dimension = 64;
    std::string embedding_command;
    /// Empty means <output_dir>/embedding_cache.jsonl.
    std::filesystem::path embedding_cache;
    std::string annotator = kRuleBasedAnnotatorId;
    int min_sentences = 3;
    int max_sentences = 7;
    double cluster_threshold = kDefaultThemeThreshold;
    int ngram_min = 1;
    int ngram_max = 5;
    SurpriseMode surprise_mode = SurpriseMode::dispersion_delta;
    std::filesystem::path output_dir = "results";
    std::uint64_t seed = 0;
    /// Worker threads for per-story work; 0 picks the hardware count.
    /// Not part of the config hash since results do not depend on it.
    unsigned threads = 0;

    /// Throws ValidationError for bad ranges, unknown annotators or missing
    /// input files.
    void validate() const;
    /// Canonical form: sorted keys, generic path strings.
    Json to_json() const;
    static RunConfig from_json(const Json& j);
    /// SHA-256 of the canonical JSON.
    std::string hash() const;
};

struct StageRecord {
    Stage stage = Stage::ingest;
    /// "complete", "cached" (outputs already current) or "skipped".
    std::string status;
    double duration_ms = 0.0;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    std::string error;
};

struct RunManifest {
    std::string config_hash;
    Json config;
    std::vector<StageRecord> stages;

    const StageRecord* find(Stage stage) const;
    Json to_json() const;
};

struct RunOptions {
    /// Re-run stages even when their outputs are current.
    bool force = false;
};

/// Runs every stage in dependency order, reusing a stage's outputs when
/// its stamp (config hash plus input and output digests) still matches and
/// nothing upstream re-ran. Without a ratings path the judges and analysis
/// stages are skipped. Writes manifest.json into the output directory, also
/// on failure, then rethrows as StageError.
RunManifest run_pipeline(const RunConfig& config, const RunOptions& options = {});

/// Runs one stage against the results directory, regardless of stamps.
/// Its inputs must already be present.
StageRecord run_stage(const RunConfig& config, Stage stage);

}  // namespace storyeval
