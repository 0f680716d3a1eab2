#include "storyeval/metrics_semantic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "storyeval/error.hpp"

namespace storyeval {

std::string_view to_string(SurpriseMode mode) {
    return mode == SurpriseMode::dispersion_delta ? "dispersion_delta" : "adjacent_distance";
}

SurpriseMode parse_surprise_mode(std::string_view text) {
    if (text == "dispersion_delta") return SurpriseMode::dispersion_delta;
    if (text == "adjacent_distance") return SurpriseMode::adjacent_distance;
    throw ValidationError("unknown surprise mode: " + std::string(text));
}

namespace {

std::vector<std::vector<std::string>> sentence_words(const Annotation& annotation, const NgramOptions& options) {
    std::vector<std::vector<std::string>> out;
    out.reserve(annotation.sentences.size());
    for (const auto& s : annotation.sentences) {
        std::vector<std::string> words;
        for (const auto& t : s.tokens) {
            if (t.is_punct() && !options.include_punctuation) continue;
            std::string w = t.text;
            if (options.lowercase) {
                std::transform(w.begin(), w.end(), w.begin(),
                               [](unsigned char c) { return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c); });
            }
            words.push_back(std::move(w));
        }
        out.push_back(std::move(words));
    }
    return out;
}

// n-grams joined with a separator that cannot occur inside a token
std::string join_gram(const std::vector<std::string>& words, std::size_t start, int n) {
    std::string key = words[start];
    for (int k = 1; k < n; ++k) {
        key += '\x1f';
        key += words[start + static_cast<std::size_t>(k)];
    }
    return key;
}

std::vector<EmbeddingVector> embed_terms(std::span<const std::string> terms, Embedder& embedder) {
    return embedder.embed(terms);
}

}  // namespace

std::vector<std::string> ngrams(const Annotation& annotation, int n, const NgramOptions& options) {
    if (n < 1) throw ValidationError("n-gram order must be positive");
    std::vector<std::string> out;
    for (const auto& words : sentence_words(annotation, options)) {
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= words.size(); ++i) {
            std::string gram = words[i];
            for (int k = 1; k < n; ++k) gram += ' ' + words[i + static_cast<std::size_t>(k)];
            out.push_back(std::move(gram));
        }
    }
    return out;
}

std::optional<double> ngram_diversity(const Annotation& annotation, int n, const NgramOptions& options) {
    if (n < 1) throw ValidationError("n-gram order must be positive");
    std::unordered_set<std::string> distinct;
    std::size_t total = 0;
    for (const auto& words : sentence_words(annotation, options)) {
        if (words.size() < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= words.size(); ++i) {
            distinct.insert(join_gram(words, i, n));
            ++total;
        }
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(distinct.size()) / static_cast<double>(total);
}

std::optional<double> mean_ngram_diversity(const Annotation& annotation, const NgramOptions& options, int min_n,
                                           int max_n) {
    double sum = 0.0;
    int defined = 0;
    for (int n = min_n; n <= max_n; ++n) {
        if (auto v = ngram_diversity(annotation, n, options)) {
            sum += *v;
            ++defined;
        }
    }
    if (defined == 0) return std::nullopt;
    return sum / defined;
}

double inverse_homogenization(std::size_t index, std::span<const EmbeddingVector> item_set_stories) {
    if (item_set_stories.size() < 2) throw DomainError("inverse homogenization needs at least two stories in the item set");
    if (index >= item_set_stories.size()) throw std::out_of_range("story index out of range");
    double sum = 0.0;
    for (std::size_t j = 0; j < item_set_stories.size(); ++j) {
        if (j != index) sum += semantic_distance(item_set_stories[index], item_set_stories[j]);
    }
    return sum / static_cast<double>(item_set_stories.size() - 1);
}

double inverse_homogenization(const std::string& story_id, std::span<const std::string> story_ids,
                              std::span<const EmbeddingVector> item_set_stories) {
    if (story_ids.size() != item_set_stories.size()) throw ValidationError("ids and embeddings differ in length");
    const auto it = std::find(story_ids.begin(), story_ids.end(), story_id);
    if (it == story_ids.end()) throw ValidationError("story " + story_id + " is not in the item set");
    return inverse_homogenization(static_cast<std::size_t>(it - story_ids.begin()), item_set_stories);
}

std::optional<double> dispersion(std::span<const EmbeddingVector> vectors, const DispersionOptions& options) {
    const std::size_t n = vectors.size();
    if (n < 2) return std::nullopt;
    // Sum over ordered pairs of (1 - cos) = n(n-1) - (|sum of unit vectors|^2 - n),
    // which keeps large term sets linear in |T|.
    const std::size_t dim = vectors.front().dimension();
    std::vector<double> total(dim, 0.0);
    for (const auto& v : vectors) {
        if (v.dimension() != dim || v.model_id != vectors.front().model_id) {
            throw DomainError("dispersion: vectors from different models or dimensions");
        }
        double norm = 0.0;
        for (double x : v.values) norm += x * x;
        if (norm == 0.0) throw DomainError("dispersion: zero-norm vector");
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < dim; ++k) total[k] += v.values[k] / norm;
    }
    double sq = 0.0;
    for (double x : total) sq += x * x;
    const double nn = static_cast<double>(n);
    const double pair_sum = std::max(0.0, nn * (nn - 1.0) - (sq - nn));
    return options.mean_over_pairs ? pair_sum / (nn * (nn - 1.0)) : pair_sum / nn;
}

std::optional<double> dominant_term_dispersion(std::span<const std::string> terms, Embedder& embedder,
                                               const DispersionOptions& options) {
    std::vector<std::string> unique;
    std::unordered_set<std::string> seen;
    for (const auto& t : terms) {
        if (seen.insert(t).second) unique.push_back(t);
    }
    if (unique.size() < 2) return std::nullopt;
    const auto vectors = embed_terms(unique, embedder);
    return dispersion(vectors, options);
}

double corpus_dispersion(std::span<const Annotation> annotations, Embedder& embedder,
                         const DispersionOptions& options) {
    // Sorted so the result does not depend on story order.
    std::set<std::string> terms;
    for (const auto& a : annotations) {
        for (auto& t : dominant_terms(a)) terms.insert(std::move(t));
    }
    const std::vector<std::string> list(terms.begin(), terms.end());
    auto d = dominant_term_dispersion(list, embedder, options);
    if (!d) throw DomainError("corpus dispersion needs at least two distinct dominant terms");
    return *d;
}

std::optional<double> novelty(std::optional<double> story_dispersion, std::optional<double> corpus) {
    if (!story_dispersion || !corpus) return std::nullopt;
    return 2.0 * std::abs(*story_dispersion - *corpus);
}

SurpriseResult surprise(const Annotation& annotation, Embedder& embedder, SurpriseMode mode,
                        const DispersionOptions& options) {
    SurpriseResult result;
    const auto& sentences = annotation.sentences;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto terms = dominant_terms(sentences[i]);
        auto d = dominant_term_dispersion(terms, embedder, options);
        if (!d && mode == SurpriseMode::dispersion_delta) {
            result.warnings.push_back("story " + annotation.story_id + ": sentence " + std::to_string(i) +
                                      " has fewer than two dominant terms; dispersion set to 0");
        }
        result.fragment_dispersions.push_back(d.value_or(0.0));
    }
    if (mode == SurpriseMode::dispersion_delta) {
        for (std::size_t i = 1; i < result.fragment_dispersions.size(); ++i) {
            result.steps.push_back(std::abs(result.fragment_dispersions[i] - result.fragment_dispersions[i - 1]));
        }
    } else {
        std::vector<std::string> texts;
        for (const auto& s : sentences) texts.push_back(s.text);
        if (texts.size() >= 2) {
            const auto vectors = embedder.embed(texts);
            for (std::size_t i = 1; i < vectors.size(); ++i) {
                result.steps.push_back(semantic_distance(vectors[i], vectors[i - 1]));
            }
        }
    }
    if (sentences.size() < 2) {
        result.warnings.push_back("story " + annotation.story_id + ": single sentence, surprise undefined");
        return result;
    }
    double sum = 0.0;
    for (double s : result.steps) sum += s;
    result.value = 2.0 * sum / static_cast<double>(sentences.size() - 1);
    return result;
}

std::vector<ProfilePoint> surprise_profile(std::span<const std::vector<double>> steps) {
    std::map<int, std::pair<double, std::size_t>> acc;
    for (const auto& story : steps) {
        for (std::size_t i = 0; i < story.size(); ++i) {
            auto& [sum, count] = acc[static_cast<int>(i) + 2];
            sum += story[i];
            ++count;
        }
    }
    std::vector<ProfilePoint> out;
    for (const auto& [position, entry] : acc) {
        out.push_back({position, entry.first / static_cast<double>(entry.second), entry.second});
    }
    return out;
}

std::vector<ProfilePoint> surprise_profile(std::span<const Annotation> annotations, Embedder& embedder,
                                           const DispersionOptions& options) {
    std::vector<std::vector<double>> steps;
    for (const auto& a : annotations) steps.push_back(surprise(a, embedder, SurpriseMode::dispersion_delta, options).steps);
    return surprise_profile(steps);
}

namespace {

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_from(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

Json to_json(const SemanticMetricRecord& r) {
    Json ngrams = Json::object();
    for (const auto& [n, v] : r.ngram_diversity) ngrams[std::to_string(n)] = optional_json(v);
    return Json{{"story_id", r.story_id},
                {"model_id", r.model_id},
                {"ngram_diversity", ngrams},
                {"mean_ngram_diversity", optional_json(r.mean_ngram_diversity)},
                {"inverse_homogenization", optional_json(r.inverse_homogenization)},
                {"dispersion_D", optional_json(r.dispersion_D)},
                {"corpus_dispersion", optional_json(r.corpus_dispersion)},
                {"novelty", optional_json(r.novelty)},
                {"surprise", optional_json(r.surprise)},
                {"fragment_dispersions", r.fragment_dispersions},
                {"surprise_steps", r.surprise_steps}};
}

SemanticMetricRecord semantic_record_from_json(const Json& j) {
    SemanticMetricRecord r;
    r.story_id = j.at("story_id").get<std::string>();
    r.model_id = j.value("model_id", "");
    for (const auto& [key, value] : j.at("ngram_diversity").items()) {
        r.ngram_diversity[std::stoi(key)] = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
    }
    r.mean_ngram_diversity = optional_from(j, "mean_ngram_diversity");
    r.inverse_homogenization = optional_from(j, "inverse_homogenization");
    r.dispersion_D = optional_from(j, "dispersion_D");
    r.corpus_dispersion = optional_from(j, "corpus_dispersion");
    r.novelty = optional_from(j, "novelty");
    r.surprise = optional_from(j, "surprise");
    r.fragment_dispersions = j.value("fragment_dispersions", std::vector<double>{});
    r.surprise_steps = j.value("surprise_steps", std::vector<double>{});
    return r;
}

std::vector<SemanticMetricRecord> compute_semantic_metrics(const Corpus& corpus,
                                                           std::span<const Annotation> annotations,
                                                           Embedder& embedder, const SemanticMetricsConfig& config,
                                                           std::vector<std::string>* warnings) {
    const auto& stories = corpus.stories();
    if (annotations.size() != stories.size()) throw ValidationError("annotations are not aligned with the corpus");
    auto warn = [&](std::string message) {
        if (warnings) warnings->push_back(std::move(message));
    };

    // Embed every lemma and story text up front so the backend sees large batches.
    {
        std::set<std::string> terms;
        for (const auto& a : annotations) {
            for (auto& t : dominant_terms(a)) terms.insert(std::move(t));
        }
        const std::vector<std::string> all(terms.begin(), terms.end());
        if (!all.empty()) embedder.embed(all);
    }
    std::vector<std::string> texts;
    for (const auto& s : stories) texts.push_back(s.text);
    const auto story_vectors = embedder.embed(texts);

    // reference dispersion, global or per item set
    std::map<std::string, std::optional<double>> reference;
    auto reference_for = [&](const std::string& item_set) -> std::optional<double> {
        const std::string key = config.corpus_dispersion_per_item_set ? item_set : std::string();
        if (auto it = reference.find(key); it != reference.end()) return it->second;
        std::vector<Annotation> group;
        for (std::size_t i = 0; i < stories.size(); ++i) {
            if (key.empty() || stories[i].item_set == key) group.push_back(annotations[i]);
        }
        std::optional<double> value;
        try {
            value = corpus_dispersion(group, embedder, config.dispersion);
        } catch (const DomainError& e) {
            warn(std::string("corpus dispersion undefined") + (key.empty() ? "" : " for item set " + key) + ": " +
                 e.what());
        }
        reference[key] = value;
        return value;
    };

    std::map<std::string, std::vector<std::size_t>> by_item_set;
    for (std::size_t i = 0; i < stories.size(); ++i) by_item_set[stories[i].item_set].push_back(i);

    std::vector<SemanticMetricRecord> records(stories.size());
    for (const auto& [item_set, members] : by_item_set) {
        std::vector<EmbeddingVector> group;
        for (std::size_t i : members) group.push_back(story_vectors[i]);
        for (std::size_t k = 0; k < members.size(); ++k) {
            const std::size_t i = members[k];
            auto& r = records[i];
            r.story_id = stories[i].id;
            r.model_id = embedder.model_id();
            if (group.size() >= 2) {
                r.inverse_homogenization = inverse_homogenization(k, group);
            } else {
                warn("story " + r.story_id + ": item set " + item_set + " has one story, inverse homogenization undefined");
            }
        }
    }

    for (std::size_t i = 0; i < stories.size(); ++i) {
        auto& r = records[i];
        const auto& a = annotations[i];
        for (int n = config.ngram_min; n <= config.ngram_max; ++n) r.ngram_diversity[n] = ngram_diversity(a, n, config.ngram);
        r.mean_ngram_diversity = mean_ngram_diversity(a, config.ngram, config.ngram_min, config.ngram_max);
        const auto terms = dominant_terms(a);
        r.dispersion_D = dominant_term_dispersion(terms, embedder, config.dispersion);
        if (!r.dispersion_D) warn("story " + r.story_id + ": fewer than two dominant terms, novelty undefined");
        r.corpus_dispersion = reference_for(stories[i].item_set);
        r.novelty = novelty(r.dispersion_D, r.corpus_dispersion);
        auto s = surprise(a, embedder, config.surprise_mode, config.dispersion);
        r.surprise = s.value;
        r.fragment_dispersions = std::move(s.fragment_dispersions);
        r.surprise_steps = std::move(s.steps);
        for (auto& w : s.warnings) warn(std::move(w));
    }
    return records;
}

}  // namespace storyeval
