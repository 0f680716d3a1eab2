#include "storyeval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>

#include "storyeval/error.hpp"
#include "storyeval/stats.hpp"

namespace storyeval {

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

GroupComparison welch_t_test(std::span<const double> a, std::span<const double> b, const TTestOptions& options) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("t test needs at least two values per group");
    for (auto xs : {a, b}) {
        for (double x : xs) {
            if (!std::isfinite(x)) throw DomainError("t test on a non-finite value");
        }
    }
    GroupComparison c;
    c.n_a = a.size();
    c.n_b = b.size();
    c.mean_a = stats::mean(a);
    c.mean_b = stats::mean(b);
    const double va = stats::variance(a), vb = stats::variance(b);
    c.sd_a = std::sqrt(va);
    c.sd_b = std::sqrt(vb);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double se2 = 0.0;
    if (options.pooled) {
        const double sp2 = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2);
        se2 = sp2 * (1 / na + 1 / nb);
        c.df = na + nb - 2;
    } else {
        const double qa = va / na, qb = vb / nb;
        se2 = qa + qb;
        c.df = se2 > 0 ? se2 * se2 / (qa * qa / (na - 1) + qb * qb / (nb - 1)) : na + nb - 2;
    }
    const double diff = c.mean_a - c.mean_b;
    if (se2 <= 0.0) {
        if (diff != 0.0) throw DomainError("t test: both groups are constant with different means");
        c.t = 0.0;
        c.p = 1.0;
    } else {
        c.t = diff / std::sqrt(se2);
        c.p = stats::two_sided_p(c.t, c.df);
    }
    c.stars = significance_stars(c.p);
    return c;
}

std::optional<double> StoryMetrics::get(const std::string& metric) const {
    const auto it = values.find(metric);
    return it == values.end() ? std::nullopt : it->second;
}

const std::vector<std::string>& semantic_metric_names() {
    static const std::vector<std::string> names{
        "mean_ngram_diversity", "ngram_diversity_1", "ngram_diversity_2", "ngram_diversity_3", "ngram_diversity_4",
        "ngram_diversity_5",    "inverse_homogenization", "dispersion_D", "novelty", "surprise"};
    return names;
}

const std::vector<std::string>& lexical_complexity_names() {
    static const std::vector<std::string> names{"unique_word_count", "avg_word_length", "avg_sentence_length",
                                                "avg_sentence_length_total", "flesch_reading_ease"};
    return names;
}

const std::vector<std::string>& syntactic_complexity_names() {
    static const std::vector<std::string> names{"noun_ratio",     "adjective_ratio", "pronoun_ratio",
                                                "adverb_ratio",   "avg_dependency_path_length",
                                                "avg_constituency_tree_depth"};
    return names;
}

std::vector<StoryMetrics> assemble_metrics(const Corpus& corpus, std::span<const SemanticMetricRecord> semantic,
                                           std::span<const ComplexityRecord> complexity) {
    std::unordered_map<std::string, const SemanticMetricRecord*> sem;
    for (const auto& r : semantic) sem[r.story_id] = &r;
    std::unordered_map<std::string, const ComplexityRecord*> cx;
    for (const auto& r : complexity) cx[r.story_id] = &r;

    std::vector<StoryMetrics> out;
    out.reserve(corpus.size());
    for (const auto& s : corpus.stories()) {
        StoryMetrics m{s.id, s.author_kind, s.item_set, {}};
        if (auto it = sem.find(s.id); it != sem.end()) {
            const auto& r = *it->second;
            m.values["mean_ngram_diversity"] = r.mean_ngram_diversity;
            for (const auto& [n, v] : r.ngram_diversity) m.values["ngram_diversity_" + std::to_string(n)] = v;
            m.values["inverse_homogenization"] = r.inverse_homogenization;
            m.values["dispersion_D"] = r.dispersion_D;
            m.values["novelty"] = r.novelty;
            m.values["surprise"] = r.surprise;
        }
        if (auto it = cx.find(s.id); it != cx.end()) {
            const auto& r = *it->second;
            m.values["unique_word_count"] = r.lexical.unique_word_count;
            m.values["avg_word_length"] = r.lexical.avg_word_length;
            m.values["avg_sentence_length"] = r.lexical.avg_sentence_length;
            m.values["avg_sentence_length_total"] = r.lexical.avg_sentence_length_total;
            m.values["flesch_reading_ease"] = r.lexical.flesch_reading_ease;
            m.values["noun_ratio"] = r.syntactic.pos_ratios.noun;
            m.values["adjective_ratio"] = r.syntactic.pos_ratios.adjective;
            m.values["pronoun_ratio"] = r.syntactic.pos_ratios.pronoun;
            m.values["adverb_ratio"] = r.syntactic.pos_ratios.adverb;
            m.values["avg_dependency_path_length"] = r.syntactic.avg_dependency_path_length;
            m.values["avg_constituency_tree_depth"] = r.syntactic.avg_constituency_tree_depth;
            m.values["pronoun_first"] = r.pronoun_profile.first;
            m.values["pronoun_second"] = r.pronoun_profile.second;
            m.values["pronoun_third_singular"] = r.pronoun_profile.third_singular;
            m.values["pronoun_third_plural"] = r.pronoun_profile.third_plural;
        }
        out.push_back(std::move(m));
    }
    return out;
}

GroupComparison compare_authors(std::span<const StoryMetrics> stories, const std::string& metric,
                                const TTestOptions& options) {
    std::vector<double> human, ai;
    for (const auto& s : stories) {
        if (auto v = s.get(metric)) (s.author_kind == AuthorKind::human ? human : ai).push_back(*v);
    }
    auto c = welch_t_test(human, ai, options);
    c.metric = metric;
    c.group_a = "human";
    c.group_b = "ai";
    return c;
}

std::vector<StratifiedComparison> stratify_by_semdis(std::span<const StoryMetrics> stories,
                                                     std::span<const ItemSet> item_sets,
                                                     std::span<const std::string> metrics,
                                                     const TTestOptions& options) {
    std::unordered_map<std::string, SemdisCategory> category;
    for (const auto& i : item_sets) category[i.id] = i.semdis_category;
    std::vector<StratifiedComparison> out;
    for (auto kind : {AuthorKind::human, AuthorKind::ai}) {
        for (const auto& metric : metrics) {
            std::vector<double> low, high;
            for (const auto& s : stories) {
                if (s.author_kind != kind) continue;
                const auto it = category.find(s.item_set);
                if (it == category.end()) throw ValidationError("story " + s.story_id + " has an unknown item set");
                if (auto v = s.get(metric)) (it->second == SemdisCategory::low ? low : high).push_back(*v);
            }
            if (low.empty() || high.empty()) {
                throw DomainError("empty semantic-distance stratum for " + std::string(to_string(kind)) + " " + metric);
            }
            auto c = welch_t_test(low, high, options);
            c.metric = metric;
            c.group_a = "low";
            c.group_b = "high";
            out.push_back({kind, std::move(c)});
        }
    }
    return out;
}

CorrelationMatrix correlation_matrix(std::span<const std::string> names, std::span<const std::vector<double>> columns) {
    if (names.size() != columns.size()) throw ValidationError("correlation: names and columns differ in count");
    const std::size_t k = columns.size();
    for (const auto& c : columns) {
        if (c.size() < 3) throw DomainError("correlation needs at least three observations");
        if (c.size() != columns.front().size()) throw ValidationError("correlation columns differ in length");
    }
    CorrelationMatrix m;
    m.names.assign(names.begin(), names.end());
    m.r.assign(k, std::vector<std::optional<double>>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            auto r = stats::pearson(columns[i], columns[j]);
            if (i == j && r) r = 1.0;
            m.r[i][j] = m.r[j][i] = r;
        }
    }
    return m;
}

CorrelationMatrix rating_correlations(std::span<const CompositeRating> composites, JudgeType type) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns(kRatingVariables.size());
    for (auto v : kRatingVariables) names.emplace_back(to_string(v));
    for (const auto& c : composites) {
        if (c.judge_type != type) continue;
        for (std::size_t i = 0; i < kRatingVariables.size(); ++i) columns[i].push_back(c.values[i]);
    }
    return correlation_matrix(names, columns);
}

std::string select_representative_metric(std::span<const Candidate> candidates, std::span<const double> ratings) {
    std::string best;
    double best_r = -1.0;
    int defined = 0;
    for (const auto& c : candidates) {
        if (c.values.size() != ratings.size()) throw ValidationError("candidate " + c.name + " is not aligned with ratings");
        std::vector<double> x, y;
        for (std::size_t i = 0; i < ratings.size(); ++i) {
            if (c.values[i]) {
                x.push_back(*c.values[i]);
                y.push_back(ratings[i]);
            }
        }
        const auto r = stats::pearson(x, y);
        if (!r) continue;
        ++defined;
        if (std::abs(*r) > best_r) {
            best_r = std::abs(*r);
            best = c.name;
        }
    }
    if (defined < 2) throw DomainError("representative metric selection needs two candidates with defined correlations");
    return best;
}

const Coefficient& RegressionResult::at(std::string_view predictor) const {
    for (const auto& c : coefficients) {
        if (c.predictor == predictor) return c;
    }
    throw std::out_of_range("no coefficient for " + std::string(predictor));
}

namespace {

Eigen::VectorXd zscore(const Eigen::VectorXd& v, const std::string& name) {
    const double m = v.mean();
    const double sd = std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size() - 1));
    if (!(sd > 0.0)) throw DomainError("regression: " + name + " is constant and collinear with the intercept");
    return (v.array() - m) / sd;
}

}  // namespace

RegressionResult ols_standardized(std::span<const std::string> predictor_names,
                                  std::span<const std::vector<std::optional<double>>> predictors,
                                  std::span<const std::optional<double>> outcome, std::string outcome_name) {
    const std::size_t p = predictors.size();
    if (predictor_names.size() != p) throw ValidationError("regression: names and predictors differ in count");
    for (const auto& col : predictors) {
        if (col.size() != outcome.size()) throw ValidationError("regression: predictor not aligned with outcome");
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        bool complete = outcome[i].has_value() && std::isfinite(*outcome[i]);
        for (std::size_t j = 0; j < p && complete; ++j) complete = predictors[j][i].has_value() && std::isfinite(*predictors[j][i]);
        if (complete) rows.push_back(i);
    }
    RegressionResult result;
    result.outcome = std::move(outcome_name);
    result.n = rows.size();
    result.dropped = outcome.size() - rows.size();
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (rows.size() < p + 2) throw DomainError("regression: too few complete rows (" + std::to_string(rows.size()) + ")");

    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(p + 1));
    x.col(0).setOnes();
    for (std::size_t j = 0; j < p; ++j) {
        Eigen::VectorXd col(n);
        for (Eigen::Index i = 0; i < n; ++i) col(i) = *predictors[j][rows[static_cast<std::size_t>(i)]];
        x.col(static_cast<Eigen::Index>(j + 1)) = zscore(col, predictor_names[j]);
    }
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = *outcome[rows[static_cast<std::size_t>(i)]];
    y = zscore(y, result.outcome);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) {
        // columns pivoted past the rank are linear combinations of the others
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < x.cols(); ++k) {
            const auto col = perm(k);
            if (!names.empty()) names += ", ";
            names += col == 0 ? std::string("(intercept)") : predictor_names[static_cast<std::size_t>(col - 1)];
        }
        throw DomainError("regression design is rank deficient; collinear predictors: " + names);
    }
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - x * beta;
    const double rss = resid.squaredNorm();
    const double df = static_cast<double>(n) - static_cast<double>(p + 1);
    const double sigma2 = rss / df;
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
    result.df = df;
    result.intercept = beta(0);
    result.r_squared = 1.0 - rss / y.squaredNorm();
    for (std::size_t j = 0; j < p; ++j) {
        const auto k = static_cast<Eigen::Index>(j + 1);
        Coefficient c;
        c.predictor = predictor_names[j];
        c.beta = beta(k);
        c.se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(k, k)));
        if (c.se > 0.0) {
            c.t = c.beta / c.se;
            c.p = stats::two_sided_p(c.t, df);
        } else {
            // exact fit: zero coefficients carry no evidence, others are certain
            c.t = c.beta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), c.beta);
            c.p = c.beta == 0.0 ? 1.0 : 0.0;
        }
        c.stars = significance_stars(c.p);
        result.coefficients.push_back(std::move(c));
    }
    return result;
}

namespace {

std::unordered_map<std::string, double> creativity_by_story(std::span<const CompositeRating> composites, JudgeType type) {
    std::unordered_map<std::string, double> out;
    for (const auto& c : composites) {
        if (c.judge_type == type) out[c.story_id] = c.value(RatingVariable::creativity);
    }
    return out;
}

}  // namespace

RegressionResult regress_creativity(std::span<const StoryMetrics> stories, std::span<const CompositeRating> composites,
                                    JudgeType type, const RegressionSpec& spec) {
    const auto creativity = creativity_by_story(composites, type);
    const std::array<std::string, 6> sources = {"inverse_homogenization", "mean_ngram_diversity", "novelty",
                                                "surprise",               spec.syntactic_metric,  spec.lexical_metric};
    std::vector<std::string> names(kRegressionPredictors.begin(), kRegressionPredictors.end());
    std::vector<std::vector<std::optional<double>>> columns(sources.size());
    std::vector<std::optional<double>> outcome;
    for (const auto& s : stories) {
        const auto it = creativity.find(s.story_id);
        if (it == creativity.end()) continue;  // unrated stories are not part of the sample
        outcome.push_back(it->second);
        for (std::size_t j = 0; j < sources.size(); ++j) columns[j].push_back(s.get(sources[j]));
    }
    auto result = ols_standardized(names, columns, outcome, "creativity");
    return result;
}

RegressionSpec select_regression_spec(std::span<const StoryMetrics> stories,
                                      std::span<const CompositeRating> composites, JudgeType type) {
    const auto creativity = creativity_by_story(composites, type);
    std::vector<double> ratings;
    std::vector<const StoryMetrics*> rated;
    for (const auto& s : stories) {
        if (auto it = creativity.find(s.story_id); it != creativity.end()) {
            ratings.push_back(it->second);
            rated.push_back(&s);
        }
    }
    auto candidates_for = [&](const std::vector<std::string>& names) {
        std::vector<Candidate> out;
        for (const auto& name : names) {
            Candidate c{name, {}};
            for (const auto* s : rated) c.values.push_back(s->get(name));
            out.push_back(std::move(c));
        }
        return out;
    };
    RegressionSpec spec;
    spec.syntactic_metric = select_representative_metric(candidates_for(syntactic_complexity_names()), ratings);
    spec.lexical_metric = select_representative_metric(candidates_for(lexical_complexity_names()), ratings);
    return spec;
}

Json to_json(const GroupComparison& c) {
    return Json{{"metric", c.metric}, {"group_a", c.group_a}, {"group_b", c.group_b}, {"mean_a", c.mean_a},
                {"sd_a", c.sd_a},     {"n_a", c.n_a},         {"mean_b", c.mean_b},   {"sd_b", c.sd_b},
                {"n_b", c.n_b},       {"t", c.t},             {"df", c.df},           {"p", c.p},
                {"stars", c.stars}};
}

Json to_json(const RegressionResult& r) {
    Json coefs = Json::array();
    for (const auto& c : r.coefficients) {
        coefs.push_back(Json{{"predictor", c.predictor},
                             {"beta", c.beta},
                             {"se", c.se},
                             {"t", std::isfinite(c.t) ? Json(c.t) : Json(c.t > 0 ? "inf" : "-inf")},
                             {"p", c.p},
                             {"stars", c.stars}});
    }
    return Json{{"outcome", r.outcome}, {"n", r.n},   {"dropped", r.dropped},       {"df", r.df},
                {"intercept", r.intercept}, {"r_squared", r.r_squared}, {"coefficients", coefs}};
}

Json to_json(const CorrelationMatrix& m) {
    Json rows = Json::array();
    for (const auto& row : m.r) {
        Json jr = Json::array();
        for (const auto& v : row) jr.push_back(v ? Json(*v) : Json(nullptr));
        rows.push_back(std::move(jr));
    }
    return Json{{"names", m.names}, {"r", rows}};
}

std::string regression_table(std::span<const RegressionResult> results, std::span<const std::string> labels) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "predictor";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (const char* predictor : kRegressionPredictors) {
        out << predictor;
        for (const auto& r : results) {
            const auto& c = r.at(predictor);
            out << ',' << c.beta << " (" << c.se << ") t=" << c.t << " p=" << std::setprecision(3) << c.p << std::setprecision(2) << c.stars;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace storyeval
